// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "thz/ser.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "thz/errors.hpp"
#include "thz/special.hpp"

namespace thz {

namespace {

double energy_variance(double energy, const NoiseProfile& profile) {
  return profile.thermal_w + energy * profile.scale;
}

void check_ser_args(double h_mag, double delta, const NoiseProfile& profile) {
  if (!(h_mag > 0.0) || !(delta > 0.0)) throw InvalidParameter("SER needs positive |h| and delta");
  profile.validate();
}

}  // namespace

double ser_pam(int order, double h_mag, double delta, const NoiseProfile& profile) {
  if (order < 2 || order % 2 != 0) throw InvalidParameter("PAM order must be even and >= 2");
  check_ser_args(h_mag, delta, profile);

  // 1-based level i sits at (2i - 1 - M) delta.
  auto sigma = [&](int i) {
    const double x = (2.0 * i - 1.0 - order) * delta;
    return std::sqrt(energy_variance(x * x, profile));
  };
  const double c = h_mag * delta;
  const double root2 = std::numbers::sqrt2;
  const int half = order / 2;

  double sum = q_function(c / (sigma(half) / root2));
  for (int i = half + 1; i <= order - 1; ++i) {
    const double s_lo = sigma(i), s_hi = sigma(i + 1);
    const double t = pam_threshold(s_lo * s_lo, s_hi * s_hi, h_mag, delta);
    sum += q_function((t + c) / (s_lo / root2)) + q_function((c - t) / (s_hi / root2));
  }
  return std::clamp(2.0 / order * sum, 0.0, 1.0);
}

double ser_pam_ml(int order, double h_mag, double delta, const NoiseProfile& profile) {
  if (order < 2 || order % 2 != 0) throw InvalidParameter("PAM order must be even and >= 2");
  check_ser_args(h_mag, delta, profile);

  std::vector<double> pos, var;
  for (int i = 1; i <= order; ++i) {
    const double x = (2.0 * i - 1.0 - order) * delta;
    pos.push_back(h_mag * x);
    var.push_back(energy_variance(x * x, profile));
  }
  auto log_lik = [&](std::size_t i, double x) {
    const double e = x - pos[i];
    return -0.5 * std::log(var[i]) - e * e / var[i];
  };

  // Every point where two likelihoods cross.
  std::vector<double> cuts;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    for (std::size_t j = i + 1; j < pos.size(); ++j) {
      const double a = 1.0 / var[j] - 1.0 / var[i];
      const double b = 2.0 * (pos[i] / var[i] - pos[j] / var[j]);
      const double c = pos[j] * pos[j] / var[j] - pos[i] * pos[i] / var[i] + 0.5 * std::log(var[j] / var[i]);
      if (a == 0.0) {
        cuts.push_back(-c / b);
        continue;
      }
      const double disc = b * b - 4.0 * a * c;
      if (disc < 0.0) continue;
      const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
      cuts.push_back(q / a);
      if (q != 0.0) cuts.push_back(c / q);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.insert(cuts.begin(), -kInfinity);
  cuts.push_back(kInfinity);

  // Probability mass each symbol keeps on the intervals it wins.
  double correct = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k], hi = cuts[k + 1];
    if (!(hi > lo)) continue;
    const double probe = std::isinf(lo) ? hi - 1.0 : (std::isinf(hi) ? lo + 1.0 : 0.5 * (lo + hi));
    std::size_t best = 0;
    for (std::size_t i = 1; i < pos.size(); ++i) {
      if (log_lik(i, probe) > log_lik(best, probe)) best = i;
    }
    const double s = std::sqrt(0.5 * var[best]);
    correct += q_function((lo - pos[best]) / s) - q_function((hi - pos[best]) / s);
  }
  return std::clamp(1.0 - correct / order, 0.0, 1.0);
}

SerPoint ser_qam_union(int order, double h_mag, double delta, const NoiseProfile& profile) {
  if (order != 4 && order != 16 && order != 64 && order != 256) {
    throw InvalidParameter("square QAM order must be 4, 16, 64 or 256");
  }
  check_ser_args(h_mag, delta, profile);

  const int half = static_cast<int>(std::lround(std::sqrt(order))) / 2;
  const double root2 = std::numbers::sqrt2;
  // First-quadrant index 1..half; index 0 is the mirror image of index 1
  // across the axis, so it shares index 1's energy.
  auto odd = [](int i) { return 2.0 * i - 1.0; };
  auto coord = [&](int i) { return odd(i) * h_mag * delta; };
  auto variance = [&](int i, int j) {
    const double ei = odd(std::max(i, 1)), ej = odd(std::max(j, 1));
    return energy_variance((ei * ei + ej * ej) * delta * delta, profile);
  };

  // Probability that one coordinate of point (i, j) leaves its slab.
  // `along_i` picks the horizontal axis.
  auto escape = [&](int i, int j, bool along_i) {
    const int own = along_i ? i : j;
    const double p = coord(own);
    const double v = variance(i, j);
    const double s = std::sqrt(v) / root2;
    auto neighbour_var = [&](int step) {
      return along_i ? variance(i + step, j) : variance(i, j + step);
    };
    const double lower = qam_threshold(p, coord(own - 1), v, neighbour_var(-1));
    double prob = q_function((p - lower) / s);
    if (own < half) {
      const double upper = qam_threshold(p, coord(own + 1), v, neighbour_var(+1));
      prob += q_function((upper - p) / s);
    }
    return prob;
  };
  auto point_error = [&](int i, int j) {
    const double ex = escape(i, j, true), ey = escape(i, j, false);
    return ex + ey - ex * ey;
  };

  QamSerComponents parts{0.0, 0.0, 0.0};
  for (int j = 1; j < half; ++j) {
    for (int i = 1; i < half; ++i) parts.inner += point_error(i, j);
  }
  for (int i = 1; i < half; ++i) parts.side += 2.0 * point_error(i, half);
  parts.corner = point_error(half, half);

  const double total = 4.0 / order * (parts.inner + parts.side + parts.corner);
  const double thermal = profile.thermal_w;
  const double es_bar = 2.0 * delta * delta * (order - 1.0) / 3.0;
  return SerPoint{thermal > 0.0 ? es_bar / thermal : kInfinity, h_mag,
                  std::clamp(total, 0.0, 1.0), parts};
}

double ser_conditional(const Constellation& c, double h_mag, const NoiseProfile& profile) {
  return c.kind() == Modulation::Pam ? ser_pam(c.order(), h_mag, c.delta(), profile)
                                     : ser_qam_union(c.order(), h_mag, c.delta(), profile).ser;
}

double ser_fading_averaged(const Constellation& c, const ChannelModel& model,
                           const QuadratureConfig& cfg) {
  const NoiseProfile profile = NoiseProfile::from(model);
  const double sigma_l = model.sigma_l();
  if (std::isinf(model.rician_k)) return ser_conditional(c, sigma_l, profile);

  const double k = model.rician_k;
  const double los = std::sqrt(k / (k + 1.0)) * sigma_l;
  const double spread = sigma_l / std::sqrt(k + 1.0);
  const double lo = std::max(0.0, los - 12.0 * spread);
  const double hi = los + 12.0 * spread;

  auto integrand = [&](double r) {
    const double density = amplitude_pdf(r, k, sigma_l);
    if (r <= 0.0 || density == 0.0) return 0.0;
    double ser = 1.0;
    try {
      ser = ser_conditional(c, r, profile);
    } catch (const ThresholdDegeneracy&) {
      if (c.kind() == Modulation::Pam) ser = ser_pam_ml(c.order(), r, c.delta(), profile);
    }
    return ser * density;
  };
  const auto res = integrate_adaptive(integrand, lo, hi, cfg);
  if (!res.converged) {
    throw ConvergenceError("fading-averaged SER did not converge", res.value, res.error);
  }
  return std::clamp(res.value, 0.0, 1.0);
}

double ser_analytic(const Constellation& c, const ChannelModel& model, SerAveraging mode,
                    const QuadratureConfig& cfg) {
  if (mode == SerAveraging::RmsAmplitude) {
    return ser_conditional(c, model.sigma_l(), NoiseProfile::from(model));
  }
  return ser_fading_averaged(c, model, cfg);
}

}  // namespace thz
