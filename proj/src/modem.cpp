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

#include "thz/modem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "thz/channel.hpp"
#include "thz/errors.hpp"

namespace thz {

namespace {

double level(int m, int side, double delta) { return (2.0 * m + 1.0 - side) * delta; }

// Log-likelihood difference l0(x) - l1(x) for the real-Gaussian pair.
double log_lik_gap(double x, double p0, double p1, double var0, double var1) {
  const double d0 = x - p0, d1 = x - p1;
  return -d0 * d0 / var0 + d1 * d1 / var1 - 0.5 * std::log(var0 / var1);
}

std::size_t nearest_in_phase(double x, std::span<const std::complex<double>> pts, double h_mag) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < pts.size(); ++m) {
    const double e = x - h_mag * pts[m].real();
    const double d = e * e;
    if (d < best_d) {
      best_d = d;
      best = m;
    }
  }
  return best;
}

std::size_t nearest_complex(std::complex<double> y, std::span<const std::complex<double>> pts,
                            double h_mag) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < pts.size(); ++m) {
    const double d = std::norm(y - h_mag * pts[m]);
    if (d < best_d) {
      best_d = d;
      best = m;
    }
  }
  return best;
}

}  // namespace

Constellation Constellation::pam(int order, double es_bar) {
  if (order < 2 || order % 2 != 0) throw InvalidParameter("PAM order must be even and >= 2");
  if (!(es_bar > 0.0)) throw InvalidParameter("symbol energy must be positive");
  const double m = order;
  const double delta = std::sqrt(3.0 * es_bar / (m * m - 1.0));
  std::vector<std::complex<double>> pts;
  pts.reserve(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) pts.emplace_back(level(i, order, delta), 0.0);
  return Constellation(Modulation::Pam, order, order, delta, es_bar, std::move(pts));
}

Constellation Constellation::qam(int order, double es_bar) {
  if (order != 4 && order != 16 && order != 64 && order != 256) {
    throw InvalidParameter("square QAM order must be 4, 16, 64 or 256");
  }
  if (!(es_bar > 0.0)) throw InvalidParameter("symbol energy must be positive");
  const int side = static_cast<int>(std::lround(std::sqrt(order)));
  const double delta = std::sqrt(3.0 * es_bar / (2.0 * (order - 1.0)));
  std::vector<std::complex<double>> pts;
  pts.reserve(static_cast<std::size_t>(order));
  for (int q = 0; q < side; ++q) {
    for (int i = 0; i < side; ++i) pts.emplace_back(level(i, side, delta), level(q, side, delta));
  }
  return Constellation(Modulation::Qam, order, side, delta, es_bar, std::move(pts));
}

Constellation Constellation::make(Modulation kind, int order, double es_bar) {
  return kind == Modulation::Pam ? pam(order, es_bar) : qam(order, es_bar);
}

double Constellation::mean_energy() const {
  double sum = 0.0;
  for (const auto& p : points_) sum += std::norm(p);
  return sum / static_cast<double>(points_.size());
}

NoiseProfile NoiseProfile::from(const ChannelModel& model) {
  return NoiseProfile{model.thermal_noise_w, model.reradiated_noise_share()};
}

void NoiseProfile::validate() const {
  if (!(thermal_w >= 0.0) || !(scale >= 0.0)) {
    throw InvalidParameter("noise profile terms must be non-negative");
  }
}

double symbol_noise_variance(std::complex<double> point, const NoiseProfile& profile) {
  return profile.thermal_w + std::norm(point) * profile.scale;
}

double qam_threshold(double p0, double p1, double var0, double var1) {
  if (p0 == p1) throw InvalidParameter("threshold needs two distinct symbol coordinates");
  if (!(var0 > 0.0) || !(var1 > 0.0)) throw InvalidParameter("variances must be positive");
  if (var0 == var1) return 0.5 * (p0 + p1);

  // Exactly one crossing inside the interval iff each symbol wins at its own
  // coordinate; otherwise a decision region has vanished.
  if (!(log_lik_gap(p0, p0, p1, var0, var1) > 0.0) ||
      !(log_lik_gap(p1, p0, p1, var0, var1) < 0.0)) {
    throw ThresholdDegeneracy("no likelihood-equality point between " + std::to_string(p0) +
                              " and " + std::to_string(p1));
  }
  const double a = var0 - var1;
  const double b = 2.0 * (p0 * var1 - p1 * var0);
  const double c = p1 * p1 * var0 - p0 * p0 * var1 - 0.5 * std::log(var0 / var1) * var0 * var1;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) throw ThresholdDegeneracy("negative discriminant in threshold quadratic");

  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  const double lo = std::min(p0, p1), hi = std::max(p0, p1);
  const double root_small = q != 0.0 ? c / q : std::numeric_limits<double>::quiet_NaN();
  const double root_large = q / a;
  if (root_small > lo && root_small < hi) return root_small;
  if (root_large > lo && root_large < hi) return root_large;
  throw ThresholdDegeneracy("threshold quadratic has no root between the symbols");
}

double pam_threshold(double var_lo, double var_hi, double h_mag, double delta) {
  if (!(h_mag > 0.0) || !(delta > 0.0)) {
    throw InvalidParameter("pam_threshold needs positive |h| and delta");
  }
  const double c = h_mag * delta;
  return qam_threshold(-c, c, var_lo, var_hi);
}

ThresholdSet pam_thresholds(const Constellation& c, double h_mag, const NoiseProfile& profile) {
  if (c.kind() != Modulation::Pam) throw InvalidParameter("pam_thresholds needs a PAM set");
  ThresholdSet out{Modulation::Pam, {}};
  const auto pts = c.points();
  out.boundaries.reserve(pts.size() - 1);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double mid = 0.5 * h_mag * (pts[i].real() + pts[i + 1].real());
    out.boundaries.push_back(mid + pam_threshold(symbol_noise_variance(pts[i], profile),
                                                 symbol_noise_variance(pts[i + 1], profile),
                                                 h_mag, c.delta()));
  }
  return out;
}

std::size_t detect_by_thresholds(double in_phase, const ThresholdSet& thresholds) {
  const auto& b = thresholds.boundaries;
  return static_cast<std::size_t>(std::lower_bound(b.begin(), b.end(), in_phase) - b.begin());
}

MlDetector::MlDetector(const Constellation& constellation, const NoiseProfile& profile)
    : kind_(constellation.kind()),
      points_(constellation.points().begin(), constellation.points().end()) {
  profile.validate();
  inv_var_.reserve(points_.size());
  log_penalty_.reserve(points_.size());
  // Complex likelihood pays ln(sigma^2); the in-phase-only PAM likelihood
  // pays half of that.
  const double weight = kind_ == Modulation::Pam ? 0.5 : 1.0;
  for (const auto& p : points_) {
    const double v = symbol_noise_variance(p, profile);
    if (!(v > 0.0)) throw InvalidParameter("symbol noise variance must be positive");
    inv_var_.push_back(1.0 / v);
    log_penalty_.push_back(weight * std::log(v));
  }
  equal_variance_ = profile.scale == 0.0;
}

std::size_t MlDetector::detect(std::complex<double> y, double h_mag) const {
  if (equal_variance_) {
    return kind_ == Modulation::Pam ? nearest_in_phase(y.real(), points_, h_mag)
                                    : nearest_complex(y, points_, h_mag);
  }
  std::size_t best = 0;
  double best_metric = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < points_.size(); ++m) {
    double dist;
    if (kind_ == Modulation::Pam) {
      const double e = y.real() - h_mag * points_[m].real();
      dist = e * e;
    } else {
      dist = std::norm(y - h_mag * points_[m]);
    }
    const double metric = -dist * inv_var_[m] - log_penalty_[m];
    if (metric > best_metric) {
      best_metric = metric;
      best = m;
    }
  }
  return best;
}

std::size_t detect_optimal(std::complex<double> y, const Constellation& constellation,
                           double h_mag, const NoiseProfile& profile) {
  return MlDetector(constellation, profile).detect(y, h_mag);
}

std::size_t detect_suboptimal(std::complex<double> y, const Constellation& constellation,
                              double h_mag) {
  return constellation.kind() == Modulation::Pam
             ? nearest_in_phase(y.real(), constellation.points(), h_mag)
             : nearest_complex(y, constellation.points(), h_mag);
}

}  // namespace thz
