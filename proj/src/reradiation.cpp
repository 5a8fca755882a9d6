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

#include "thz/reradiation.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "thz/errors.hpp"
#include "thz/parallel.hpp"
#include "thz/random.hpp"
#include "thz/stats.hpp"

namespace thz {

namespace {

constexpr std::uint32_t kBetaStream = 0xB37A0001u;
constexpr std::uint64_t kMcBlock = std::uint64_t{1} << 16;

void check_absorption(double k_per_m) {
  if (!std::isfinite(k_per_m) || k_per_m < 0.0) {
    throw InvalidParameter("absorption coefficient must be finite and non-negative");
  }
}

}  // namespace

void LinkGeometry::validate() const {
  if (!(distance_m > 0.0) || !std::isfinite(distance_m)) {
    throw InvalidParameter("link distance must be positive");
  }
  if (!(half_angle_rad > 0.0 && half_angle_rad < 0.5 * std::numbers::pi)) {
    throw InvalidParameter("beam half-angle must lie in (0, pi/2)");
  }
  if (!(eps1_m >= 0.0) || !(eps2_m >= 0.0)) {
    throw InvalidParameter("Rayleigh distances must be non-negative");
  }
  if (!(eps1_m + eps2_m < distance_m)) {
    throw InvalidParameter("Rayleigh distances must sum to less than the link distance");
  }
}

void LinkBudget::validate() const {
  if (!(p_tx_w > 0.0) || !(g_tx > 0.0) || !(a_rx_m2 > 0.0)) {
    throw InvalidParameter("link budget terms must be strictly positive");
  }
}

double beta_integrand(double x, double r, double distance_m, double k_per_m) {
  const double u = distance_m - x;
  const double rx_sq = u * u + r * r;
  const double tx_sq = x * x + r * r;
  const double rx_len = std::sqrt(rx_sq);
  const double cos_proj = u / rx_len;
  const double path = x + std::sqrt(tx_sq) + rx_len;
  return r * cos_proj * std::exp(-k_per_m * path) / (rx_sq * tx_sq);
}

QuadratureResult trapping_integral(const LinkGeometry& geom, double k_per_m,
                                   const QuadratureConfig& cfg) {
  geom.validate();
  cfg.validate();
  check_absorption(k_per_m);

  const double d = geom.distance_m;
  const double tan_theta = std::tan(geom.half_angle_rad);
  QuadratureConfig inner_cfg = cfg;
  inner_cfg.rel_tol = 0.1 * cfg.rel_tol;
  inner_cfg.abs_tol = 0.1 * cfg.abs_tol / d;

  auto radial = [&](double x) {
    auto f = [&](double r) { return beta_integrand(x, r, d, k_per_m); };
    const auto res = integrate_adaptive(f, 0.0, x * tan_theta, inner_cfg);
    if (!res.converged) {
      throw ConvergenceError("radial trapping integral did not converge at x = " +
                                 std::to_string(x),
                             res.value, res.error);
    }
    return res.value;
  };
  const auto outer = integrate_adaptive(radial, geom.eps1_m, d - geom.eps2_m, cfg);
  if (!outer.converged) {
    throw ConvergenceError("axial trapping integral did not converge", outer.value, outer.error);
  }
  return outer;
}

double beta_prefactor(double distance_m, double k_per_m) {
  check_absorption(k_per_m);
  const double kd = k_per_m * distance_m;
  if (kd == 0.0) return 0.5 * distance_m;
  return 0.5 * distance_m * kd / -std::expm1(-kd);
}

double compute_beta(const LinkGeometry& geom, double k_per_m, const QuadratureConfig& cfg) {
  check_absorption(k_per_m);
  if (k_per_m == 0.0) {
    throw DegenerateMedium("beta prefactor is 0/0 at k = 0; use beta_lossless_limit");
  }
  const auto integral = trapping_integral(geom, k_per_m, cfg);
  const double pre = beta_prefactor(geom.distance_m, k_per_m);
  const double beta = pre * integral.value;
  const double slack = pre * integral.error + 4.0 * std::numeric_limits<double>::epsilon();
  if (beta < 0.0 || beta > 1.0) {
    const double excess = beta < 0.0 ? -beta : beta - 1.0;
    if (excess > slack) {
      throw FractionOutOfRange("beta = " + std::to_string(beta) + " outside [0, 1]", beta);
    }
    std::clog << "thz: clamping beta " << beta << " into [0, 1]\n";
    return beta < 0.0 ? 0.0 : 1.0;
  }
  return beta;
}

double beta_lossless_limit(const LinkGeometry& geom, const QuadratureConfig& cfg) {
  const auto integral = trapping_integral(geom, 0.0, cfg);
  return beta_prefactor(geom.distance_m, 0.0) * integral.value;
}

MonteCarloEstimate beta_mc_oracle(const LinkGeometry& geom, double k_per_m, std::uint64_t samples,
                                  std::uint64_t seed, unsigned threads) {
  geom.validate();
  check_absorption(k_per_m);
  if (samples < 10000) throw InvalidParameter("Monte-Carlo oracle needs at least 1e4 samples");

  const double d = geom.distance_m;
  const double tan_theta = std::tan(geom.half_angle_rad);
  const double lo_sq = geom.eps1_m * geom.eps1_m;
  const double hi = d - geom.eps2_m;
  const double span_sq = hi * hi - lo_sq;
  const double area = 0.5 * tan_theta * span_sq;

  const std::uint64_t blocks = (samples + kMcBlock - 1) / kMcBlock;
  std::vector<RunningMoments> partial(blocks);
  parallel_for(blocks, threads, [&](std::size_t b) {
    const std::uint64_t begin = b * kMcBlock;
    const std::uint64_t end = std::min(samples, begin + kMcBlock);
    RunningMoments m;
    for (std::uint64_t i = begin; i < end; ++i) {
      CounterStream rng(seed, kBetaStream, i);
      const double x = std::sqrt(lo_sq + rng.uniform() * span_sq);
      const double r = rng.uniform() * x * tan_theta;
      m.add(beta_integrand(x, r, d, k_per_m));
    }
    partial[b] = m;
  });
  RunningMoments total;
  for (const auto& m : partial) total.merge(m);

  const double scale = beta_prefactor(d, k_per_m) * area;
  return {scale * total.mean, scale * total.std_error()};
}

double diffused_power(const LinkGeometry& geom, double k_per_m, const LinkBudget& budget,
                      const QuadratureConfig& cfg) {
  budget.validate();
  const auto integral = trapping_integral(geom, k_per_m, cfg);
  return k_per_m * budget.p_tx_w * budget.g_tx * budget.a_rx_m2 / (8.0 * std::numbers::pi) *
         integral.value;
}

double diffused_power_max(double distance_m, double k_per_m, const LinkBudget& budget) {
  budget.validate();
  check_absorption(k_per_m);
  if (!(distance_m > 0.0)) throw InvalidParameter("link distance must be positive");
  return budget.p_tx_w / (4.0 * std::numbers::pi * distance_m * distance_m) * budget.g_tx *
         budget.a_rx_m2 * -std::expm1(-k_per_m * distance_m);
}

}  // namespace thz
