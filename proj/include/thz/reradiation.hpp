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

#pragma once

#include <cstdint>

#include "thz/quadrature.hpp"

namespace thz {

/// Tx-Rx geometry of the radiation-trapping volume: a cone of half-opening
/// angle `half_angle_rad` around the link axis, with the near-field zones
/// [0, eps1) and (d - eps2, d] excluded.
struct LinkGeometry {
  double distance_m;
  double half_angle_rad;
  double eps1_m;
  double eps2_m;

  /// d > 0, 0 < theta < pi/2, eps >= 0, eps1 + eps2 < d.
  void validate() const;
};

/// Transmit power, Tx gain and Rx effective aperture. They cancel in beta.
struct LinkBudget {
  double p_tx_w;
  double g_tx;
  double a_rx_m2;

  void validate() const;
};

/// Kernel of the trapping integral at axial position x and radial offset r:
/// r cos(v) exp(-k (x + |Tx-P| + |P-Rx|)) / (|P-Rx|^2 |Tx-P|^2),
/// cos(v) = (d - x) / |P-Rx|. Units 1/m^3.
double beta_integrand(double x, double r, double distance_m, double k_per_m);

/// Double integral of beta_integrand over eps1 <= x <= d - eps2,
/// 0 <= r <= x tan(theta). Throws ConvergenceError if either level fails.
QuadratureResult trapping_integral(const LinkGeometry& geom, double k_per_m,
                                   const QuadratureConfig& cfg = {});

/// k d^2 / (2 (1 - e^{-kd})), evaluated through expm1 so tiny kd is exact;
/// returns the d/2 limit at k = 0.
double beta_prefactor(double distance_m, double k_per_m);

/// Fraction of the maximum re-radiated power that reaches the receiver.
///
/// Requires k > 0 (k = 0 throws DegenerateMedium: use beta_lossless_limit).
/// Results within the integration error of [0, 1] are clamped; larger
/// excursions throw FractionOutOfRange.
double compute_beta(const LinkGeometry& geom, double k_per_m, const QuadratureConfig& cfg = {});

/// The k -> 0 limit of compute_beta.
double beta_lossless_limit(const LinkGeometry& geom, const QuadratureConfig& cfg = {});

struct MonteCarloEstimate {
  double value;
  double std_error;
};

/// Monte-Carlo estimate of beta. (x, r) is drawn uniformly
/// over the true integration region: x with density proportional to
/// x tan(theta), then r uniform on [0, x tan(theta)]. k = 0 uses the lossless
/// prefactor. Bit-reproducible for a fixed seed at any thread count.
MonteCarloEstimate beta_mc_oracle(const LinkGeometry& geom, double k_per_m, std::uint64_t samples,
                                  std::uint64_t seed, unsigned threads = 1);

/// Total re-radiated power arriving at the receiver, W.
double diffused_power(const LinkGeometry& geom, double k_per_m, const LinkBudget& budget,
                      const QuadratureConfig& cfg = {});

/// Re-radiated power at the receiver if every absorbed watt were re-emitted
/// towards it, W.
double diffused_power_max(double distance_m, double k_per_m, const LinkBudget& budget);

}  // namespace thz
