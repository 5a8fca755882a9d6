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

#include <complex>
#include <limits>

#include "thz/random.hpp"

namespace thz {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// sqrt(2K) above which the amplitude law is replaced by its normal
/// approximation.
inline constexpr double kNormalApproxThreshold = 10.0;

/// LoS-to-diffuse power ratio a / (gamma beta (1 - a)); +inf when the diffuse
/// part vanishes. Domain: a in (0, 1], beta in [0, 1], gamma in [0, 1).
double rician_factor(double a, double beta, double gamma);

/// sigma_l^2 = a + gamma beta (1 - a).
double total_channel_power(double a, double beta, double gamma);

/// Unified LoS channel: transmittance a, trapped fraction beta, scattering
/// share gamma, thermal noise sigma^2 and received mean symbol energy Es.
struct ChannelModel {
  double a;
  double beta;
  double gamma;
  double sigma_l_sq;
  double rician_k;
  double thermal_noise_w;
  double es_bar_w;

  static ChannelModel make(double a, double beta, double gamma, double thermal_noise_w,
                           double es_bar_w);
  /// Thermal-only receive SNR is the sweep variable; Es is held fixed.
  static ChannelModel from_rx_snr(double a, double beta, double gamma, double rx_snr,
                                  double es_bar_w = 1.0);

  double sigma_l() const;
  double rx_snr() const { return es_bar_w / thermal_noise_w; }
  double diffuse_power() const { return gamma * beta * (1.0 - a); }
  /// beta (1 - gamma) (1 - a): share of symbol energy re-radiated as noise.
  double reradiated_noise_share() const { return beta * (1.0 - gamma) * (1.0 - a); }
};

/// Received mean symbol energy (c / 4 pi f d)^2 E_avg.
double received_symbol_energy(double transmit_energy_w, double frequency_hz, double distance_m);

/// sigma^2 + Es beta (1 - gamma) (1 - a).
double noise_variance(const ChannelModel& model);

struct ChannelDraw {
  std::complex<double> h;
  double amplitude;
  double phase;
};

/// One realisation of h. Every call consumes the same number of variates
/// regardless of gamma, so streams stay aligned across parameter sweeps.
ChannelDraw sample_channel(const ChannelModel& model, CounterStream& rng);

/// Rician amplitude density; switches to the normal approximation when
/// sqrt(2K) > kNormalApproxThreshold. K = inf throws DegenerateDistribution.
double amplitude_pdf(double r, double rician_k, double sigma_l);
double amplitude_pdf_exact(double r, double rician_k, double sigma_l);
double amplitude_pdf_normal(double r, double rician_k, double sigma_l);

/// 1 - Q1(sqrt(2K), r sqrt(2(K+1)) / sigma_l), same switchover as the pdf.
double amplitude_cdf(double r, double rician_k, double sigma_l);
double amplitude_cdf_exact(double r, double rician_k, double sigma_l);
double amplitude_cdf_normal(double r, double rician_k, double sigma_l);

/// Gamma_rx r^2 / (Gamma_rx beta (1 - gamma) (1 - a) + 1).
double instantaneous_snr(const ChannelModel& model, double r);

/// Mean SNR as Gamma_rx -> inf: (a + gamma beta (1-a)) / (beta (1-gamma) (1-a)),
/// +inf when the denominator vanishes.
double limiting_avg_snr(double a, double beta, double gamma);

}  // namespace thz
