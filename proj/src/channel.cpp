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

#include "thz/channel.hpp"

#include <cmath>
#include <numbers>

#include "thz/errors.hpp"
#include "thz/special.hpp"

namespace thz {

namespace {

constexpr double kSpeedOfLight = 299'792'458.0;

void check_channel_domain(double a, double beta, double gamma) {
  if (!(a > 0.0 && a <= 1.0)) throw InvalidParameter("transmittance must lie in (0, 1]");
  if (!(beta >= 0.0 && beta <= 1.0)) throw InvalidParameter("beta must lie in [0, 1]");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw InvalidParameter("gamma must lie in [0, 1)");
}

void check_amplitude_args(double r, double rician_k, double sigma_l) {
  if (!(r >= 0.0)) throw InvalidParameter("amplitude must be non-negative");
  if (!(sigma_l > 0.0)) throw InvalidParameter("sigma_l must be positive");
  if (std::isinf(rician_k)) {
    throw DegenerateDistribution("amplitude is deterministic when K is infinite");
  }
  if (!(rician_k >= 0.0)) throw InvalidParameter("Rician factor must be non-negative");
}

bool use_normal(double rician_k) { return std::sqrt(2.0 * rician_k) > kNormalApproxThreshold; }

}  // namespace

double rician_factor(double a, double beta, double gamma) {
  check_channel_domain(a, beta, gamma);
  const double diffuse = gamma * beta * (1.0 - a);
  return diffuse > 0.0 ? a / diffuse : kInfinity;
}

double total_channel_power(double a, double beta, double gamma) {
  check_channel_domain(a, beta, gamma);
  return a + gamma * beta * (1.0 - a);
}

ChannelModel ChannelModel::make(double a, double beta, double gamma, double thermal_noise_w,
                                double es_bar_w) {
  check_channel_domain(a, beta, gamma);
  if (!(thermal_noise_w > 0.0)) throw InvalidParameter("thermal noise must be positive");
  if (!(es_bar_w > 0.0)) throw InvalidParameter("received symbol energy must be positive");
  return ChannelModel{a,
                      beta,
                      gamma,
                      total_channel_power(a, beta, gamma),
                      rician_factor(a, beta, gamma),
                      thermal_noise_w,
                      es_bar_w};
}

ChannelModel ChannelModel::from_rx_snr(double a, double beta, double gamma, double rx_snr,
                                       double es_bar_w) {
  if (!(rx_snr > 0.0) || !std::isfinite(rx_snr)) throw InvalidParameter("rx SNR must be positive");
  return make(a, beta, gamma, es_bar_w / rx_snr, es_bar_w);
}

double ChannelModel::sigma_l() const { return std::sqrt(sigma_l_sq); }

double received_symbol_energy(double transmit_energy_w, double frequency_hz, double distance_m) {
  if (!(transmit_energy_w > 0.0) || !(frequency_hz > 0.0) || !(distance_m > 0.0)) {
    throw InvalidParameter("received_symbol_energy needs positive arguments");
  }
  const double fspl = kSpeedOfLight / (4.0 * std::numbers::pi * frequency_hz * distance_m);
  return fspl * fspl * transmit_energy_w;
}

double noise_variance(const ChannelModel& model) {
  return model.thermal_noise_w + model.es_bar_w * model.reradiated_noise_share();
}

ChannelDraw sample_channel(const ChannelModel& model, CounterStream& rng) {
  const double phase = 2.0 * std::numbers::pi * rng.uniform();
  const auto diffuse = rng.complex_normal(1.0);
  const double diffuse_power = model.diffuse_power();

  std::complex<double> h;
  if (model.gamma > 0.0 && diffuse_power > 0.0) {
    h = std::polar(std::sqrt(model.a), phase) + std::sqrt(diffuse_power) * diffuse;
  } else {
    h = std::polar(model.sigma_l(), phase);
  }
  return {h, std::abs(h), std::arg(h)};
}

double amplitude_pdf_exact(double r, double rician_k, double sigma_l) {
  check_amplitude_args(r, rician_k, sigma_l);
  const double s2 = sigma_l * sigma_l;
  const double kp1 = rician_k + 1.0;
  const double z = 2.0 * r * std::sqrt(rician_k * kp1 / s2);
  const double exponent = -rician_k - kp1 * r * r / s2 + z;
  return 2.0 * kp1 * r / s2 * std::exp(exponent) * bessel_i0_scaled(z);
}

double amplitude_pdf_normal(double r, double rician_k, double sigma_l) {
  check_amplitude_args(r, rician_k, sigma_l);
  const double kp1 = rician_k + 1.0;
  const double mean = std::sqrt(rician_k / kp1) * sigma_l;
  const double var = sigma_l * sigma_l / (2.0 * kp1);
  const double dev = r - mean;
  return std::exp(-0.5 * dev * dev / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

double amplitude_pdf(double r, double rician_k, double sigma_l) {
  check_amplitude_args(r, rician_k, sigma_l);
  return use_normal(rician_k) ? amplitude_pdf_normal(r, rician_k, sigma_l)
                              : amplitude_pdf_exact(r, rician_k, sigma_l);
}

double amplitude_cdf_exact(double r, double rician_k, double sigma_l) {
  check_amplitude_args(r, rician_k, sigma_l);
  const double alpha = std::sqrt(2.0 * rician_k);
  const double b = r * std::sqrt(2.0 * (rician_k + 1.0)) / sigma_l;
  return 1.0 - marcum_q1(alpha, b);
}

double amplitude_cdf_normal(double r, double rician_k, double sigma_l) {
  check_amplitude_args(r, rician_k, sigma_l);
  if (r == 0.0) return 0.0;
  const double kp1 = rician_k + 1.0;
  const double mean = std::sqrt(rician_k / kp1) * sigma_l;
  const double sd = sigma_l / std::sqrt(2.0 * kp1);
  return 1.0 - q_function((r - mean) / sd);
}

double amplitude_cdf(double r, double rician_k, double sigma_l) {
  check_amplitude_args(r, rician_k, sigma_l);
  return use_normal(rician_k) ? amplitude_cdf_normal(r, rician_k, sigma_l)
                              : amplitude_cdf_exact(r, rician_k, sigma_l);
}

double instantaneous_snr(const ChannelModel& model, double r) {
  if (!(r >= 0.0)) throw InvalidParameter("amplitude must be non-negative");
  const double rx = model.rx_snr();
  return rx * r * r / (rx * model.reradiated_noise_share() + 1.0);
}

double limiting_avg_snr(double a, double beta, double gamma) {
  check_channel_domain(a, beta, gamma);
  const double noise = beta * (1.0 - gamma) * (1.0 - a);
  if (noise == 0.0) return kInfinity;
  return (a + gamma * beta * (1.0 - a)) / noise;
}

}  // namespace thz
