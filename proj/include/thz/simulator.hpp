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
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "thz/channel.hpp"
#include "thz/modem.hpp"
#include "thz/random.hpp"

namespace thz {

enum class FadingMode {
  PerTrial,        // fresh channel draw every trial
  FixedAmplitude,  // |h| pinned (default sigma_l), phase still random
};

struct SimConfig {
  Modulation modulation = Modulation::Qam;
  int order = 16;
  double a = 1.0;
  double beta = 0.0;
  double gamma = 0.0;
  double es_bar_w = 1.0;
  std::vector<double> rx_snr_db;  // strictly increasing
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  FadingMode fading = FadingMode::PerTrial;
  std::optional<double> fixed_amplitude;
  bool run_optimal = true;
  bool run_suboptimal = true;
  unsigned threads = 1;

  void validate() const;
};

/// Binomial error-rate estimate. Fewer than kMinReliableErrors errors marks
/// the point unreliable.
struct SerEstimate {
  static constexpr std::uint64_t kMinReliableErrors = 20;

  std::uint64_t errors = 0;
  std::uint64_t trials = 0;
  double ser_hat = 0.0;
  double std_error = 0.0;
  bool unreliable = true;

  static SerEstimate from_counts(std::uint64_t errors, std::uint64_t trials);
};

struct SerSimPoint {
  double rx_snr_db;
  SerEstimate optimal;
  SerEstimate suboptimal;
};

struct SnrEstimate {
  double rx_snr_db;
  double mean;
  double std_error;
  std::uint64_t draws;
};

/// One transmitted symbol through the channel, already derotated by the
/// channel phase: derotated = |h| s + n e^{-j arg h}.
struct Trial {
  std::size_t symbol;
  ChannelDraw channel;
  std::complex<double> noise;
  std::complex<double> derotated;
};

/// Draws symbol, channel and per-symbol noise CN(0, sigma^2 + |s|^2 scale)
/// from `rng` in a fixed order.
Trial simulate_trial(const Constellation& c, const ChannelModel& model, FadingMode fading,
                     double fixed_amplitude, CounterStream& rng);

/// Monte-Carlo SER for both detectors on the same (paired) realisations.
/// Trial t at every grid point uses stream index t, so the whole curve shares
/// common random numbers and results do not depend on the thread count.
std::vector<SerSimPoint> run_ser_sim(const SimConfig& cfg);

/// Mean instantaneous SNR over cfg.trials channel draws per grid point.
std::vector<SnrEstimate> run_snr_sim(const SimConfig& cfg);

}  // namespace thz
