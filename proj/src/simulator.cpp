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

#include "thz/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "thz/errors.hpp"
#include "thz/parallel.hpp"
#include "thz/stats.hpp"

namespace thz {

namespace {

constexpr std::uint32_t kSerStream = 0x5E70001u;
constexpr std::uint32_t kSnrStream = 0x5E70002u;
constexpr std::uint64_t kBlock = std::uint64_t{1} << 15;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::uint64_t block_count(std::uint64_t trials) { return (trials + kBlock - 1) / kBlock; }

}  // namespace

void SimConfig::validate() const {
  if (trials < 1) throw InvalidParameter("trials must be >= 1");
  if (rx_snr_db.empty()) throw InvalidParameter("rx SNR grid is empty");
  for (std::size_t i = 0; i < rx_snr_db.size(); ++i) {
    if (!std::isfinite(rx_snr_db[i])) throw InvalidParameter("rx SNR grid must be finite");
    if (i > 0 && !(rx_snr_db[i] > rx_snr_db[i - 1])) {
      throw InvalidParameter("rx SNR grid must be strictly increasing");
    }
  }
  if (!(es_bar_w > 0.0)) throw InvalidParameter("received symbol energy must be positive");
  if (fixed_amplitude && !(*fixed_amplitude > 0.0)) {
    throw InvalidParameter("fixed amplitude must be positive");
  }
  // Throws on out-of-domain a, beta, gamma or order.
  (void)ChannelModel::make(a, beta, gamma, 1.0, es_bar_w);
  (void)Constellation::make(modulation, order, es_bar_w);
}

SerEstimate SerEstimate::from_counts(std::uint64_t errors, std::uint64_t trials) {
  SerEstimate e;
  e.errors = errors;
  e.trials = trials;
  if (trials > 0) {
    const double n = static_cast<double>(trials);
    e.ser_hat = static_cast<double>(errors) / n;
    e.std_error = std::sqrt(e.ser_hat * (1.0 - e.ser_hat) / n);
  }
  e.unreliable = errors < kMinReliableErrors;
  return e;
}

Trial simulate_trial(const Constellation& c, const ChannelModel& model, FadingMode fading,
                     double fixed_amplitude, CounterStream& rng) {
  const auto symbol = std::min(c.size() - 1,
                               static_cast<std::size_t>(rng.uniform() * static_cast<double>(c.size())));
  ChannelDraw ch = sample_channel(model, rng);
  if (fading == FadingMode::FixedAmplitude) {
    ch.h = std::polar(fixed_amplitude, ch.phase);
    ch.amplitude = fixed_amplitude;
  }
  const auto s = c.point(symbol);
  const NoiseProfile profile = NoiseProfile::from(model);
  const auto n = rng.complex_normal(symbol_noise_variance(s, profile));
  const auto y = ch.h * s + n;
  const auto derotated = y * std::polar(1.0, -ch.phase);
  return {symbol, ch, n, derotated};
}

std::vector<SerSimPoint> run_ser_sim(const SimConfig& cfg) {
  cfg.validate();
  const auto constellation = Constellation::make(cfg.modulation, cfg.order, cfg.es_bar_w);
  const std::uint64_t blocks = block_count(cfg.trials);

  std::vector<SerSimPoint> out;
  out.reserve(cfg.rx_snr_db.size());
  for (const double snr_db : cfg.rx_snr_db) {
    const auto model = ChannelModel::from_rx_snr(cfg.a, cfg.beta, cfg.gamma, db_to_linear(snr_db),
                                                 cfg.es_bar_w);
    const double fixed = cfg.fixed_amplitude.value_or(model.sigma_l());
    const MlDetector optimal(constellation, NoiseProfile::from(model));

    std::vector<std::uint64_t> opt_err(blocks, 0), sub_err(blocks, 0);
    parallel_for(blocks, cfg.threads, [&](std::size_t b) {
      const std::uint64_t begin = b * kBlock;
      const std::uint64_t end = std::min(cfg.trials, begin + kBlock);
      std::uint64_t eo = 0, es = 0;
      for (std::uint64_t t = begin; t < end; ++t) {
        CounterStream rng(cfg.seed, kSerStream, t);
        const Trial tr = simulate_trial(constellation, model, cfg.fading, fixed, rng);
        const double h_mag = tr.channel.amplitude;
        if (cfg.run_optimal && optimal.detect(tr.derotated, h_mag) != tr.symbol) ++eo;
        if (cfg.run_suboptimal && detect_suboptimal(tr.derotated, constellation, h_mag) != tr.symbol) {
          ++es;
        }
      }
      opt_err[b] = eo;
      sub_err[b] = es;
    });

    std::uint64_t eo = 0, es = 0;
    for (std::uint64_t b = 0; b < blocks; ++b) {
      eo += opt_err[b];
      es += sub_err[b];
    }
    SerSimPoint p{snr_db, {}, {}};
    if (cfg.run_optimal) p.optimal = SerEstimate::from_counts(eo, cfg.trials);
    if (cfg.run_suboptimal) p.suboptimal = SerEstimate::from_counts(es, cfg.trials);
    out.push_back(p);
  }
  return out;
}

std::vector<SnrEstimate> run_snr_sim(const SimConfig& cfg) {
  cfg.validate();
  const std::uint64_t blocks = block_count(cfg.trials);

  std::vector<SnrEstimate> out;
  out.reserve(cfg.rx_snr_db.size());
  for (const double snr_db : cfg.rx_snr_db) {
    const auto model = ChannelModel::from_rx_snr(cfg.a, cfg.beta, cfg.gamma, db_to_linear(snr_db),
                                                 cfg.es_bar_w);
    std::vector<RunningMoments> partial(blocks);
    parallel_for(blocks, cfg.threads, [&](std::size_t b) {
      const std::uint64_t begin = b * kBlock;
      const std::uint64_t end = std::min(cfg.trials, begin + kBlock);
      RunningMoments m;
      for (std::uint64_t t = begin; t < end; ++t) {
        CounterStream rng(cfg.seed, kSnrStream, t);
        m.add(instantaneous_snr(model, sample_channel(model, rng).amplitude));
      }
      partial[b] = m;
    });
    RunningMoments total;
    for (const auto& m : partial) total.merge(m);
    out.push_back({snr_db, total.mean, total.std_error(), cfg.trials});
  }
  return out;
}

}  // namespace thz
