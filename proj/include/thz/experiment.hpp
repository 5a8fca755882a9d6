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
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "thz/absorption.hpp"
#include "thz/modem.hpp"
#include "thz/quadrature.hpp"
#include "thz/reradiation.hpp"
#include "thz/ser.hpp"
#include "thz/simulator.hpp"

namespace thz {

/// Invalid experiment configuration, anchored to a 1-based line/column of the
/// config file (0 when no position applies).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0, int column = 0);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

enum class ExperimentKind { BetaVsDistance, LimitingSnrVsDistance, SerVsRxSnr };

std::string_view to_string(ExperimentKind kind);

/// Fully resolved experiment description. Every physical constraint has been
/// checked by the time a value of this type exists.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::BetaVsDistance;
  std::filesystem::path source;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::filesystem::path out_dir = ".";
  std::string name;

  double frequency_hz = 300e9;
  std::optional<AbsorptionProvider> absorption;
  std::string absorption_source;  // "constant" or the table path, for the manifest
  double k_per_m = 0.0;           // absorption.at(frequency_hz)

  LinkGeometry geometry{10.0, 0.05, 0.64, 0.51};
  QuadratureConfig quadrature;

  std::optional<double> fixed_beta;  // empty: computed from the geometry
  std::vector<double> gammas{0.0};

  Modulation modulation = Modulation::Qam;
  int order = 16;

  std::vector<double> distances_m;
  std::vector<double> rx_snr_db;

  std::uint64_t trials = 0;
  FadingMode fading = FadingMode::PerTrial;
  SerAveraging analytic = SerAveraging::Fading;
};

ExperimentConfig parse_experiment_config(std::string_view yaml_text,
                                         const std::filesystem::path& source = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Memoises compute_beta on (geometry, k, quadrature tolerances). Thread-safe.
class BetaCache {
 public:
  double get(const LinkGeometry& geom, double k_per_m, const QuadratureConfig& cfg);
  std::size_t size() const;

 private:
  using Key = std::tuple<double, double, double, double, double, double, double, int>;
  mutable std::mutex mutex_;
  std::map<Key, double> values_;
};

/// beta at distance d with the configured cone and Rayleigh distances; 0 when
/// the near-field zones cover the whole link (eps1 + eps2 >= d).
double beta_at_distance(const ExperimentConfig& cfg, double distance_m, BetaCache& cache);

struct ExperimentOutput {
  std::filesystem::path csv;
  std::filesystem::path manifest;
  std::size_t rows = 0;
};

/// Runs the experiment and writes `<name>.csv` and `<name>.manifest.json`
/// into cfg.out_dir. Output bytes depend only on the config, never on the
/// thread count.
ExperimentOutput run_experiment(const ExperimentConfig& cfg, BetaCache* cache = nullptr);

/// Library version recorded in manifests.
std::string_view library_version();

}  // namespace thz
