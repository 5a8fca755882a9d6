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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "thz/errors.hpp"
#include "thz/experiment.hpp"

using namespace thz;
namespace fs = std::filesystem;

namespace {

const std::string kBetaYaml = R"(experiment: beta_vs_distance
medium:
  absorption:
    constant_per_m: 0.0233
geometry:
  beam_half_angle_rad: 0.05
  eps1_m: 0.64
  eps2_m: 0.51
sweep:
  distance_m: {start: 0.5, stop: 100, points: 40, spacing: log}
)";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "thz_experiment_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int error_line(const std::string& yaml) {
  try {
    parse_experiment_config(yaml);
  } catch (const ConfigError& e) {
    MESSAGE(e.what());
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("parses a complete config") {
  const auto cfg = parse_experiment_config(kBetaYaml);
  CHECK(cfg.kind == ExperimentKind::BetaVsDistance);
  CHECK(cfg.k_per_m == 0.0233);
  CHECK(cfg.distances_m.size() == 40);
  CHECK(cfg.distances_m.front() == 0.5);
  CHECK(cfg.distances_m.back() == 100.0);
  CHECK(cfg.distances_m[1] / cfg.distances_m[0] == doctest::Approx(cfg.distances_m[39] / cfg.distances_m[38]));
  CHECK(cfg.name == "beta_vs_distance");
}

TEST_CASE("grid forms") {
  const auto base = std::string(R"(experiment: ser_vs_rxsnr
medium: {absorption: {constant_per_m: 0.0233}}
geometry: {distance_m: 10}
channel: {beta: 1, gamma: [0, 0.5]}
constellation: {kind: pam, order: 4}
simulation: {trials: 1.0e3}
)");
  CHECK(parse_experiment_config(base + "sweep: {rx_snr_db: {start: 0, stop: 30, step: 5}}").rx_snr_db ==
        std::vector<double>{0, 5, 10, 15, 20, 25, 30});
  CHECK(parse_experiment_config(base + "sweep: {rx_snr_db: [3, 7]}").rx_snr_db == std::vector<double>{3, 7});
  const auto lin = parse_experiment_config(base + "sweep: {rx_snr_db: {start: 0, stop: 1, points: 5}}");
  CHECK(lin.rx_snr_db == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  CHECK(lin.trials == 1000);
  CHECK(lin.modulation == Modulation::Pam);
  CHECK(lin.fixed_beta.value() == 1.0);
  CHECK_THROWS_AS(parse_experiment_config(base + "sweep: {rx_snr_db: [3, 3]}"), ConfigError);
}

TEST_CASE("diagnostics point at the offending line") {
  CHECK(error_line("experiment: beta_vs_distance\nmedium:\n  absorption:\n    constant_per_m: -1\n") == 4);
  CHECK(error_line("experiment: beta_vs_distance\nbogus: 1\n") == 2);
  CHECK(error_line("experiment: fig9\n") == 1);
  CHECK(error_line(kBetaYaml + "seed: x\n") == 11);
  CHECK(error_line("experiment: [unclosed\n") >= 1);
  std::string bad_theta = kBetaYaml;
  bad_theta.replace(bad_theta.find("0.05"), 4, "1.60");
  CHECK(error_line(bad_theta) == 6);
  CHECK_THROWS_AS(parse_experiment_config(""), ConfigError);
}

TEST_CASE("required keys depend on the experiment") {
  CHECK_THROWS_AS(parse_experiment_config("experiment: beta_vs_distance\nmedium: {absorption: {constant_per_m: 1}}\n"),
                  ConfigError);
  const std::string ser = R"(experiment: ser_vs_rxsnr
medium: {absorption: {constant_per_m: 0.0233}}
geometry: {distance_m: 10}
channel: {beta: computed, gamma: 0}
constellation: {kind: qam, order: 16}
sweep: {rx_snr_db: [0]}
simulation: {trials: 10}
)";
  // Computing beta needs the cone and Rayleigh distances.
  CHECK_THROWS_AS(parse_experiment_config(ser), ConfigError);
  std::string bad_order = ser;
  bad_order.replace(bad_order.find("beta: computed"), 14, "beta: 0.5");
  CHECK_NOTHROW(parse_experiment_config(bad_order));
  bad_order.replace(bad_order.find("order: 16"), 9, "order: 12");
  CHECK_THROWS_AS(parse_experiment_config(bad_order), ConfigError);
}

TEST_CASE("table absorption is resolved relative to the config file") {
  const auto cfg = load_experiment_config(THZ_TEST_DATA "/table_medium.yaml");
  CHECK(cfg.k_per_m == doctest::Approx(0.002));
  CHECK_THROWS_AS(load_experiment_config(THZ_TEST_DATA "/does_not_exist.yaml"), ConfigError);
}

TEST_CASE("beta_vs_distance output") {
  auto cfg = parse_experiment_config(kBetaYaml);
  cfg.out_dir = scratch("beta");
  const auto out = run_experiment(cfg);
  const auto rows = read_csv(out.csv);
  REQUIRE(rows.size() == 41);
  CHECK(rows[0] == std::vector<std::string>{"distance_m", "in_domain", "beta"});
  int changes = 0, last = 0;
  double prev = -1.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double d = std::stod(rows[i][0]);
    const double b = std::stod(rows[i][2]);
    CHECK(rows[i][1] == (d > 1.15 ? "1" : "0"));
    CHECK(b >= 0.0);
    CHECK(b <= 1.0);
    if (prev >= 0.0 && b != prev) {
      const int s = b > prev ? 1 : -1;
      if (last != 0 && s != last) ++changes;
      last = s;
    }
    prev = b;
  }
  CHECK(changes <= 1);
  const auto manifest = slurp(out.manifest);
  CHECK(manifest.find("\"seed\"") != std::string::npos);
  CHECK(manifest.find("\"version\"") != std::string::npos);
}

TEST_CASE("limiting SNR with beta = 1, gamma = 0 equals 10 log10(a / (1 - a))") {
  auto cfg = load_experiment_config(THZ_TEST_DATA "/table_medium.yaml");
  cfg.out_dir = scratch("limit");
  const auto rows = read_csv(run_experiment(cfg).csv);
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double d = std::stod(rows[i][0]);
    const double a = std::exp(-0.002 * d);
    CHECK(std::stod(rows[i][2]) == doctest::Approx(a).epsilon(1e-15));
    CHECK(std::stod(rows[i][4]) == doctest::Approx(10.0 * std::log10(a / (1.0 - a))).epsilon(1e-13));
  }
}

TEST_CASE("small ser_vs_rxsnr run and byte-identical reruns") {
  auto cfg = parse_experiment_config(R"(experiment: ser_vs_rxsnr
seed: 12
medium: {absorption: {constant_per_m: 0.0233}}
geometry: {distance_m: 10, beam_half_angle_rad: 0.68, eps1_m: 0.64, eps2_m: 0.51}
channel: {beta: computed, gamma: [0, 0.5]}
constellation: {kind: qam, order: 16}
sweep: {rx_snr_db: [0, 15, 30]}
simulation: {trials: 50000}
)");
  cfg.out_dir = scratch("ser1");
  cfg.threads = 1;
  BetaCache cache;
  const auto first = run_experiment(cfg, &cache);
  CHECK(cache.size() == 1);
  const auto rows = read_csv(first.csv);
  REQUIRE(rows.size() == 7);
  CHECK(std::stod(rows[1][2]) == doctest::Approx(0.23).epsilon(0.01));
  const auto csv1 = slurp(first.csv), man1 = slurp(first.manifest);

  cfg.out_dir = scratch("ser4");
  cfg.threads = 4;
  const auto second = run_experiment(cfg, &cache);
  CHECK(cache.size() == 1);
  CHECK(slurp(second.csv) == csv1);
  CHECK(slurp(second.manifest) == man1);
}
