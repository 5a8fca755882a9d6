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

// thzsim: runs the THz link experiments described by a YAML config.
//
//   thzsim run <config.yaml> [--seed N] [--out-dir DIR] [--threads N]
//   thzsim validate <config.yaml>
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "thz/errors.hpp"
#include "thz/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"THz link model: reradiation, channel statistics and SER experiments"};
  app.set_version_flag("--version", std::string(thz::library_version()));
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<unsigned> threads;

  auto* run = app.add_subcommand("run", "Run an experiment and write CSV + manifest");
  run->add_option("config", config_path, "Experiment config (YAML)")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--out-dir", out_dir, "Override the output directory");
  run->add_option("--threads", threads, "Worker threads (0 = all cores)");

  auto* validate = app.add_subcommand("validate", "Check a config without running it");
  validate->add_option("config", config_path, "Experiment config (YAML)")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  thz::ExperimentConfig cfg;
  try {
    cfg = thz::load_experiment_config(config_path);
    if (seed) cfg.seed = *seed;
    if (out_dir) cfg.out_dir = *out_dir;
    if (threads) cfg.threads = *threads;
  } catch (const std::exception& e) {
    std::cerr << config_path << ": " << e.what() << '\n';
    return kExitConfig;
  }

  if (validate->parsed()) {
    std::cout << config_path << ": ok (" << thz::to_string(cfg.kind) << ")\n";
    return kExitOk;
  }

  try {
    const auto out = thz::run_experiment(cfg);
    std::cout << "wrote " << out.csv.string() << " (" << out.rows << " rows)\n"
              << "wrote " << out.manifest.string() << '\n';
  } catch (const thz::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const thz::InvalidParameter& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}
