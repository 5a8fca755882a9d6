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

#include "thz/experiment.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <json.hpp>
#include <set>
#include <sstream>

#include "thz/channel.hpp"
#include "thz/errors.hpp"
#include "thz/parallel.hpp"

#ifndef THZ_VERSION
#define THZ_VERSION "unknown"
#endif

namespace thz {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail_at(const YAML::Node& node, const std::string& msg) {
  const auto mark = node.Mark();
  if (mark.is_null()) throw ConfigError(msg);
  throw ConfigError(msg, mark.line + 1, mark.column + 1);
}

void expect_map(const YAML::Node& node, const std::string& what) {
  if (!node.IsMap()) fail_at(node, what + " must be a mapping");
}

void expect_keys(const YAML::Node& map, std::initializer_list<std::string_view> allowed,
                 const std::string& what) {
  expect_map(map, what);
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail_at(kv.first, "unknown key '" + key + "' in " + what);
    }
  }
}

YAML::Node require(const YAML::Node& map, const std::string& key, const std::string& what) {
  const YAML::Node node = map[key];
  if (!node) fail_at(map, what + " is missing required key '" + key + "'");
  return node;
}

double as_double(const YAML::Node& node, const std::string& what) {
  if (!node.IsScalar()) fail_at(node, what + " must be a number");
  const auto text = node.Scalar();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    fail_at(node, what + " must be a number, got '" + text + "'");
  }
  if (!std::isfinite(v)) fail_at(node, what + " must be finite");
  return v;
}

std::uint64_t as_count(const YAML::Node& node, const std::string& what) {
  const double v = as_double(node, what);
  if (v < 0.0 || v != std::floor(v) || v > 1.8e19) {
    fail_at(node, what + " must be a non-negative integer");
  }
  return static_cast<std::uint64_t>(v);
}

std::string as_string(const YAML::Node& node, const std::string& what) {
  if (!node.IsScalar()) fail_at(node, what + " must be a string");
  return node.Scalar();
}

std::vector<double> as_list(const YAML::Node& node, const std::string& what) {
  std::vector<double> out;
  if (node.IsScalar()) {
    out.push_back(as_double(node, what));
    return out;
  }
  if (!node.IsSequence()) fail_at(node, what + " must be a number or a list of numbers");
  for (const auto& item : node) out.push_back(as_double(item, what));
  if (out.empty()) fail_at(node, what + " must not be empty");
  return out;
}

// A grid is either an explicit list or {start, stop, points, spacing} /
// {start, stop, step}. The result is strictly increasing.
std::vector<double> parse_grid(const YAML::Node& node, const std::string& what) {
  std::vector<double> grid;
  if (node.IsSequence()) {
    grid = as_list(node, what);
  } else {
    expect_keys(node, {"start", "stop", "points", "step", "spacing"}, what);
    const double start = as_double(require(node, "start", what), what + ".start");
    const double stop = as_double(require(node, "stop", what), what + ".stop");
    if (!(stop >= start)) fail_at(node, what + ": stop must be >= start");
    if (node["step"]) {
      if (node["points"] || node["spacing"]) fail_at(node, what + ": give either step or points");
      const double step = as_double(node["step"], what + ".step");
      if (!(step > 0.0)) fail_at(node["step"], what + ".step must be positive");
      const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
      for (std::size_t i = 0; i < n; ++i) grid.push_back(start + static_cast<double>(i) * step);
    } else {
      const auto n = as_count(require(node, "points", what), what + ".points");
      if (n < 1) fail_at(node["points"], what + ".points must be >= 1");
      const std::string spacing =
          node["spacing"] ? as_string(node["spacing"], what + ".spacing") : "linear";
      if (spacing != "linear" && spacing != "log") {
        fail_at(node["spacing"], what + ".spacing must be 'linear' or 'log'");
      }
      if (spacing == "log" && !(start > 0.0)) fail_at(node, what + ": log spacing needs start > 0");
      for (std::uint64_t i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        grid.push_back(spacing == "log"
                           ? std::exp(std::log(start) + t * (std::log(stop) - std::log(start)))
                           : start + t * (stop - start));
      }
      grid.front() = start;
      grid.back() = n == 1 ? start : stop;
    }
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) fail_at(node, what + " must be strictly increasing");
  }
  return grid;
}

ExperimentKind parse_kind(const YAML::Node& node) {
  const auto s = as_string(node, "experiment");
  if (s == "beta_vs_distance") return ExperimentKind::BetaVsDistance;
  if (s == "limiting_snr_vs_distance") return ExperimentKind::LimitingSnrVsDistance;
  if (s == "ser_vs_rxsnr") return ExperimentKind::SerVsRxSnr;
  fail_at(node, "experiment must be one of beta_vs_distance, limiting_snr_vs_distance, "
                "ser_vs_rxsnr; got '" + s + "'");
}

void parse_medium(const YAML::Node& root, const std::filesystem::path& base, ExperimentConfig& cfg) {
  const auto medium = require(root, "medium", "config");
  expect_keys(medium, {"frequency_hz", "absorption"}, "medium");
  if (medium["frequency_hz"]) cfg.frequency_hz = as_double(medium["frequency_hz"], "medium.frequency_hz");
  if (!(cfg.frequency_hz > 0.0)) fail_at(medium["frequency_hz"], "medium.frequency_hz must be positive");

  const auto abs = require(medium, "absorption", "medium");
  expect_keys(abs, {"constant_per_m", "table"}, "medium.absorption");
  if (abs["constant_per_m"] && abs["table"]) {
    fail_at(abs, "medium.absorption takes exactly one of constant_per_m or table");
  }
  try {
    if (abs["constant_per_m"]) {
      cfg.absorption = AbsorptionProvider::constant(
          as_double(abs["constant_per_m"], "medium.absorption.constant_per_m"));
      cfg.absorption_source = "constant";
    } else if (abs["table"]) {
      std::filesystem::path table = as_string(abs["table"], "medium.absorption.table");
      if (table.is_relative()) table = base / table;
      cfg.absorption = AbsorptionProvider::from_csv_file(table);
      cfg.absorption_source = as_string(abs["table"], "medium.absorption.table");
    } else {
      fail_at(abs, "medium.absorption needs constant_per_m or table");
    }
    cfg.k_per_m = cfg.absorption->at(cfg.frequency_hz);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail_at(abs, std::string("medium.absorption: ") + e.what());
  }
}

void parse_geometry(const YAML::Node& root, bool need_distance, bool need_cone,
                    ExperimentConfig& cfg) {
  const auto geo = root["geometry"];
  if (!geo) {
    if (need_distance || need_cone) fail_at(root, "config is missing required key 'geometry'");
    return;
  }
  expect_keys(geo, {"distance_m", "beam_half_angle_rad", "eps1_m", "eps2_m"}, "geometry");
  auto& g = cfg.geometry;
  if (need_distance) g.distance_m = as_double(require(geo, "distance_m", "geometry"), "geometry.distance_m");
  else if (geo["distance_m"]) g.distance_m = as_double(geo["distance_m"], "geometry.distance_m");
  if (need_cone) {
    g.half_angle_rad = as_double(require(geo, "beam_half_angle_rad", "geometry"),
                                 "geometry.beam_half_angle_rad");
    g.eps1_m = as_double(require(geo, "eps1_m", "geometry"), "geometry.eps1_m");
    g.eps2_m = as_double(require(geo, "eps2_m", "geometry"), "geometry.eps2_m");
  }
  if (!(g.distance_m > 0.0)) fail_at(geo, "geometry.distance_m must be positive");
  if (!(g.half_angle_rad > 0.0 && g.half_angle_rad < 0.5 * std::numbers::pi)) {
    fail_at(geo, "geometry.beam_half_angle_rad must lie in (0, pi/2)");
  }
  if (!(g.eps1_m >= 0.0 && g.eps2_m >= 0.0)) fail_at(geo, "Rayleigh distances must be >= 0");
}

void parse_quadrature(const YAML::Node& root, ExperimentConfig& cfg) {
  const auto q = root["quadrature"];
  if (!q) return;
  expect_keys(q, {"rel_tol", "abs_tol", "max_subdivisions"}, "quadrature");
  if (q["rel_tol"]) cfg.quadrature.rel_tol = as_double(q["rel_tol"], "quadrature.rel_tol");
  if (q["abs_tol"]) cfg.quadrature.abs_tol = as_double(q["abs_tol"], "quadrature.abs_tol");
  if (q["max_subdivisions"]) {
    cfg.quadrature.max_subdivisions =
        static_cast<int>(as_count(q["max_subdivisions"], "quadrature.max_subdivisions"));
  }
  try {
    cfg.quadrature.validate();
  } catch (const InvalidParameter& e) {
    fail_at(q, e.what());
  }
}

void parse_channel(const YAML::Node& root, bool need_beta, ExperimentConfig& cfg) {
  const auto ch = require(root, "channel", "config");
  expect_keys(ch, {"beta", "gamma"}, "channel");
  if (need_beta) {
    const auto b = require(ch, "beta", "channel");
    if (b.IsScalar() && b.Scalar() == "computed") {
      cfg.fixed_beta.reset();
    } else {
      const double beta = as_double(b, "channel.beta");
      if (!(beta >= 0.0 && beta <= 1.0)) fail_at(b, "channel.beta must lie in [0, 1]");
      cfg.fixed_beta = beta;
    }
  }
  const auto g = require(ch, "gamma", "channel");
  cfg.gammas = as_list(g, "channel.gamma");
  for (const double gamma : cfg.gammas) {
    if (!(gamma >= 0.0 && gamma < 1.0)) fail_at(g, "channel.gamma values must lie in [0, 1)");
  }
}

void parse_constellation(const YAML::Node& root, ExperimentConfig& cfg) {
  const auto c = require(root, "constellation", "config");
  expect_keys(c, {"kind", "order"}, "constellation");
  const auto kind = as_string(require(c, "kind", "constellation"), "constellation.kind");
  if (kind == "pam") cfg.modulation = Modulation::Pam;
  else if (kind == "qam") cfg.modulation = Modulation::Qam;
  else fail_at(c["kind"], "constellation.kind must be 'pam' or 'qam'");
  cfg.order = static_cast<int>(as_count(require(c, "order", "constellation"), "constellation.order"));
  try {
    (void)Constellation::make(cfg.modulation, cfg.order, 1.0);
  } catch (const InvalidParameter& e) {
    fail_at(c["order"], std::string("constellation.order: ") + e.what());
  }
}

void parse_simulation(const YAML::Node& root, ExperimentConfig& cfg) {
  const auto s = require(root, "simulation", "config");
  expect_keys(s, {"trials", "fading", "analytic"}, "simulation");
  cfg.trials = as_count(require(s, "trials", "simulation"), "simulation.trials");
  if (cfg.trials < 1) fail_at(s["trials"], "simulation.trials must be >= 1");
  if (s["fading"]) {
    const auto f = as_string(s["fading"], "simulation.fading");
    if (f == "per_trial") cfg.fading = FadingMode::PerTrial;
    else if (f == "fixed_amplitude") cfg.fading = FadingMode::FixedAmplitude;
    else fail_at(s["fading"], "simulation.fading must be 'per_trial' or 'fixed_amplitude'");
  }
  if (s["analytic"]) {
    const auto a = as_string(s["analytic"], "simulation.analytic");
    if (a == "fading") cfg.analytic = SerAveraging::Fading;
    else if (a == "rms_amplitude") cfg.analytic = SerAveraging::RmsAmplitude;
    else fail_at(s["analytic"], "simulation.analytic must be 'fading' or 'rms_amplitude'");
  }
}

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double to_db(double linear) { return 10.0 * std::log10(linear); }

Json manifest_base(const ExperimentConfig& cfg) {
  Json m;
  m["tool"] = "thzsim";
  m["version"] = std::string(library_version());
  m["experiment"] = std::string(to_string(cfg.kind));
  m["config"] = cfg.source.filename().string();
  m["seed"] = cfg.seed;
  m["medium"] = {{"frequency_hz", cfg.frequency_hz},
                 {"absorption_source", cfg.absorption_source},
                 {"k_per_m", cfg.k_per_m}};
  m["geometry"] = {{"distance_m", cfg.geometry.distance_m},
                   {"beam_half_angle_rad", cfg.geometry.half_angle_rad},
                   {"eps1_m", cfg.geometry.eps1_m},
                   {"eps2_m", cfg.geometry.eps2_m}};
  m["quadrature"] = {{"rel_tol", cfg.quadrature.rel_tol},
                     {"abs_tol", cfg.quadrature.abs_tol},
                     {"max_subdivisions", cfg.quadrature.max_subdivisions}};
  return m;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::size_t run_beta_vs_distance(const ExperimentConfig& cfg, BetaCache& cache,
                                 std::ostringstream& csv, Json& manifest) {
  std::vector<double> beta(cfg.distances_m.size());
  parallel_for(beta.size(), cfg.threads,
               [&](std::size_t i) { beta[i] = beta_at_distance(cfg, cfg.distances_m[i], cache); });
  csv << "distance_m,in_domain,beta\n";
  const double near_field = cfg.geometry.eps1_m + cfg.geometry.eps2_m;
  for (std::size_t i = 0; i < beta.size(); ++i) {
    const double d = cfg.distances_m[i];
    csv << number(d) << ',' << (d > near_field ? 1 : 0) << ',' << number(beta[i]) << '\n';
  }
  manifest["sweep"] = {{"distance_m", cfg.distances_m}};
  return beta.size();
}

std::size_t run_limiting_snr(const ExperimentConfig& cfg, BetaCache& cache, std::ostringstream& csv,
                             Json& manifest) {
  std::vector<double> beta(cfg.distances_m.size());
  parallel_for(beta.size(), cfg.threads,
               [&](std::size_t i) { beta[i] = beta_at_distance(cfg, cfg.distances_m[i], cache); });
  csv << "distance_m,gamma,transmittance,beta_computed,snr_limit_db_beta1,"
         "snr_limit_db_beta_computed\n";
  std::size_t rows = 0;
  for (const double gamma : cfg.gammas) {
    for (std::size_t i = 0; i < beta.size(); ++i) {
      const double d = cfg.distances_m[i];
      const double a = transmittance(cfg.k_per_m, d);
      csv << number(d) << ',' << number(gamma) << ',' << number(a) << ',' << number(beta[i]) << ','
          << number(to_db(limiting_avg_snr(a, 1.0, gamma))) << ','
          << number(to_db(limiting_avg_snr(a, beta[i], gamma))) << '\n';
      ++rows;
    }
  }
  manifest["channel"] = {{"gamma", cfg.gammas}};
  manifest["sweep"] = {{"distance_m", cfg.distances_m}};
  return rows;
}

std::size_t run_ser_vs_rxsnr(const ExperimentConfig& cfg, BetaCache& cache, std::ostringstream& csv,
                             Json& manifest) {
  const double d = cfg.geometry.distance_m;
  const double a = transmittance(cfg.k_per_m, d);
  const double beta = cfg.fixed_beta ? *cfg.fixed_beta : beta_at_distance(cfg, d, cache);
  const auto constellation = Constellation::make(cfg.modulation, cfg.order, 1.0);

  csv << "gamma,rx_snr_db,beta,ser_analytic,ser_opt,ser_opt_stderr,errors_opt,unreliable_opt,"
         "ser_subopt,ser_subopt_stderr,errors_subopt,unreliable_subopt,trials\n";
  std::size_t rows = 0;
  for (const double gamma : cfg.gammas) {
    SimConfig sim;
    sim.modulation = cfg.modulation;
    sim.order = cfg.order;
    sim.a = a;
    sim.beta = beta;
    sim.gamma = gamma;
    sim.rx_snr_db = cfg.rx_snr_db;
    sim.trials = cfg.trials;
    sim.seed = cfg.seed;
    sim.fading = cfg.fading;
    sim.threads = cfg.threads;
    const auto sims = run_ser_sim(sim);

    for (const auto& p : sims) {
      const auto model = ChannelModel::from_rx_snr(a, beta, gamma, std::pow(10.0, p.rx_snr_db / 10.0));
      double analytic = 0.0;
      try {
        analytic = ser_analytic(constellation, model, cfg.analytic, cfg.quadrature);
      } catch (const NumericalError& e) {
        throw NumericalError("analytic SER at gamma = " + number(gamma) +
                             ", rx_snr_db = " + number(p.rx_snr_db) + ": " + e.what());
      }
      csv << number(gamma) << ',' << number(p.rx_snr_db) << ',' << number(beta) << ','
          << number(analytic) << ',' << number(p.optimal.ser_hat) << ','
          << number(p.optimal.std_error) << ',' << p.optimal.errors << ','
          << (p.optimal.unreliable ? 1 : 0) << ',' << number(p.suboptimal.ser_hat) << ','
          << number(p.suboptimal.std_error) << ',' << p.suboptimal.errors << ','
          << (p.suboptimal.unreliable ? 1 : 0) << ',' << cfg.trials << '\n';
      ++rows;
    }
  }
  manifest["channel"] = {{"transmittance", a},
                         {"beta_mode", cfg.fixed_beta ? "fixed" : "computed"},
                         {"beta", beta},
                         {"gamma", cfg.gammas},
                         {"es_bar_w", 1.0}};
  manifest["constellation"] = {{"kind", cfg.modulation == Modulation::Pam ? "pam" : "qam"},
                               {"order", cfg.order}};
  manifest["simulation"] = {
      {"trials", cfg.trials},
      {"fading", cfg.fading == FadingMode::PerTrial ? "per_trial" : "fixed_amplitude"},
      {"fixed_amplitude", "sigma_l"},
      {"analytic", cfg.analytic == SerAveraging::Fading ? "fading" : "rms_amplitude"},
      {"detectors", {"optimal", "suboptimal"}},
      {"min_reliable_errors", SerEstimate::kMinReliableErrors}};
  manifest["sweep"] = {{"rx_snr_db", cfg.rx_snr_db}};
  return rows;
}

}  // namespace

ConfigError::ConfigError(const std::string& what, int line, int column)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ", column " +
                                        std::to_string(column) + ": " + what
                                  : what),
      line_(line),
      column_(column) {}

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::BetaVsDistance: return "beta_vs_distance";
    case ExperimentKind::LimitingSnrVsDistance: return "limiting_snr_vs_distance";
    case ExperimentKind::SerVsRxSnr: return "ser_vs_rxsnr";
  }
  return "unknown";
}

std::string_view library_version() { return THZ_VERSION; }

ExperimentConfig parse_experiment_config(std::string_view yaml_text,
                                         const std::filesystem::path& source) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, e.mark.line + 1, e.mark.column + 1);
  }
  if (!root || root.IsNull()) throw ConfigError("config is empty");

  ExperimentConfig cfg;
  cfg.source = source;
  try {
    expect_keys(root,
                {"experiment", "seed", "threads", "output", "medium", "geometry", "quadrature",
                 "channel", "constellation", "sweep", "simulation"},
                "config");
    cfg.kind = parse_kind(require(root, "experiment", "config"));
    cfg.name = std::string(to_string(cfg.kind));
    if (root["seed"]) cfg.seed = as_count(root["seed"], "seed");
    if (root["threads"]) cfg.threads = static_cast<unsigned>(as_count(root["threads"], "threads"));
    if (const auto out = root["output"]) {
      expect_keys(out, {"dir", "name"}, "output");
      if (out["dir"]) cfg.out_dir = as_string(out["dir"], "output.dir");
      if (out["name"]) cfg.name = as_string(out["name"], "output.name");
      if (cfg.name.empty() || cfg.name.find('/') != std::string::npos) {
        fail_at(out, "output.name must be a plain file stem");
      }
    }

    const auto base = source.empty() ? std::filesystem::path(".") : source.parent_path();
    parse_medium(root, base, cfg);
    parse_quadrature(root, cfg);

    const YAML::Node sweep = root["sweep"];
    if (sweep) expect_keys(sweep, {"distance_m", "rx_snr_db"}, "sweep");
    switch (cfg.kind) {
      case ExperimentKind::BetaVsDistance:
      case ExperimentKind::LimitingSnrVsDistance: {
        parse_geometry(root, false, true, cfg);
        if (!sweep) fail_at(root, "config is missing required key 'sweep'");
        const auto dist = require(sweep, "distance_m", "sweep");
        cfg.distances_m = parse_grid(dist, "sweep.distance_m");
        if (!(cfg.distances_m.front() > 0.0)) fail_at(dist, "sweep.distance_m must be positive");
        if (cfg.kind == ExperimentKind::LimitingSnrVsDistance) parse_channel(root, false, cfg);
        break;
      }
      case ExperimentKind::SerVsRxSnr: {
        parse_channel(root, true, cfg);
        parse_geometry(root, true, !cfg.fixed_beta.has_value(), cfg);
        if (!cfg.fixed_beta) {
          try {
            cfg.geometry.validate();
          } catch (const InvalidParameter& e) {
            fail_at(root["geometry"], std::string("geometry: ") + e.what());
          }
        }
        parse_constellation(root, cfg);
        if (!sweep) fail_at(root, "config is missing required key 'sweep'");
        cfg.rx_snr_db = parse_grid(require(sweep, "rx_snr_db", "sweep"), "sweep.rx_snr_db");
        parse_simulation(root, cfg);
        break;
      }
    }
  } catch (const YAML::Exception& e) {
    throw ConfigError(e.msg, e.mark.line + 1, e.mark.column + 1);
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream text;
  text << in.rdbuf();
  return parse_experiment_config(text.str(), path);
}

double BetaCache::get(const LinkGeometry& geom, double k_per_m, const QuadratureConfig& cfg) {
  const Key key{geom.distance_m, geom.half_angle_rad, geom.eps1_m,  geom.eps2_m,
                k_per_m,         cfg.rel_tol,         cfg.abs_tol, cfg.max_subdivisions};
  {
    std::lock_guard lock(mutex_);
    if (const auto it = values_.find(key); it != values_.end()) return it->second;
  }
  const double beta = k_per_m == 0.0 ? beta_lossless_limit(geom, cfg) : compute_beta(geom, k_per_m, cfg);
  std::lock_guard lock(mutex_);
  values_.emplace(key, beta);
  return beta;
}

std::size_t BetaCache::size() const {
  std::lock_guard lock(mutex_);
  return values_.size();
}

double beta_at_distance(const ExperimentConfig& cfg, double distance_m, BetaCache& cache) {
  LinkGeometry g = cfg.geometry;
  g.distance_m = distance_m;
  if (g.eps1_m + g.eps2_m >= distance_m) return 0.0;
  return cache.get(g, cfg.k_per_m, cfg.quadrature);
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg, BetaCache* cache) {
  BetaCache local;
  BetaCache& betas = cache ? *cache : local;

  std::ostringstream csv;
  Json manifest = manifest_base(cfg);
  std::size_t rows = 0;
  switch (cfg.kind) {
    case ExperimentKind::BetaVsDistance:
      rows = run_beta_vs_distance(cfg, betas, csv, manifest);
      manifest["near_field_policy"] = "beta = 0 where eps1 + eps2 >= distance";
      break;
    case ExperimentKind::LimitingSnrVsDistance:
      rows = run_limiting_snr(cfg, betas, csv, manifest);
      manifest["near_field_policy"] = "beta = 0 where eps1 + eps2 >= distance";
      break;
    case ExperimentKind::SerVsRxSnr:
      rows = run_ser_vs_rxsnr(cfg, betas, csv, manifest);
      break;
  }

  std::filesystem::create_directories(cfg.out_dir);
  ExperimentOutput out;
  out.csv = cfg.out_dir / (cfg.name + ".csv");
  out.manifest = cfg.out_dir / (cfg.name + ".manifest.json");
  out.rows = rows;
  manifest["outputs"] = {{"csv", out.csv.filename().string()}, {"rows", rows}};
  write_file(out.csv, csv.str());
  write_file(out.manifest, manifest.dump(2) + "\n");
  return out;
}

}  // namespace thz
