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
#include <vector>

#include "support/oracles.hpp"
#include "thz/errors.hpp"
#include "thz/ser.hpp"
#include "thz/simulator.hpp"

using namespace thz;

namespace {

const double kA = std::exp(-0.233);

double gap(double x, double p0, double p1, double v0, double v1) {
  return oracle::log_normal_pdf(x, p0, 0.5 * v0) - oracle::log_normal_pdf(x, p1, 0.5 * v1);
}

// Probability that coordinate `pos[own]` (variance v) leaves the interval
// between the bisection boundaries to its neighbours on that axis.
double escape_probability(const std::vector<double>& pos, const std::vector<double>& var, std::size_t own,
                        double v) {
  const double s = std::sqrt(0.5 * v);
  double lo = -INFINITY, hi = INFINITY;
  if (own > 0) {
    lo = oracle::bisect([&](double x) { return gap(x, pos[own - 1], pos[own], var[own - 1], var[own]); },
                        pos[own - 1], pos[own]);
  }
  if (own + 1 < pos.size()) {
    hi = oracle::bisect([&](double x) { return gap(x, pos[own], pos[own + 1], var[own], var[own + 1]); },
                        pos[own], pos[own + 1]);
  }
  return oracle::q_tail((pos[own] - lo) / s) + oracle::q_tail((hi - pos[own]) / s);
}

// Exact interval-decision SER of M-PAM from bisection thresholds.
double pam_oracle(const Constellation& c, double h, const NoiseProfile& prof) {
  std::vector<double> pos, var;
  for (const auto& p : c.points()) {
    pos.push_back(h * p.real());
    var.push_back(prof.thermal_w + std::norm(p) * prof.scale);
  }
  double ser = 0.0;
  for (std::size_t i = 0; i < pos.size(); ++i) ser += escape_probability(pos, var, i, var[i]);
  return ser / pos.size();
}

// Per-axis slab SER of square QAM, every point visited, no symmetry used.
// The neighbour variance along an axis is that of the neighbouring point.
double qam_oracle(const Constellation& c, double h, const NoiseProfile& prof) {
  const int side = c.side();
  double ser = 0.0;
  for (int q = 0; q < side; ++q) {
    for (int i = 0; i < side; ++i) {
      std::vector<double> xpos, xvar, ypos, yvar;
      for (int m = 0; m < side; ++m) {
        const auto row = c.point(static_cast<std::size_t>(q * side + m));
        xpos.push_back(h * row.real());
        xvar.push_back(prof.thermal_w + std::norm(row) * prof.scale);
        const auto col = c.point(static_cast<std::size_t>(m * side + i));
        ypos.push_back(h * col.imag());
        yvar.push_back(prof.thermal_w + std::norm(col) * prof.scale);
      }
      const double v = xvar[i];
      const double ex = escape_probability(xpos, xvar, i, v);
      const double ey = escape_probability(ypos, yvar, q, v);
      ser += ex + ey - ex * ey;
    }
  }
  return ser / c.size();
}

}  // namespace

TEST_CASE("binary PAM reduces to the antipodal result") {
  const auto c = Constellation::pam(2, 0.8);
  CHECK(c.delta() * c.delta() == doctest::Approx(0.8).epsilon(1e-15));
  for (double h : {0.3, 1.0}) {
    for (double s2 : {0.05, 0.5}) {
      const double expect = oracle::q_tail(std::sqrt(2.0 * 0.8) * h / std::sqrt(s2));
      CHECK(ser_pam(2, h, c.delta(), {s2, 0.0}) == doctest::Approx(expect).epsilon(1e-13));
    }
  }
}

TEST_CASE("equal variances reproduce the textbook expressions") {
  for (int m : {2, 4, 8, 16}) {
    const auto c = Constellation::pam(m, 1.0);
    for (double s2 : {0.3, 0.01, 1e-3}) {
      const double got = ser_pam(m, 0.9, c.delta(), {s2, 0.0});
      CHECK(oracle::rel_diff(got, oracle::pam_ser_textbook(m, 0.9 * c.delta(), s2)) < 1e-12);
    }
  }
  for (int m : {4, 16, 64, 256}) {
    const auto c = Constellation::qam(m, 1.0);
    for (double s2 : {0.3, 0.01, 1e-3}) {
      const double got = ser_qam_union(m, 0.9, c.delta(), {s2, 0.0}).ser;
      CHECK(oracle::rel_diff(got, oracle::qam_ser_textbook(m, 0.9 * c.delta(), s2)) < 1e-12);
    }
  }
  const auto qpsk = Constellation::qam(4, 1.0);
  const double q = oracle::q_tail(std::sqrt(2.0) * 0.7 * qpsk.delta() / std::sqrt(0.2));
  const auto pt = ser_qam_union(4, 0.7, qpsk.delta(), {0.2, 0.0});
  CHECK(oracle::rel_diff(pt.ser, 1.0 - (1.0 - q) * (1.0 - q)) < 1e-12);
  REQUIRE(pt.components.has_value());
  CHECK(pt.components->inner == 0.0);
  CHECK(pt.components->side == 0.0);
}

TEST_CASE("unequal-variance SER against the per-point oracle") {
  for (double scale : {0.01, 0.1, 0.2}) {
    for (double thermal : {1e-3, 1e-2, 0.1}) {
      const NoiseProfile prof{thermal, scale};
      for (int m : {4, 8}) {
        const auto c = Constellation::pam(m, 1.0);
        CHECK(oracle::rel_diff(ser_pam(m, 0.89, c.delta(), prof), pam_oracle(c, 0.89, prof)) < 1e-9);
      }
      for (int m : {4, 16, 64}) {
        const auto c = Constellation::qam(m, 1.0);
        const auto pt = ser_qam_union(m, 0.89, c.delta(), prof);
        CHECK(oracle::rel_diff(pt.ser, qam_oracle(c, 0.89, prof)) < 1e-9);
        const auto& parts = *pt.components;
        CHECK(pt.ser == doctest::Approx(4.0 / m * (parts.inner + parts.side + parts.corner)).epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("SER is a probability and falls with Rx SNR") {
  const auto pam = Constellation::pam(4, 1.0);
  const auto qam = Constellation::qam(16, 1.0);
  for (double scale : {0.0, 0.05, 0.2}) {
    double prev_pam = 1.0, prev_qam = 1.0;
    for (double db = -10.0; db <= 40.0; db += 1.0) {
      const NoiseProfile prof{std::pow(10.0, -db / 10.0), scale};
      const double sp = ser_pam(4, 0.89, pam.delta(), prof);
      const double sq = ser_qam_union(16, 0.89, qam.delta(), prof).ser;
      CHECK(sp >= 0.0);
      CHECK(sq <= 1.0);
      CHECK(sp <= prev_pam + 1e-15);
      CHECK(sq <= prev_qam + 1e-15);
      prev_pam = sp;
      prev_qam = sq;
    }
  }
  CHECK(ser_qam_union(256, 0.5, Constellation::qam(256, 1.0).delta(), {100.0, 0.0}).ser <= 1.0);
}

TEST_CASE("SER argument checks") {
  CHECK_THROWS_AS(ser_pam(3, 1.0, 1.0, {0.1, 0.0}), InvalidParameter);
  CHECK_THROWS_AS(ser_pam(4, 0.0, 1.0, {0.1, 0.0}), InvalidParameter);
  CHECK_THROWS_AS(ser_qam_union(8, 1.0, 1.0, {0.1, 0.0}), InvalidParameter);
  CHECK_THROWS_AS(ser_qam_union(16, 1.0, 1.0, {-0.1, 0.0}), InvalidParameter);
}

TEST_CASE("fading average") {
  const auto qam = Constellation::qam(16, 1.0);
  SUBCASE("deterministic channel reduces to the conditional SER") {
    const auto m = ChannelModel::from_rx_snr(kA, 1.0, 0.0, 100.0);
    const double cond = ser_conditional(qam, m.sigma_l(), NoiseProfile::from(m));
    CHECK(ser_fading_averaged(qam, m) == cond);
    CHECK(ser_analytic(qam, m, SerAveraging::RmsAmplitude) == cond);
  }
  SUBCASE("agrees with a Simpson average over the amplitude law") {
    const auto m = ChannelModel::from_rx_snr(kA, 1.0, 0.5, 100.0);
    const auto prof = NoiseProfile::from(m);
    const double k = m.rician_k, s = m.sigma_l();
    auto f = [&](double r) {
      if (r <= 0.0) return 0.0;
      double ser = 1.0;
      try {
        ser = ser_conditional(qam, r, prof);
      } catch (const ThresholdDegeneracy&) {
      }
      return ser * amplitude_pdf(r, k, s);
    };
    const double ref = oracle::simpson(f, 0.0, 4.0 * s, 20000);
    CHECK(ser_fading_averaged(qam, m) == doctest::Approx(ref).epsilon(1e-6));
  }
}

TEST_CASE("4-PAM SER matches the optimal-detector simulation") {
  SimConfig cfg;
  cfg.modulation = Modulation::Pam;
  cfg.order = 4;
  cfg.a = kA;
  cfg.beta = 1.0;
  cfg.gamma = 0.0;
  cfg.rx_snr_db = {15.0};
  cfg.trials = 10'000'000;
  cfg.seed = 15;
  cfg.run_suboptimal = false;
  const auto sim = run_ser_sim(cfg).front().optimal;
  const auto model = ChannelModel::from_rx_snr(kA, 1.0, 0.0, std::pow(10.0, 1.5));
  const double analytic = ser_analytic(Constellation::pam(4, 1.0), model, SerAveraging::Fading);
  MESSAGE("analytic " << analytic << ", simulated " << sim.ser_hat << " +- " << sim.std_error);
  CHECK(std::abs(analytic - sim.ser_hat) <= 3.0 * sim.std_error);
}

TEST_CASE("16-QAM union bound tracks the optimal-detector simulation") {
  SimConfig cfg;
  cfg.a = kA;
  cfg.beta = 1.0;
  cfg.gamma = 0.5;
  cfg.rx_snr_db = {20.0};
  cfg.trials = 2'000'000;
  cfg.seed = 20;
  cfg.fading = FadingMode::FixedAmplitude;
  cfg.run_suboptimal = false;
  const auto sim = run_ser_sim(cfg).front().optimal;
  const auto model = ChannelModel::from_rx_snr(kA, 1.0, 0.5, 100.0);
  const double bound = ser_analytic(Constellation::qam(16, 1.0), model, SerAveraging::RmsAmplitude);
  MESSAGE("bound " << bound << ", simulated " << sim.ser_hat << " +- " << sim.std_error);
  CHECK(bound >= sim.ser_hat - 3.0 * sim.std_error);
  CHECK(bound <= 1.1 * sim.ser_hat);
}

TEST_CASE("fading-averaged PAM SER matches per-trial fading simulation") {
  SimConfig cfg;
  cfg.modulation = Modulation::Pam;
  cfg.order = 4;
  cfg.a = kA;
  cfg.beta = 1.0;
  cfg.gamma = 0.5;
  cfg.rx_snr_db = {10.0, 20.0};
  cfg.trials = 2'000'000;
  cfg.seed = 31;
  cfg.run_suboptimal = false;
  for (const auto& p : run_ser_sim(cfg)) {
    const auto model = ChannelModel::from_rx_snr(kA, 1.0, 0.5, std::pow(10.0, p.rx_snr_db / 10.0));
    const double analytic = ser_analytic(Constellation::pam(4, 1.0), model, SerAveraging::Fading);
    CAPTURE(p.rx_snr_db);
    CHECK(std::abs(analytic - p.optimal.ser_hat) <= 3.0 * p.optimal.std_error);
  }
}

TEST_CASE("likelihood-argmax PAM SER") {
  SUBCASE("equal variances give the textbook value") {
    for (int m : {2, 4, 8}) {
      const auto c = Constellation::pam(m, 1.0);
      CHECK(oracle::rel_diff(ser_pam_ml(m, 0.8, c.delta(), {0.05, 0.0}),
                             oracle::pam_ser_textbook(m, 0.8 * c.delta(), 0.05)) < 1e-9);
    }
  }
  SUBCASE("agrees with the threshold form away from collapse") {
    for (double scale : {0.01, 0.1}) {
      for (int m : {4, 8}) {
        const auto c = Constellation::pam(m, 1.0);
        const NoiseProfile prof{0.01, scale};
        CHECK(oracle::rel_diff(ser_pam_ml(m, 0.9, c.delta(), prof), ser_pam(m, 0.9, c.delta(), prof)) < 1e-6);
      }
    }
  }
  SUBCASE("stays below one where a region collapses") {
    const auto c = Constellation::pam(4, 1.0);
    const NoiseProfile prof{1e-4, 0.5};
    CHECK_THROWS_AS(ser_pam(4, 0.05, c.delta(), prof), ThresholdDegeneracy);
    const double ser = ser_pam_ml(4, 0.05, c.delta(), prof);
    CHECK(ser > 0.0);
    CHECK(ser < 1.0 - 1.0 / 4.0 + 1e-12);
  }
}
