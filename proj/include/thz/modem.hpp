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
#include <span>
#include <utility>
#include <vector>

namespace thz {

struct ChannelModel;

enum class Modulation { Pam, Qam };

/// Unit-free PAM/QAM point set scaled so the mean symbol energy equals
/// `es_bar`. PAM index i sits at (2i + 1 - M) delta on the real axis; QAM
/// index q * L + i sits at (level(i), level(q)) with L = sqrt(M) levels per
/// axis, level(m) = (2m + 1 - L) delta.
class Constellation {
 public:
  /// M even, M >= 2; delta = sqrt(3 Es / (M^2 - 1)).
  static Constellation pam(int order, double es_bar);
  /// M in {4, 16, 64, 256}; delta = sqrt(3 Es / (2 (M - 1))).
  static Constellation qam(int order, double es_bar);
  static Constellation make(Modulation kind, int order, double es_bar);

  Modulation kind() const noexcept { return kind_; }
  int order() const noexcept { return order_; }
  double delta() const noexcept { return delta_; }
  double es_bar() const noexcept { return es_bar_; }
  std::size_t size() const noexcept { return points_.size(); }
  /// Levels per axis: M for PAM, sqrt(M) for QAM.
  int side() const noexcept { return side_; }
  std::span<const std::complex<double>> points() const noexcept { return points_; }
  std::complex<double> point(std::size_t index) const { return points_.at(index); }
  double mean_energy() const;

 private:
  Constellation(Modulation kind, int order, int side, double delta, double es_bar,
                std::vector<std::complex<double>> points)
      : kind_(kind), order_(order), side_(side), delta_(delta), es_bar_(es_bar),
        points_(std::move(points)) {}

  Modulation kind_;
  int order_;
  int side_;
  double delta_;
  double es_bar_;
  std::vector<std::complex<double>> points_;
};

/// Per-symbol noise: thermal + |s|^2 * scale, scale = beta (1-gamma) (1-a).
struct NoiseProfile {
  double thermal_w;
  double scale;

  static NoiseProfile from(const ChannelModel& model);
  void validate() const;
};

/// Total complex noise variance seen by symbol `point`.
double symbol_noise_variance(std::complex<double> point, const NoiseProfile& profile);

/// Likelihood-equality boundary between two real Gaussians with means p0, p1
/// and per-component variances var0 / 2, var1 / 2: the root of
/// A x^2 + B x + C strictly between p0 and p1, with
///   A = var0 - var1, B = 2 (p0 var1 - p1 var0),
///   C = p1^2 var0 - p0^2 var1 - log(sqrt(var0 / var1)) var0 var1.
/// Equal variances return the exact midpoint. Throws ThresholdDegeneracy if
/// one likelihood dominates across the whole interval.
double qam_threshold(double p0, double p1, double var0, double var1);

/// Same boundary for adjacent PAM symbols at -|h| delta (variance var_lo) and
/// +|h| delta (variance var_hi), in coordinates centred on the pair midpoint.
double pam_threshold(double var_lo, double var_hi, double h_mag, double delta);

/// Decision boundaries between consecutive PAM levels in the derotated
/// frame, M - 1 of them, ascending.
struct ThresholdSet {
  Modulation kind;
  std::vector<double> boundaries;
};

ThresholdSet pam_thresholds(const Constellation& c, double h_mag, const NoiseProfile& profile);

/// Interval lookup against a PAM ThresholdSet; ties go to the lower index.
std::size_t detect_by_thresholds(double in_phase, const ThresholdSet& thresholds);

/// Maximum-likelihood detector for symbol-dependent noise variance.
///
/// PAM decides on the in-phase component with real Gaussian likelihoods
/// (variance sigma_m^2 / 2); QAM maximises the complex likelihood
/// -|y - |h| s_m|^2 / sigma_m^2 - ln sigma_m^2. Ties go to the lower index.
class MlDetector {
 public:
  MlDetector(const Constellation& constellation, const NoiseProfile& profile);
  std::size_t detect(std::complex<double> y, double h_mag) const;

 private:
  Modulation kind_;
  std::vector<std::complex<double>> points_;
  std::vector<double> inv_var_;
  std::vector<double> log_penalty_;
  bool equal_variance_;
};

std::size_t detect_optimal(std::complex<double> y, const Constellation& constellation,
                           double h_mag, const NoiseProfile& profile);

/// Minimum Euclidean distance to |h| s_m (in-phase only for PAM).
std::size_t detect_suboptimal(std::complex<double> y, const Constellation& constellation,
                              double h_mag);

}  // namespace thz
