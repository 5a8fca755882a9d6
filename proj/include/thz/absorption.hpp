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

#include <filesystem>
#include <iosfwd>
#include <utility>
#include <variant>
#include <vector>

namespace thz {

// Units throughout: frequency in Hz, distance in m, absorption in 1/m
// (natural-log convention, power transmittance exp(-k d)).

struct ConstantAbsorption {
  double k_per_m;
};

/// Piecewise-linear absorption spectrum. Rows strictly increasing in
/// frequency, at least two of them.
struct TabulatedAbsorption {
  std::vector<double> frequency_hz;
  std::vector<double> k_per_m;
};

/// Source of the molecular absorption coefficient k(f). Immutable once built.
class AbsorptionProvider {
 public:
  static AbsorptionProvider constant(double k_per_m);
  static AbsorptionProvider table(std::vector<std::pair<double, double>> rows);

  /// Parses the `frequency_hz,k_per_m` CSV format. Rejects NaN/inf,
  /// negative k, duplicate or unsorted frequencies.
  static AbsorptionProvider from_csv(std::istream& in);
  static AbsorptionProvider from_csv_file(const std::filesystem::path& path);

  /// Throws OutOfDomain for a table lookup outside [f_min, f_max].
  double at(double frequency_hz) const;

  bool is_constant() const noexcept { return std::holds_alternative<ConstantAbsorption>(source_); }
  const std::variant<ConstantAbsorption, TabulatedAbsorption>& source() const noexcept {
    return source_;
  }

 private:
  explicit AbsorptionProvider(std::variant<ConstantAbsorption, TabulatedAbsorption> s)
      : source_(std::move(s)) {}

  std::variant<ConstantAbsorption, TabulatedAbsorption> source_;
};

inline double absorption_at(const AbsorptionProvider& provider, double frequency_hz) {
  return provider.at(frequency_hz);
}

/// Power transmittance exp(-k d) of a homogeneous path.
double transmittance(double k_per_m, double distance_m);

struct MediumSpec {
  double k_per_m;
  double distance_m;
  double transmittance;

  static MediumSpec make(double k_per_m, double distance_m);
  static MediumSpec make(const AbsorptionProvider& provider, double frequency_hz,
                         double distance_m);
};

}  // namespace thz
