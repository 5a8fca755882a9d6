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

#include "thz/absorption.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>

#include "thz/errors.hpp"

namespace thz {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view field, std::size_t line) {
  field = trim(field);
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc{} || ptr != end || field.empty()) {
    throw ParseError("not a number: '" + std::string(field) + "'", line);
  }
  if (!std::isfinite(value)) throw ParseError("non-finite value", line);
  return value;
}

void check_rows(const std::vector<std::pair<double, double>>& rows) {
  if (rows.size() < 2) throw InvalidParameter("absorption table needs at least two rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto [f, k] = rows[i];
    if (!std::isfinite(f) || !std::isfinite(k)) {
      throw InvalidParameter("absorption table contains a non-finite value");
    }
    if (k < 0.0) throw InvalidParameter("absorption coefficient must be non-negative");
    if (i > 0 && !(f > rows[i - 1].first)) {
      throw InvalidParameter("absorption table frequencies must be strictly increasing");
    }
  }
}

}  // namespace

AbsorptionProvider AbsorptionProvider::constant(double k_per_m) {
  if (!std::isfinite(k_per_m) || k_per_m < 0.0) {
    throw InvalidParameter("absorption coefficient must be finite and non-negative");
  }
  return AbsorptionProvider(ConstantAbsorption{k_per_m});
}

AbsorptionProvider AbsorptionProvider::table(std::vector<std::pair<double, double>> rows) {
  check_rows(rows);
  TabulatedAbsorption t;
  t.frequency_hz.reserve(rows.size());
  t.k_per_m.reserve(rows.size());
  for (const auto& [f, k] : rows) {
    t.frequency_hz.push_back(f);
    t.k_per_m.push_back(k);
  }
  return AbsorptionProvider(std::move(t));
}

AbsorptionProvider AbsorptionProvider::from_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<std::pair<double, double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    if (!have_header) {
      if (text != "frequency_hz,k_per_m") {
        throw ParseError("expected header 'frequency_hz,k_per_m'", line_no);
      }
      have_header = true;
      continue;
    }
    const auto comma = text.find(',');
    if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
      throw ParseError("expected exactly two fields", line_no);
    }
    const double f = parse_number(text.substr(0, comma), line_no);
    const double k = parse_number(text.substr(comma + 1), line_no);
    if (k < 0.0) throw ParseError("negative absorption coefficient", line_no);
    if (!rows.empty()) {
      if (f == rows.back().first) throw ParseError("duplicate frequency", line_no);
      if (f < rows.back().first) throw ParseError("rows not sorted by frequency", line_no);
    }
    rows.emplace_back(f, k);
  }
  if (!have_header) throw ParseError("empty absorption table", line_no);
  if (rows.size() < 2) throw ParseError("absorption table needs at least two rows", line_no);
  return table(std::move(rows));
}

AbsorptionProvider AbsorptionProvider::from_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot open absorption table: " + path.string());
  return from_csv(in);
}

double AbsorptionProvider::at(double frequency_hz) const {
  if (const auto* c = std::get_if<ConstantAbsorption>(&source_)) return c->k_per_m;

  const auto& t = std::get<TabulatedAbsorption>(source_);
  const auto& fs = t.frequency_hz;
  if (!(frequency_hz >= fs.front() && frequency_hz <= fs.back())) {
    throw OutOfDomain("frequency " + std::to_string(frequency_hz) +
                      " Hz outside absorption table range");
  }
  auto hi = std::upper_bound(fs.begin(), fs.end(), frequency_hz);
  if (hi == fs.end()) return t.k_per_m.back();
  const auto i = static_cast<std::size_t>(hi - fs.begin());
  const double f0 = fs[i - 1], f1 = fs[i];
  if (frequency_hz == f0) return t.k_per_m[i - 1];
  const double w = (frequency_hz - f0) / (f1 - f0);
  return t.k_per_m[i - 1] + w * (t.k_per_m[i] - t.k_per_m[i - 1]);
}

double transmittance(double k_per_m, double distance_m) {
  if (!(k_per_m >= 0.0) || !std::isfinite(k_per_m)) {
    throw InvalidParameter("absorption coefficient must be finite and non-negative");
  }
  if (!(distance_m > 0.0) || !std::isfinite(distance_m)) {
    throw InvalidParameter("distance must be positive");
  }
  return std::exp(-k_per_m * distance_m);
}

MediumSpec MediumSpec::make(double k_per_m, double distance_m) {
  return MediumSpec{k_per_m, distance_m, thz::transmittance(k_per_m, distance_m)};
}

MediumSpec MediumSpec::make(const AbsorptionProvider& provider, double frequency_hz,
                            double distance_m) {
  return make(provider.at(frequency_hz), distance_m);
}

}  // namespace thz
