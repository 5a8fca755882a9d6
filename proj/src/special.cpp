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

#include "thz/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "thz/errors.hpp"

namespace thz {

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double bessel_i0_scaled(double z) {
  if (!(z >= 0.0)) throw InvalidParameter("bessel_i0_scaled needs z >= 0");
  if (z <= 700.0) return std::cyl_bessel_i(0.0, z) * std::exp(-z);
  const double t = 1.0 / z;
  const double series = 1.0 + t * (1.0 / 8.0 + t * (9.0 / 128.0 + t * (225.0 / 3072.0)));
  return series / std::sqrt(2.0 * std::numbers::pi * z);
}

namespace {

// P(Y <= X - shift) for independent X ~ Poisson(outer), Y ~ Poisson(inner).
double poisson_race(double outer, double inner, long shift) {
  const double log_outer = std::log(outer);
  const double log_inner = std::log(inner);
  const auto n_max = static_cast<long>(std::ceil(outer + 15.0 * std::sqrt(outer) + 50.0));

  double log_px = -outer;
  double log_py = -inner;
  double cdf_y = 0.0;
  double sum = 0.0;
  for (long n = 0; n <= n_max; ++n) {
    if (n > 0) log_px += log_outer - std::log(static_cast<double>(n));
    const long m = n - shift;
    if (m >= 0) {
      if (m > 0) log_py += log_inner - std::log(static_cast<double>(m));
      cdf_y = std::min(1.0, cdf_y + std::exp(log_py));
    }
    sum += std::exp(log_px) * cdf_y;
  }
  return sum;
}

}  // namespace

double marcum_q1(double alpha, double b) {
  if (!(alpha >= 0.0) || !(b >= 0.0)) throw InvalidParameter("marcum_q1 needs alpha, b >= 0");
  if (b == 0.0) return 1.0;
  if (alpha == 0.0) return std::exp(-0.5 * b * b);

  // Q1 = P(M <= N) with N ~ Poisson(alpha^2 / 2), M ~ Poisson(b^2 / 2).
  // Sum whichever tail is the smaller one so neither side cancels.
  const double lambda = 0.5 * alpha * alpha;
  const double mu = 0.5 * b * b;
  if (b >= alpha) return std::clamp(poisson_race(lambda, mu, 0), 0.0, 1.0);
  return std::clamp(1.0 - poisson_race(mu, lambda, 1), 0.0, 1.0);
}

}  // namespace thz
