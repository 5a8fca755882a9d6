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

#include "thz/quadrature.hpp"

#include <numbers>

#include "thz/errors.hpp"

namespace thz {

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0)) throw InvalidParameter("quadrature rel_tol must be positive");
  if (!(abs_tol > 0.0)) throw InvalidParameter("quadrature abs_tol must be positive");
  if (max_subdivisions < 1) throw InvalidParameter("quadrature max_subdivisions must be >= 1");
}

namespace detail {

namespace {

// Nodes by Newton iteration on P_n from the Chebyshev-like initial guess.
GaussRule build_rule() {
  constexpr std::size_t n = kGaussOrder;
  GaussRule rule{};
  for (std::size_t i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre_rule() {
  static const GaussRule rule = build_rule();
  return rule;
}

}  // namespace detail
}  // namespace thz
