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

#include <array>
#include <cmath>
#include <cstddef>
#include <algorithm>
#include <tuple>
#include <utility>
#include <vector>

namespace thz {

struct QuadratureConfig {
  double rel_tol = 1e-6;
  double abs_tol = 1e-14;
  int max_subdivisions = 2000;

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
  bool converged = false;
};

namespace detail {

inline constexpr std::size_t kGaussOrder = 10;

struct GaussRule {
  std::array<double, kGaussOrder> nodes;    // on [-1, 1]
  std::array<double, kGaussOrder> weights;
};

const GaussRule& gauss_legendre_rule();

template <class F>
double gauss_panel(F& f, double a, double b) {
  const auto& rule = gauss_legendre_rule();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < kGaussOrder; ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return half * sum;
}

struct Panel {
  double a, b;
  double left, right;  // Gauss values on each half
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

}  // namespace detail

/// Globally adaptive Gauss-Legendre integration of f over [a, b].
///
/// Each panel is compared against the sum over its two halves; the panel with
/// the largest discrepancy is bisected until the summed discrepancy drops below
/// max(abs_tol, rel_tol * |I|) or max_subdivisions is spent. Never throws on
/// non-convergence; inspect `converged`.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, const QuadratureConfig& cfg) {
  QuadratureResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  auto make_panel = [&f](double lo, double hi, double whole) {
    const double mid = 0.5 * (lo + hi);
    const double l = detail::gauss_panel(f, lo, mid);
    const double r = detail::gauss_panel(f, mid, hi);
    return detail::Panel{lo, hi, l, r, std::abs(l + r - whole)};
  };

  std::vector<detail::Panel> heap;
  heap.push_back(make_panel(a, b, detail::gauss_panel(f, a, b)));

  auto totals = [&heap]() {
    double value = 0.0, error = 0.0;
    for (const auto& p : heap) {
      value += p.left + p.right;
      error += p.error;
    }
    return std::pair{value, error};
  };

  auto [value, error] = totals();
  while (error > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value))) {
    if (out.subdivisions >= cfg.max_subdivisions) break;
    std::pop_heap(heap.begin(), heap.end());
    const detail::Panel worst = heap.back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      std::push_heap(heap.begin(), heap.end());
      break;
    }
    heap.back() = make_panel(worst.a, mid, worst.left);
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(make_panel(mid, worst.b, worst.right));
    std::push_heap(heap.begin(), heap.end());
    ++out.subdivisions;
    std::tie(value, error) = totals();
  }
  out.value = value;
  out.error = error;
  out.converged = error <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value));
  return out;
}

}  // namespace thz
