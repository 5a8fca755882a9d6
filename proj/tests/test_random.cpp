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
#include <set>

#include "thz/parallel.hpp"
#include "thz/random.hpp"
#include "thz/stats.hpp"

using namespace thz;

TEST_CASE("philox4x32-10 known-answer vectors") {
  using C = std::array<std::uint32_t, 4>;
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are addressed, not stateful") {
  CounterStream a(42, 7, 1000), b(42, 7, 1000);
  for (int i = 0; i < 50; ++i) CHECK(a.next_u64() == b.next_u64());
  CounterStream c(42, 7, 1001), d(42, 8, 1000), e(43, 7, 1000);
  CounterStream ref(42, 7, 1000);
  const auto first = ref.next_u64();
  CHECK(c.next_u64() != first);
  CHECK(d.next_u64() != first);
  CHECK(e.next_u64() != first);
}

TEST_CASE("uniform lies in the open unit interval with the right moments") {
  CounterStream s(1, 0, 0);
  RunningMoments m;
  for (int i = 0; i < 200000; ++i) {
    const double u = s.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    m.add(u);
  }
  CHECK(std::abs(m.mean - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / m.count));
  CHECK(m.variance() == doctest::Approx(1.0 / 12.0).epsilon(0.01));
}

TEST_CASE("complex normal has the requested power and circular symmetry") {
  CounterStream s(9, 3, 0);
  RunningMoments re, im, cross;
  for (int i = 0; i < 200000; ++i) {
    const auto z = s.complex_normal(2.5);
    re.add(z.real());
    im.add(z.imag());
    cross.add(z.real() * z.imag());
  }
  CHECK(re.variance() == doctest::Approx(1.25).epsilon(0.015));
  CHECK(im.variance() == doctest::Approx(1.25).epsilon(0.015));
  CHECK(std::abs(re.mean) < 0.015);
  CHECK(std::abs(cross.mean) < 0.015);
}

TEST_CASE("merged moments equal the one-pass moments") {
  RunningMoments all, left, right;
  CounterStream s(5, 0, 0);
  for (int i = 0; i < 1000; ++i) {
    const double v = s.uniform() * 10.0;
    all.add(v);
    (i < 377 ? left : right).add(v);
  }
  left.merge(right);
  CHECK(left.count == all.count);
  CHECK(left.mean == doctest::Approx(all.mean).epsilon(1e-13));
  CHECK(left.variance() == doctest::Approx(all.variance()).epsilon(1e-12));
}

TEST_CASE("parallel_for visits every index once and propagates exceptions") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, 3,
                               [](std::size_t i) {
                                 if (i == 5) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
}
