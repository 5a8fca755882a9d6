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

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <cmath>

#include "thz/special.hpp"

using namespace thz;

namespace {

// Q1(a, b) is the upper tail at b^2 of a noncentral chi-square with two
// degrees of freedom and noncentrality a^2.
double marcum_reference(double a, double b) {
  boost::math::non_central_chi_squared dist(2.0, a * a);
  return boost::math::cdf(boost::math::complement(dist, b * b));
}

}  // namespace

TEST_CASE("Gaussian tail reference values") {
  CHECK(q_function(0.0) == 0.5);
  CHECK(q_function(1.0) == doctest::Approx(0.158655253931457051414767454368).epsilon(1e-14));
  CHECK(q_function(5.0) == doctest::Approx(2.86651571879193911673752332875e-7).epsilon(1e-13));
  CHECK(q_function(10.0) == doctest::Approx(7.61985302416052606597334325163e-24).epsilon(1e-13));
  CHECK(q_function(-2.0) == doctest::Approx(0.977249868051820792799717362833).epsilon(1e-14));
}

TEST_CASE("scaled Bessel I0") {
  CHECK(bessel_i0_scaled(0.0) == 1.0);
  CHECK(bessel_i0_scaled(2.5) == doctest::Approx(std::cyl_bessel_i(0.0, 2.5) * std::exp(-2.5)).epsilon(1e-14));
  CHECK(bessel_i0_scaled(700.5) == doctest::Approx(0.0150759104339228718871025702667).epsilon(1e-12));
  CHECK(bessel_i0_scaled(1000.0) == doctest::Approx(0.0126172404558912565857161312899).epsilon(1e-12));
  CHECK(bessel_i0_scaled(5000.0) == doctest::Approx(0.00564203689874458865698524834722).epsilon(1e-12));
  // No jump where the evaluation switches to the asymptotic series.
  CHECK(bessel_i0_scaled(700.0) == doctest::Approx(bessel_i0_scaled(700.0 + 1e-9)).epsilon(1e-11));
}

TEST_CASE("Marcum Q1 closed-form anchors") {
  for (double a : {0.0, 0.3, 1.0, 7.0, 40.0}) CHECK(marcum_q1(a, 0.0) == 1.0);
  for (double b : {0.0, 0.1, 1.0, 2.5, 6.0, 12.0}) {
    CHECK(std::abs(marcum_q1(0.0, b) - std::exp(-0.5 * b * b)) < 1e-12);
  }
}

TEST_CASE("Marcum Q1 against direct integration of its definition") {
  // References: 40-digit quadrature of x exp(-(x^2 + a^2)/2) I0(a x) over [b, inf).
  CHECK(marcum_q1(1.0, 1.0) == doctest::Approx(0.7328798037968202182509507647816049993664).epsilon(1e-12));
  CHECK(marcum_q1(2.0, 3.0) == doctest::Approx(0.2143620881626494569706293947232397544233).epsilon(1e-12));
}

TEST_CASE("Marcum Q1 against the noncentral chi-square tail") {
  for (double a : {0.05, 0.5, 1.0, 2.0, 4.5, 10.0, 14.1}) {
    for (double b : {0.05, 0.7, 1.5, 3.0, 6.0, 12.0, 16.0}) {
      const double ref = marcum_reference(a, b);
      CAPTURE(a);
      CAPTURE(b);
      CHECK(std::abs(marcum_q1(a, b) - ref) < 1e-12 + 1e-10 * ref);
    }
  }
}

TEST_CASE("Marcum Q1 is monotone") {
  for (double a : {0.0, 0.5, 3.0, 9.0}) {
    double prev = 1.0;
    for (double b = 0.0; b < 20.0; b += 0.25) {
      const double q = marcum_q1(a, b);
      CHECK(q <= prev);
      CHECK(q >= 0.0);
      prev = q;
    }
  }
  for (double b : {0.5, 2.0, 8.0}) {
    double prev = 0.0;
    for (double a = 0.0; a < 15.0; a += 0.25) {
      const double q = marcum_q1(a, b);
      CHECK(q >= prev);
      prev = q;
    }
  }
}
