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

namespace thz {

/// Gaussian tail probability Q(x) = P(N(0,1) > x).
double q_function(double x);

/// Exponentially scaled modified Bessel function I0(z) e^{-z}, z >= 0.
double bessel_i0_scaled(double z);

/// First-order Marcum Q-function Q1(alpha, b), alpha >= 0, b >= 0.
///
/// Evaluated as P(M <= N) with N ~ Poisson(alpha^2/2), M ~ Poisson(b^2/2),
/// the Poisson-mixture form of the noncentral chi-square tail. Absolute
/// truncation error is far below 1e-12.
double marcum_q1(double alpha, double b);

}  // namespace thz
