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

#include <optional>

#include "thz/channel.hpp"
#include "thz/modem.hpp"
#include "thz/quadrature.hpp"

namespace thz {

struct QamSerComponents {
  double inner;   // points with four neighbours
  double side;    // points with three neighbours, both edges of the quadrant
  double corner;  // the outermost point
};

struct SerPoint {
  double rx_snr;
  double h_mag;
  double ser;
  std::optional<QamSerComponents> components;
};

/// Exact SER of M-PAM under the unequal-variance ML thresholds, conditioned
/// on the channel amplitude. Capped to [0, 1].
double ser_pam(int order, double h_mag, double delta, const NoiseProfile& profile);

/// Exact SER of M-PAM under the full 1-D likelihood argmax, built from every
/// pairwise likelihood crossing. Unlike ser_pam it stays defined when a
/// decision region collapses.
double ser_pam_ml(int order, double h_mag, double delta, const NoiseProfile& profile);

/// Nearest-neighbour bound (4/M)(Pm + Ps + Pc) for square M-QAM with per-axis
/// ML thresholds, conditioned on the channel amplitude. Capped to [0, 1].
SerPoint ser_qam_union(int order, double h_mag, double delta, const NoiseProfile& profile);

/// ser_pam or ser_qam_union, whichever fits the constellation.
double ser_conditional(const Constellation& c, double h_mag, const NoiseProfile& profile);

enum class SerAveraging {
  RmsAmplitude,  // evaluate at |h| = sigma_l
  Fading,        // integrate over the Rician amplitude law
};

/// SER averaged over the amplitude distribution of `model`. Amplitudes at
/// which a decision region collapses (ThresholdDegeneracy) contribute
/// ser_pam_ml for PAM and the trivial bound SER = 1 for QAM. Deterministic channels (K = inf) reduce to
/// ser_conditional at sigma_l.
double ser_fading_averaged(const Constellation& c, const ChannelModel& model,
                           const QuadratureConfig& cfg = {});

double ser_analytic(const Constellation& c, const ChannelModel& model, SerAveraging mode,
                    const QuadratureConfig& cfg = {});

}  // namespace thz
