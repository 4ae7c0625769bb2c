// SPDX-License-Identifier: Apache-2.0
//
// mtsim - blind configuration and sensing simulator for programmable metasurfaces
// Copyright (C) 2026 mtsim contributors
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
// ------------------------------------------------------------------------

#ifndef MTSIM_BASELINES_HPP
#define MTSIM_BASELINES_HPP

#include <cstdint>

#include "mtsim/channel.hpp"
#include "mtsim/sampling.hpp"

namespace mtsim
{

/// Zero Phase Shifts: every index 0, independent of K.
PhaseConfig zps(const SceneGeometry &scene);

/// Beam scanning: draw T uniform-random configurations, measure one RSS each
/// with the same schedule and measurement streams as dataset collection, and
/// return the configuration with the largest S (earliest on ties).
PhaseConfig beam_scanning(const ChannelEnsemble &ensemble, const SceneGeometry &scene,
                          std::size_t count, double meas_noise_sigma,
                          std::uint64_t seed, int n_threads = 1);

/// CSI-informed reference: per atom pick k maximizing
/// cos(k*omega + angle(E[h_reflected]) - angle(E[h_direct])), i.e. rotate each
/// mean reflected channel as close as possible to the mean direct channel.
/// Smallest-index tie rule. Throws std::domain_error on zero direct mean.
PhaseConfig genie_closest_rotation(const ChannelEnsemble &ensemble);

} // namespace mtsim

#endif
