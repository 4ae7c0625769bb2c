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

#ifndef MTSIM_SENSING_HPP
#define MTSIM_SENSING_HPP

#include <optional>
#include <string>
#include <vector>

#include "mtsim/bcm.hpp"
#include "mtsim/geometry.hpp"

namespace mtsim
{

/// Per-panel angle estimates, triangulated 2-D position, and diagnostics.
struct SensingEstimate
{
    std::vector<double> phi_hat; // elevation per panel, radians
    std::vector<double> psi_hat; // azimuth per panel, radians
    double position_x = 0.0;     // meters
    double position_y = 0.0;
    std::optional<double> squared_error; // vs scene tx ground truth, m^2
    int clamp_count = 0; // arcsin arguments clamped into [-1, 1]
    int wrap_count = 0;  // adjacent-pair differences wrapped into (-pi, pi]
};

/// Elevation scratch output: estimate plus diagnostics increments.
struct AngleEstimate
{
    double value = 0.0;
    int clamp_count = 0;
    int wrap_count = 0;
};

/// Mean over all vertical adjacent pairs of arcsin(sin(phi_lr) -
/// wrap(delta_diff)/(xi*d_M)), arguments clamped to [-1,1] with diagnostics.
/// delta is the panel's row-major table. Requires n_row >= 2.
AngleEstimate estimate_elevation(const std::vector<double> &delta,
                                 const MtsPanel &panel, double known_phi_lr,
                                 double xi);

/// Mean over all horizontal adjacent pairs of arcsin of the azimuth argument
/// wrap(delta_diff)/(xi*d_M*cos(phi_hat)) + sin(psi_lr)*cos(phi_lr)/cos(phi_hat).
/// Requires n_col >= 2 and cos(phi_hat) >= 1e-9.
AngleEstimate estimate_azimuth(const std::vector<double> &delta,
                               const MtsPanel &panel, double known_psi_lr,
                               double known_phi_lr, double phi_hat, double xi);

/// Two-anchor bearing intersection in the horizontal plane. The bearing of
/// the target from panel l is psi_hat_l + boresight azimuth alpha_l. Throws
/// std::domain_error when a bearing tangent is singular or the intersection
/// denominator falls below 1e-9 (near-parallel bearing lines).
void triangulate(double psi_hat_1, const MtsPanel &panel_1, double psi_hat_2,
                 const MtsPanel &panel_2, double &out_x, double &out_y);

/// Full sensing chain from a recovered-delta result: per panel estimate
/// elevation then azimuth, then triangulate every panel pair and average the
/// positions (single pair for L = 2). Requires >= 2 panels with
/// n_row, n_col >= 2. The receiver-side angles come from scene geometry.
SensingEstimate localize(const BcmResult &bcm, const SceneGeometry &scene);

/// True if some adjacent-pair true phase difference of this panel exceeds pi
/// in magnitude before wrapping (aliased inversion); callers should warn.
bool aliasing_risk(const SceneGeometry &scene, std::size_t panel_index);

/// JSON export: angles in degrees, position in meters, diagnostics counters,
/// squared error when ground truth is carried.
std::string sensing_estimate_json(const SensingEstimate &estimate);

} // namespace mtsim

#endif
