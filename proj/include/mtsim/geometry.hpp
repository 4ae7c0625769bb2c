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

#ifndef MTSIM_GEOMETRY_HPP
#define MTSIM_GEOMETRY_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace mtsim
{

struct Vec3
{
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3 &o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
};

/// One vertical metasurface panel. Meta-atoms form an n_row x n_col grid with
/// spacing d_m; rows are vertical (u increases upward), columns horizontal
/// (v increases along the panel tangent). The boresight azimuth alpha rotates
/// the outward normal about +z: normal = (cos alpha, sin alpha, 0).
struct MtsPanel
{
    Vec3 center;
    double boresight_azimuth = 0.0; // radians
    int n_row = 1;
    int n_col = 1;
    double spacing = 0.0;  // d_M, meters
    int phase_levels = 2;  // K

    int atom_count() const { return n_row * n_col; }
    Vec3 normal() const
    {
        return {std::cos(boresight_azimuth), std::sin(boresight_azimuth), 0.0};
    }
    Vec3 tangent() const
    {
        return {-std::sin(boresight_azimuth), std::cos(boresight_azimuth), 0.0};
    }
};

/// Scene in world coordinates: one transmitter, one receiver, L panels.
struct SceneGeometry
{
    std::string name;
    double wavelength = 0.0; // meters
    Vec3 tx;
    Vec3 rx;
    std::vector<MtsPanel> panels;

    /// Spatial frequency xi = -2*pi / wavelength used by all phase formulas.
    double xi() const;
};

enum class LinkEndpoint
{
    tx,
    rx
};

/// Azimuth/elevation/distance of an endpoint in a panel's local frame.
/// Azimuth is measured in the horizontal plane from the panel boresight,
/// elevation from the horizontal plane; both in (-pi/2, pi/2).
struct LinkAngles
{
    double azimuth = 0.0;   // psi, radians
    double elevation = 0.0; // phi, radians
    double distance = 0.0;  // meters
};

/// Per-atom line-of-sight phases of one panel plus the direct link, all
/// reduced to (-pi, pi]. Tables are row-major: index = u * n_col + v with
/// zero-based u, v.
struct LosPhaseTable
{
    double direct = 0.0;           // angle of conj-free direct LOS, xi * d_tr
    std::vector<double> tx_to_atom; // angle(h_bar_{t,l,u,v})
    std::vector<double> atom_to_rx; // angle(h_bar_{l,r,u,v})
    int n_row = 0;
    int n_col = 0;
};

/// Local-frame angles of an endpoint as seen from a panel.
/// Throws std::domain_error if the endpoint is behind the panel plane or
/// coincides with the panel center.
LinkAngles link_angles(const SceneGeometry &scene, std::size_t panel_index,
                       LinkEndpoint endpoint);

/// Far-field LOS phases of every atom of one panel and of the direct link.
/// Per-atom terms are index-proportional (zero-based u, v, no centering
/// offset); constant offsets cancel in all phase differences.
LosPhaseTable los_phases(const SceneGeometry &scene, std::size_t panel_index);

/// True per-atom phase difference Delta = angle(direct) - angle(tx->atom)
/// - angle(atom->rx), reduced to (0, 2*pi]. Row-major like LosPhaseTable.
std::vector<double> true_phase_difference(const SceneGeometry &scene,
                                          std::size_t panel_index);

/// Validates ranges and dimensions; throws std::invalid_argument on the first
/// violated invariant.
void validate_scene(const SceneGeometry &scene);

/// FNV-1a hash of the canonical scene serialization; identifies a scene in
/// dataset headers independent of its name.
std::uint64_t scene_fingerprint(const SceneGeometry &scene);

} // namespace mtsim

#endif
