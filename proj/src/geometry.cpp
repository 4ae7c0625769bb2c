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

#include "mtsim/geometry.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "mtsim/phase_math.hpp"

namespace mtsim
{

double SceneGeometry::xi() const { return -two_pi / wavelength; }

LinkAngles link_angles(const SceneGeometry &scene, std::size_t panel_index,
                       LinkEndpoint endpoint)
{
    if (panel_index >= scene.panels.size())
        throw std::invalid_argument("link_angles: panel index out of range");
    const MtsPanel &panel = scene.panels[panel_index];
    const Vec3 &point = (endpoint == LinkEndpoint::tx) ? scene.tx : scene.rx;

    const Vec3 d = point - panel.center;
    const double dist = d.norm();
    if (dist <= 0.0)
        throw std::domain_error("link_angles: endpoint coincides with panel center");
    const Vec3 s = d * (1.0 / dist);

    // Local frame: x along the outward normal, y along the tangent, z up.
    const double local_x = s.dot(panel.normal());
    const double local_y = s.dot(panel.tangent());
    if (local_x <= 0.0)
        throw std::domain_error("link_angles: endpoint behind panel");

    LinkAngles out;
    out.azimuth = std::atan2(local_y, local_x);
    out.elevation = std::asin(std::clamp(s.z, -1.0, 1.0));
    out.distance = dist;
    return out;
}

LosPhaseTable los_phases(const SceneGeometry &scene, std::size_t panel_index)
{
    const MtsPanel &panel = scene.panels[panel_index];
    const LinkAngles at = link_angles(scene, panel_index, LinkEndpoint::tx);
    const LinkAngles ar = link_angles(scene, panel_index, LinkEndpoint::rx);
    const double xi = scene.xi();
    const double d_m = panel.spacing;

    // Path-difference slopes of the incident and departing wavefronts.
    const double row_t = std::sin(at.elevation);
    const double col_t = std::sin(at.azimuth) * std::cos(at.elevation);
    const double row_r = std::sin(ar.elevation);
    const double col_r = std::sin(ar.azimuth) * std::cos(ar.elevation);

    LosPhaseTable table;
    table.n_row = panel.n_row;
    table.n_col = panel.n_col;
    table.direct = wrap_pi(xi * (scene.tx - scene.rx).norm());
    table.tx_to_atom.resize(panel.atom_count());
    table.atom_to_rx.resize(panel.atom_count());

    for (int u = 0; u < panel.n_row; ++u)
    {
        for (int v = 0; v < panel.n_col; ++v)
        {
            const std::size_t i = static_cast<std::size_t>(u) * panel.n_col + v;
            table.tx_to_atom[i] =
                wrap_pi(xi * at.distance + xi * d_m * (u * row_t - v * col_t));
            table.atom_to_rx[i] =
                wrap_pi(-xi * ar.distance + xi * d_m * (v * col_r - u * row_r));
        }
    }
    return table;
}

std::vector<double> true_phase_difference(const SceneGeometry &scene,
                                          std::size_t panel_index)
{
    const LosPhaseTable t = los_phases(scene, panel_index);
    std::vector<double> delta(t.tx_to_atom.size());
    for (std::size_t i = 0; i < delta.size(); ++i)
        delta[i] = wrap_02pi(t.direct - t.tx_to_atom[i] - t.atom_to_rx[i]);
    return delta;
}

void validate_scene(const SceneGeometry &scene)
{
    if (!(scene.wavelength > 0.0))
        throw std::invalid_argument("scene: wavelength must be positive");
    if (scene.panels.empty())
        return; // a panel-free scene is legal (direct link only)
    for (std::size_t p = 0; p < scene.panels.size(); ++p)
    {
        const MtsPanel &panel = scene.panels[p];
        const std::string where = "scene: panel " + std::to_string(p);
        if (panel.n_row < 1 || panel.n_col < 1)
            throw std::invalid_argument(where + ": grid dimensions must be >= 1");
        if (!(panel.spacing > 0.0))
            throw std::invalid_argument(where + ": spacing must be positive");
        if (panel.phase_levels < 2)
            throw std::invalid_argument(where + ": phase levels must be >= 2");
    }
}

std::uint64_t scene_fingerprint(const SceneGeometry &scene)
{
    // FNV-1a over a canonical text serialization (name excluded).
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto absorb = [&h](const char *bytes, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i)
        {
            h ^= static_cast<unsigned char>(bytes[i]);
            h *= 0x100000001b3ULL;
        }
    };
    char buf[64];
    auto put = [&](double v) {
        const int n = std::snprintf(buf, sizeof buf, "%.17g;", v);
        absorb(buf, static_cast<std::size_t>(n));
    };
    put(scene.wavelength);
    put(scene.tx.x); put(scene.tx.y); put(scene.tx.z);
    put(scene.rx.x); put(scene.rx.y); put(scene.rx.z);
    for (const MtsPanel &panel : scene.panels)
    {
        put(panel.center.x); put(panel.center.y); put(panel.center.z);
        put(panel.boresight_azimuth);
        put(panel.n_row); put(panel.n_col);
        put(panel.spacing);
        put(panel.phase_levels);
    }
    return h;
}

} // namespace mtsim
