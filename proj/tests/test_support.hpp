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

#ifndef MTSIM_TEST_SUPPORT_HPP
#define MTSIM_TEST_SUPPORT_HPP

#include <cmath>
#include <random>
#include <vector>

#include "mtsim/channel.hpp"
#include "mtsim/geometry.hpp"
#include "mtsim/phase_math.hpp"

namespace mtsim_test
{

/// Two single-atom panels with two phase levels facing a tx-rx pair: the
/// smallest scene whose joint configuration space is exhaustively enumerable.
inline mtsim::SceneGeometry tiny_two_panel_scene(int n_row = 1, int n_col = 1,
                                                 int levels = 2)
{
    mtsim::SceneGeometry scene;
    scene.name = "tiny";
    scene.wavelength = 0.125;
    scene.tx = {0.0, 0.0, 0.0};
    scene.rx = {4.0, 0.0, 0.0};
    mtsim::MtsPanel p1;
    p1.center = {1.0, -2.0, 0.5};
    p1.boresight_azimuth = mtsim::deg2rad(90.0);
    p1.n_row = n_row;
    p1.n_col = n_col;
    p1.spacing = 0.025;
    p1.phase_levels = levels;
    mtsim::MtsPanel p2;
    p2.center = {3.0, 2.0, 0.5};
    p2.boresight_azimuth = mtsim::deg2rad(-90.0);
    p2.n_row = n_row;
    p2.n_col = n_col;
    p2.spacing = 0.025;
    p2.phase_levels = levels;
    scene.panels = {p1, p2};
    return scene;
}

/// Pure-LOS constant-attenuation channel options, no measurement noise.
inline mtsim::ChannelOptions pure_los_options(double gamma = 0.4,
                                              double tx_power = 1.0)
{
    mtsim::ChannelOptions options;
    options.attenuation.kind = mtsim::AttenuationModel::Kind::constant;
    options.attenuation.gamma = gamma;
    options.tx_power = tx_power;
    return options;
}

/// Rician options with one factor for every link class.
inline mtsim::ChannelOptions fading_options(double gamma, double rician_factor,
                                            double tx_power = 1.0,
                                            double noise_sigma = 0.0)
{
    mtsim::ChannelOptions options;
    options.attenuation.kind = mtsim::AttenuationModel::Kind::constant;
    options.attenuation.gamma = gamma;
    options.rician.direct = rician_factor;
    options.rician.tx_to_panel = rician_factor;
    options.rician.panel_to_rx = rician_factor;
    options.tx_power = tx_power;
    options.meas_noise_sigma = noise_sigma;
    return options;
}

/// Fixed asymmetric scene whose angle and phase tables are frozen as oracle
/// constants (generated once by an independent implementation).
inline mtsim::SceneGeometry frozen_oracle_scene()
{
    mtsim::SceneGeometry scene;
    scene.name = "frozen";
    scene.wavelength = 0.125;
    scene.tx = {0.3, -0.8, 0.45};
    scene.rx = {3.7, 1.0, -0.2};
    mtsim::MtsPanel p1;
    p1.center = {1.1, -1.7, 0.9};
    p1.boresight_azimuth = mtsim::deg2rad(72.0);
    p1.n_row = 2;
    p1.n_col = 3;
    p1.spacing = 0.02;
    p1.phase_levels = 4;
    mtsim::MtsPanel p2;
    p2.center = {2.4, 2.2, 0.4};
    p2.boresight_azimuth = mtsim::deg2rad(-105.0);
    p2.n_row = 3;
    p2.n_col = 2;
    p2.spacing = 0.018;
    p2.phase_levels = 3;
    scene.panels = {p1, p2};
    return scene;
}

/// Smallest-index argmax of cos(k*omega - delta): the quantizer the recovery
/// path must match. Kept here as an independent reference implementation.
inline int quantize_level(double delta, int levels)
{
    const double omega = mtsim::two_pi / levels;
    int best = 0;
    double best_val = std::cos(-delta);
    for (int k = 1; k < levels; ++k)
    {
        const double val = std::cos(k * omega - delta);
        if (val > best_val)
        {
            best_val = val;
            best = k;
        }
    }
    return best;
}

/// Random far-field two-panel scene for sensing tests: endpoints well inside
/// both panels' front half-spaces, atom spacing lambda/5 (alias-free), panels
/// aimed near the tx-rx midpoint. Rejection keeps adjacent-pair true phase
/// differences under 0.8*pi and the two bearing lines away from parallel.
inline mtsim::SceneGeometry far_field_scene(std::mt19937_64 &rng, int n_row = 6,
                                            int n_col = 6, int levels = 16)
{
    using mtsim::MtsPanel;
    using mtsim::SceneGeometry;
    const double lambda = 299792458.0 / 2.6e9;
    auto uniform = [&rng](double a, double b) {
        return std::uniform_real_distribution<double>(a, b)(rng);
    };
    for (;;)
    {
        SceneGeometry scene;
        scene.name = "far_field";
        scene.wavelength = lambda;
        scene.tx = {uniform(-1.0, 1.0), uniform(-1.0, 1.0), uniform(0.0, 0.5)};
        scene.rx = {uniform(7.0, 9.0), uniform(-1.0, 1.0), uniform(0.0, 0.5)};
        const mtsim::Vec3 mid = (scene.tx + scene.rx) * 0.5;
        for (double side : {-1.0, 1.0})
        {
            MtsPanel panel;
            panel.center = {uniform(3.0, 5.0), side * uniform(3.5, 4.5),
                            uniform(1.2, 1.8)};
            panel.boresight_azimuth =
                std::atan2(mid.y - panel.center.y, mid.x - panel.center.x) +
                uniform(-0.2, 0.2);
            panel.n_row = n_row;
            panel.n_col = n_col;
            panel.spacing = lambda / 5.0;
            panel.phase_levels = levels;
            scene.panels.push_back(panel);
        }

        bool ok = true;
        std::vector<double> bearing_tan;
        for (std::size_t p = 0; p < scene.panels.size() && ok; ++p)
        {
            try
            {
                const mtsim::LinkAngles at =
                    mtsim::link_angles(scene, p, mtsim::LinkEndpoint::tx);
                mtsim::link_angles(scene, p, mtsim::LinkEndpoint::rx);
                const double bearing = at.azimuth + scene.panels[p].boresight_azimuth;
                if (std::abs(std::cos(bearing)) < 0.15)
                {
                    ok = false;
                    break;
                }
                bearing_tan.push_back(std::tan(bearing));
            }
            catch (const std::domain_error &)
            {
                ok = false;
                break;
            }
            const std::vector<double> delta = mtsim::true_phase_difference(scene, p);
            const MtsPanel &panel = scene.panels[p];
            for (int u = 0; u < panel.n_row && ok; ++u)
                for (int v = 0; v < panel.n_col && ok; ++v)
                {
                    const std::size_t i = static_cast<std::size_t>(u) * panel.n_col + v;
                    if (u + 1 < panel.n_row)
                    {
                        const std::size_t j = i + static_cast<std::size_t>(panel.n_col);
                        if (std::abs(mtsim::wrap_pi(delta[j] - delta[i])) >
                            0.8 * mtsim::pi)
                            ok = false;
                    }
                    if (v + 1 < panel.n_col &&
                        std::abs(mtsim::wrap_pi(delta[i + 1] - delta[i])) >
                            0.8 * mtsim::pi)
                        ok = false;
                }
        }
        if (ok && std::abs(bearing_tan[0] - bearing_tan[1]) < 0.1)
            ok = false;
        if (ok)
            return scene;
    }
}

} // namespace mtsim_test

#endif
