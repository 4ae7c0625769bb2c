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

#include "mtsim/baselines.hpp"

#include <stdexcept>

#include "mtsim/phase_math.hpp"

namespace mtsim
{

PhaseConfig zps(const SceneGeometry &scene) { return make_config(scene); }

PhaseConfig beam_scanning(const ChannelEnsemble &ensemble, const SceneGeometry &scene,
                          std::size_t count, double meas_noise_sigma,
                          std::uint64_t seed, int n_threads)
{
    if (count < 1)
        throw std::invalid_argument("beam_scanning: count must be >= 1");
    const std::vector<PhaseConfig> schedule = random_schedule(scene, count, seed);
    const RssDataset ds =
        collect_dataset(ensemble, schedule, meas_noise_sigma, seed, scene, n_threads);
    std::size_t best = 0;
    for (std::size_t t = 1; t < ds.size(); ++t)
        if (ds.rss[t] > ds.rss[best]) // strict: earliest wins ties
            best = t;
    return ds.configs[best];
}

PhaseConfig genie_closest_rotation(const ChannelEnsemble &ensemble)
{
    const std::complex<double> direct_mean = ensemble.direct.mean();
    if (std::abs(direct_mean) <= 0.0)
        throw std::domain_error("genie_closest_rotation: zero direct mean");

    PhaseConfig config;
    config.levels = ensemble.panel_levels;
    config.k.resize(ensemble.panel_count());
    for (std::size_t p = 0; p < ensemble.panel_count(); ++p)
    {
        const int levels = ensemble.panel_levels[p];
        const double omega = two_pi / levels;
        config.k[p].resize(ensemble.atom_count(p));
        for (std::size_t a = 0; a < ensemble.atom_count(p); ++a)
        {
            // Rotate the mean reflected channel as close as possible to the
            // mean direct channel on the K-ary grid.
            const double misalign = std::arg(ensemble.reflected_mean(p, a)) -
                                    std::arg(direct_mean);
            int best = 0;
            double best_value = std::cos(misalign);
            for (int k = 1; k < levels; ++k)
            {
                const double value = std::cos(k * omega + misalign);
                if (value > best_value)
                {
                    best_value = value;
                    best = k;
                }
            }
            config.k[p][a] = best;
        }
    }
    return config;
}

} // namespace mtsim
