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

#ifndef MTSIM_SAMPLING_HPP
#define MTSIM_SAMPLING_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mtsim/channel.hpp"
#include "mtsim/geometry.hpp"

namespace mtsim
{

/// One joint phase-shift configuration: per-panel, row-major matrices of
/// phase indices k in {0,...,K-1}; the applied phase is theta = k * 2*pi/K
/// with K the panel's phase_levels (carried per panel in levels).
struct PhaseConfig
{
    std::vector<std::vector<int>> k; // [panel][u * n_col + v]
    std::vector<int> levels;         // K per panel

    double phase(std::size_t panel, std::size_t atom) const;
    bool dims_match(const ChannelEnsemble &ensemble) const;
};

/// Zero-initialized configuration matching the scene's panel dimensions.
PhaseConfig make_config(const SceneGeometry &scene);

/// Ordered RSS dataset: T records of (configuration, measured S) plus the
/// metadata needed to reproduce and identify it.
struct RssDataset
{
    std::vector<PhaseConfig> configs;
    std::vector<double> rss;
    std::uint64_t master_seed = 0;
    std::uint64_t scene_fingerprint = 0;
    std::vector<int> panel_rows, panel_cols, panel_levels;

    std::size_t size() const { return rss.size(); }
};

/// T i.i.d. uniform configurations, deterministic for a fixed seed: one
/// derived stream consumed in canonical (t, panel, u, v) order.
std::vector<PhaseConfig> random_schedule(const SceneGeometry &scene, std::size_t count,
                                         std::uint64_t master_seed);

/// Every joint configuration exactly once, lexicographic order (last atom of
/// the last panel varies fastest). Throws std::invalid_argument when the
/// total count K^(sum N) exceeds the cap.
std::vector<PhaseConfig> exhaustive_schedule(const SceneGeometry &scene,
                                             std::uint64_t cap = (1ULL << 20));

/// Measures every scheduled configuration with a fresh fading realization
/// (block-i.i.d. per sample). Record t uses streams derived from
/// (master_seed, t), so any thread count reproduces identical bits.
RssDataset collect_dataset(const ChannelEnsemble &ensemble,
                           const std::vector<PhaseConfig> &schedule,
                           double meas_noise_sigma, std::uint64_t master_seed,
                           const SceneGeometry &scene, int n_threads = 1);

/// Dataset persistence; format chosen by extension-independent flag.
/// Both formats round-trip bit-exactly (CSV stores doubles with %.17g).
void save_dataset_csv(const RssDataset &dataset, const std::string &path);
void save_dataset_binary(const RssDataset &dataset, const std::string &path);
RssDataset load_dataset(const std::string &path); // auto-detects format

} // namespace mtsim

#endif
