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

#ifndef MTSIM_BCM_HPP
#define MTSIM_BCM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mtsim/channel.hpp"
#include "mtsim/sampling.hpp"

namespace mtsim
{

/// Conditional sample means and empirical gains per (panel, atom, level).
/// Layout per panel: index = atom * K + k, row-major atoms.
struct GainTable
{
    std::vector<std::vector<double>> cond_mean;      // [panel][atom*K + k]
    std::vector<std::vector<double>> j_hat;          // cond_mean - global_mean
    std::vector<std::vector<std::int64_t>> counts;   // bin occupancy |Q|
    double global_mean = 0.0;
    std::uint64_t sample_count = 0; // T; 0 for exact-expectation tables
    std::vector<int> panel_rows, panel_cols, panel_levels;

    std::size_t panel_count() const { return cond_mean.size(); }
};

/// Selected configuration and recovered per-atom phase differences.
struct BcmResult
{
    PhaseConfig theta_bcm;                    // selected indices
    std::vector<std::vector<int>> k_star;     // winning level per atom
    std::vector<std::vector<double>> delta_star; // k* * omega in (0, 2*pi]
};

/// Exact gain-function parameters derived from channel means: the gain at
/// level k is scale * amplitude * cos(k*omega - delta_true).
struct TrueGainParams
{
    std::vector<std::vector<double>> amplitude;   // A per atom
    std::vector<std::vector<double>> delta_true;  // Delta per atom, (0, 2*pi]
    double scale = 1.0;                           // C = tx_power
    std::vector<int> panel_levels;
};

/// Single streaming pass over the dataset: per-bin sums and counts, then
/// conditional means and gains. Time O(T * atoms), memory O(atoms * K).
/// Throws std::runtime_error naming the first empty bin (Eq.-(7)-undefined).
/// Fixed-size record chunks merged in order make the result independent of
/// n_threads.
GainTable build_gain_table(const RssDataset &dataset, int n_threads = 1);

/// Per-atom argmax of the conditional mean; ties break to the smallest index.
PhaseConfig select_phases(const GainTable &table);

/// Shared-argmax recovery: k* per atom, delta* = k* * omega mapped into
/// (0, 2*pi] (index 0 reports 2*pi). delta* is congruent to the selected
/// phase mod 2*pi by construction.
BcmResult recover_delta(const GainTable &table);

/// Gain-function parameters from the ensemble's exact channel moments.
TrueGainParams true_gain_params(const ChannelEnsemble &ensemble);

/// Oracle gain value scale * A * cos(k*omega - delta) for one atom.
double exact_gain(const TrueGainParams &params, std::size_t panel, std::size_t atom,
                  int k);

/// Oracle-mode table: cond_mean(p,a,k) = mean_rss_uniform + exact_gain(k).
/// Bit-deterministic; counts are zero and sample_count = 0.
GainTable exact_conditional_table(const ChannelEnsemble &ensemble);

/// CSV export with columns panel,u,v,k,count,cond_mean,j_hat.
void export_gain_table_csv(const GainTable &table, const std::string &path);

/// CSV export with columns panel,u,v,theta_index,delta_star.
void export_bcm_result_csv(const BcmResult &result, const GainTable &table,
                           const std::string &path);

} // namespace mtsim

#endif
