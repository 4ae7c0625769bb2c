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

#ifndef MTSIM_HARNESS_HPP
#define MTSIM_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mtsim/scene_io.hpp"

namespace mtsim
{

enum class SweepAxis
{
    none,
    tx_power,   // dBm values
    samples,    // T values
    panel_grid, // (N, K) pairs; N total atoms split evenly across panels
    placement,  // scene files
    los_nlos,   // direct link open vs blocked
    scaling_n   // oracle-mode N values, single panel
};

/// Config-file driven experiment description. Sweep value lists are only
/// consulted for the active axis.
struct ExperimentConfig
{
    std::string scene_path;
    std::vector<std::string> algorithms; // "bcm", "zps", "beam_scanning", "genie"
    SweepAxis sweep = SweepAxis::none;
    std::vector<std::uint64_t> seeds;
    std::size_t samples = 1000; // T per run
    std::string output_dir = "out";
    bool oracle_mode = false; // exact-expectation tables instead of datasets
    std::string format = "csv"; // "csv" or "json"
    int threads = 1;

    std::vector<double> tx_power_dbm_values;
    std::vector<std::size_t> samples_values;
    std::vector<std::pair<int, int>> panel_grid_values; // (N, K)
    std::vector<std::string> placement_scenes;
    std::vector<int> scaling_n_values;
};

/// One sweep-cell result row. wall_time is reported in a separate timings
/// file so result files are byte-identical across reruns and thread counts.
struct MetricRecord
{
    std::string algorithm;
    std::string sweep_axis;
    std::string sweep_value;
    std::uint64_t seed = 0;
    double snr_boost_db = 0.0;
    std::optional<double> squared_error_m2; // present only when sensing ran
    double wall_time_s = 0.0;
    std::string status = "ok"; // "ok" or "error: <what>"
};

/// 10*log10(expected_snr with configured panels / expected_snr without
/// panels); the no-panel SNR equals tx_power * gamma_direct.
double snr_boost_db(const ChannelEnsemble &ensemble, const PhaseConfig &config);

/// Runs every (sweep value, seed, algorithm) cell; a failing cell records an
/// error row and leaves the rest untouched. Records are returned in canonical
/// (sweep value, seed, algorithm) order regardless of threads.
std::vector<MetricRecord> run_experiment(const ExperimentConfig &config);

/// Writes results.csv (always), results.json (when format = json),
/// plot_<axis>.csv (x, then per-algorithm mean and standard-error columns),
/// and timings.csv. Returns the list of written file paths.
std::vector<std::string> emit_results(const std::vector<MetricRecord> &records,
                                      const ExperimentConfig &config);

/// Parses an experiment TOML-subset file.
ExperimentConfig load_experiment_config(const std::string &path);

} // namespace mtsim

#endif
