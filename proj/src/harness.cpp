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

#include "mtsim/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mtsim/baselines.hpp"
#include "mtsim/bcm.hpp"
#include "mtsim/phase_math.hpp"
#include "mtsim/sensing.hpp"

namespace mtsim
{

namespace
{

std::string g17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_field(const std::string &s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
    {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string axis_name(SweepAxis axis)
{
    switch (axis)
    {
    case SweepAxis::none:
        return "none";
    case SweepAxis::tx_power:
        return "tx_power";
    case SweepAxis::samples:
        return "samples";
    case SweepAxis::panel_grid:
        return "panel_grid";
    case SweepAxis::placement:
        return "placement";
    case SweepAxis::los_nlos:
        return "los_nlos";
    case SweepAxis::scaling_n:
        return "scaling_n";
    }
    return "none";
}

SweepAxis axis_of(const std::string &name)
{
    if (name == "none")
        return SweepAxis::none;
    if (name == "tx_power")
        return SweepAxis::tx_power;
    if (name == "samples")
        return SweepAxis::samples;
    if (name == "panel_grid")
        return SweepAxis::panel_grid;
    if (name == "placement")
        return SweepAxis::placement;
    if (name == "los_nlos")
        return SweepAxis::los_nlos;
    if (name == "scaling_n")
        return SweepAxis::scaling_n;
    throw std::invalid_argument("experiment: unknown sweep axis '" + name + "'");
}

// Largest row count r <= sqrt(m) with r | m, so grids stay near square.
std::pair<int, int> near_square_grid(int m)
{
    int best = 1;
    for (int r = 1; r * r <= m; ++r)
        if (m % r == 0)
            best = r;
    return {best, m / best};
}

void reshape_panels(SceneGeometry &scene, int total_atoms, int levels)
{
    const int count = static_cast<int>(scene.panels.size());
    if (count == 0)
        throw std::invalid_argument("panel_grid sweep requires at least one panel");
    if (total_atoms % count != 0)
        throw std::invalid_argument("panel_grid sweep: N must divide evenly over " +
                                    std::to_string(count) + " panels");
    const auto [rows, cols] = near_square_grid(total_atoms / count);
    for (MtsPanel &panel : scene.panels)
    {
        panel.n_row = rows;
        panel.n_col = cols;
        if (levels > 0)
            panel.phase_levels = levels;
    }
}

/// One sweep cell's fully prepared inputs.
struct CellContext
{
    std::string sweep_value;
    SceneGeometry scene;
    ChannelOptions channel;
    std::size_t samples = 0;
    bool oracle_mode = false;
};

std::vector<CellContext> prepare_contexts(const ExperimentConfig &config)
{
    std::vector<CellContext> contexts;
    SceneSpec base;
    if (config.sweep != SweepAxis::placement)
        base = load_scene(config.scene_path);

    const auto push = [&](std::string value, SceneGeometry scene, ChannelOptions channel,
                          std::size_t samples) {
        contexts.push_back({std::move(value), std::move(scene), std::move(channel),
                            samples, config.oracle_mode});
    };

    switch (config.sweep)
    {
    case SweepAxis::none:
        push("-", base.geometry, base.channel, config.samples);
        break;
    case SweepAxis::tx_power:
        for (double dbm : config.tx_power_dbm_values)
        {
            ChannelOptions channel = base.channel;
            channel.tx_power = dbm_to_linear(dbm);
            char label[32];
            std::snprintf(label, sizeof(label), "%g", dbm);
            push(label, base.geometry, channel, config.samples);
        }
        break;
    case SweepAxis::samples:
        for (std::size_t t : config.samples_values)
            push(std::to_string(t), base.geometry, base.channel, t);
        break;
    case SweepAxis::panel_grid:
        for (const auto &[n, k] : config.panel_grid_values)
        {
            SceneGeometry scene = base.geometry;
            reshape_panels(scene, n, k);
            validate_scene(scene);
            push(std::to_string(n) + "x" + std::to_string(k), scene, base.channel,
                 config.samples);
        }
        break;
    case SweepAxis::placement:
        for (const std::string &path : config.placement_scenes)
        {
            const SceneSpec spec = load_scene(path);
            push(path, spec.geometry, spec.channel, config.samples);
        }
        break;
    case SweepAxis::los_nlos:
    {
        ChannelOptions open = base.channel;
        open.blockage_factor = 1.0;
        push("los", base.geometry, open, config.samples);
        ChannelOptions blocked = base.channel;
        if (blocked.blockage_factor >= 1.0)
            blocked.blockage_factor = 1e-3;
        push("nlos", base.geometry, blocked, config.samples);
        break;
    }
    case SweepAxis::scaling_n:
        for (int n : config.scaling_n_values)
        {
            SceneGeometry scene = base.geometry;
            if (scene.panels.empty())
                throw std::invalid_argument("scaling_n sweep requires a panel");
            scene.panels.resize(1);
            const auto [rows, cols] = near_square_grid(n);
            scene.panels[0].n_row = rows;
            scene.panels[0].n_col = cols;
            validate_scene(scene);
            push(std::to_string(n), scene, base.channel, config.samples);
        }
        break;
    }
    return contexts;
}

bool sensing_capable(const SceneGeometry &scene)
{
    if (scene.panels.size() < 2)
        return false;
    for (const MtsPanel &panel : scene.panels)
        if (panel.n_row < 2 || panel.n_col < 2)
            return false;
    return true;
}

MetricRecord run_cell(const CellContext &context, const ChannelEnsemble &ensemble,
                      const std::string &algorithm, std::uint64_t seed, int threads)
{
    MetricRecord record;
    record.algorithm = algorithm;
    record.sweep_value = context.sweep_value;
    record.seed = seed;
    const auto start = std::chrono::steady_clock::now();
    try
    {
        if (algorithm == "zps")
        {
            record.snr_boost_db = snr_boost_db(ensemble, zps(context.scene));
        }
        else if (algorithm == "genie")
        {
            record.snr_boost_db = snr_boost_db(ensemble, genie_closest_rotation(ensemble));
        }
        else if (algorithm == "beam_scanning")
        {
            const PhaseConfig best =
                beam_scanning(ensemble, context.scene, context.samples,
                              context.channel.meas_noise_sigma, seed, threads);
            record.snr_boost_db = snr_boost_db(ensemble, best);
        }
        else if (algorithm == "bcm")
        {
            GainTable table;
            if (context.oracle_mode)
            {
                table = exact_conditional_table(ensemble);
            }
            else
            {
                const std::vector<PhaseConfig> schedule =
                    random_schedule(context.scene, context.samples, seed);
                const RssDataset dataset =
                    collect_dataset(ensemble, schedule, context.channel.meas_noise_sigma,
                                    seed, context.scene, threads);
                table = build_gain_table(dataset, threads);
            }
            const BcmResult result = recover_delta(table);
            record.snr_boost_db = snr_boost_db(ensemble, result.theta_bcm);
            if (sensing_capable(context.scene))
            {
                const SensingEstimate estimate = localize(result, context.scene);
                record.squared_error_m2 = estimate.squared_error;
            }
        }
        else
        {
            throw std::invalid_argument("unknown algorithm '" + algorithm + "'");
        }
    }
    catch (const std::exception &e)
    {
        record.status = std::string("error: ") + e.what();
    }
    record.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return record;
}

} // namespace

double snr_boost_db(const ChannelEnsemble &ensemble, const PhaseConfig &config)
{
    const double no_panel = ensemble.tx_power * ensemble.direct.attenuation;
    return to_db(expected_snr(ensemble, config) / no_panel);
}

std::vector<MetricRecord> run_experiment(const ExperimentConfig &config)
{
    if (config.algorithms.empty())
        throw std::invalid_argument("experiment: no algorithms listed");
    if (config.seeds.empty())
        throw std::invalid_argument("experiment: no seeds listed");
    const std::string axis = axis_name(config.sweep);

    std::vector<MetricRecord> records;
    std::vector<CellContext> contexts;
    try
    {
        contexts = prepare_contexts(config);
    }
    catch (const std::exception &e)
    {
        MetricRecord row;
        row.algorithm = "-";
        row.sweep_axis = axis;
        row.sweep_value = "-";
        row.status = std::string("error: ") + e.what();
        records.push_back(row);
        return records;
    }

    for (const CellContext &context : contexts)
    {
        ChannelEnsemble ensemble;
        std::string build_error;
        try
        {
            ensemble = build_ensemble(context.scene, context.channel);
        }
        catch (const std::exception &e)
        {
            build_error = e.what();
        }
        for (std::uint64_t seed : config.seeds)
            for (const std::string &algorithm : config.algorithms)
            {
                MetricRecord record;
                if (build_error.empty())
                {
                    record = run_cell(context, ensemble, algorithm, seed, config.threads);
                }
                else
                {
                    record.algorithm = algorithm;
                    record.sweep_value = context.sweep_value;
                    record.seed = seed;
                    record.status = "error: " + build_error;
                }
                record.sweep_axis = axis;
                records.push_back(std::move(record));
            }
    }
    return records;
}

std::vector<std::string> emit_results(const std::vector<MetricRecord> &records,
                                      const ExperimentConfig &config)
{
    namespace fs = std::filesystem;
    fs::create_directories(config.output_dir);
    std::vector<std::string> written;

    const std::string results_path = (fs::path(config.output_dir) / "results.csv").string();
    {
        std::ofstream out(results_path);
        out << "algorithm,sweep_axis,sweep_value,seed,snr_boost_db,squared_error_m2,status\n";
        for (const MetricRecord &r : records)
        {
            out << csv_field(r.algorithm) << ',' << r.sweep_axis << ','
                << csv_field(r.sweep_value) << ',' << r.seed << ','
                << g17(r.snr_boost_db) << ','
                << (r.squared_error_m2 ? g17(*r.squared_error_m2) : std::string()) << ','
                << csv_field(r.status) << '\n';
        }
    }
    written.push_back(results_path);

    if (config.format == "json")
    {
        nlohmann::json rows = nlohmann::json::array();
        for (const MetricRecord &r : records)
        {
            nlohmann::json row;
            row["algorithm"] = r.algorithm;
            row["sweep_axis"] = r.sweep_axis;
            row["sweep_value"] = r.sweep_value;
            row["seed"] = r.seed;
            row["snr_boost_db"] = r.snr_boost_db;
            if (r.squared_error_m2)
                row["squared_error_m2"] = *r.squared_error_m2;
            else
                row["squared_error_m2"] = nullptr;
            row["status"] = r.status;
            rows.push_back(std::move(row));
        }
        const std::string json_path =
            (fs::path(config.output_dir) / "results.json").string();
        std::ofstream out(json_path);
        out << rows.dump(2) << '\n';
        written.push_back(json_path);
    }

    // Aggregated plot table: one row per sweep value in first-appearance
    // order, per-algorithm mean and standard error over ok seeds.
    const std::string axis = records.empty() ? axis_name(config.sweep)
                                             : records.front().sweep_axis;
    std::vector<std::string> values;
    std::map<std::pair<std::string, std::string>, std::vector<double>> boosts;
    for (const MetricRecord &r : records)
    {
        if (std::find(values.begin(), values.end(), r.sweep_value) == values.end())
            values.push_back(r.sweep_value);
        if (r.status == "ok")
            boosts[{r.sweep_value, r.algorithm}].push_back(r.snr_boost_db);
    }
    const std::string plot_path =
        (fs::path(config.output_dir) / ("plot_" + axis + ".csv")).string();
    {
        std::ofstream out(plot_path);
        out << "sweep_value";
        for (const std::string &alg : config.algorithms)
            out << ',' << alg << "_mean_db," << alg << "_stderr_db";
        out << '\n';
        for (const std::string &value : values)
        {
            out << csv_field(value);
            for (const std::string &alg : config.algorithms)
            {
                const auto it = boosts.find({value, alg});
                if (it == boosts.end() || it->second.empty())
                {
                    out << ",,";
                    continue;
                }
                const std::vector<double> &xs = it->second;
                double mean = 0.0;
                for (double x : xs)
                    mean += x;
                mean /= static_cast<double>(xs.size());
                double var = 0.0;
                for (double x : xs)
                    var += (x - mean) * (x - mean);
                const double stderr_mean =
                    xs.size() > 1 ? std::sqrt(var / (static_cast<double>(xs.size()) - 1.0) /
                                              static_cast<double>(xs.size()))
                                  : 0.0;
                out << ',' << g17(mean) << ',' << g17(stderr_mean);
            }
            out << '\n';
        }
    }
    written.push_back(plot_path);

    const std::string timings_path =
        (fs::path(config.output_dir) / "timings.csv").string();
    {
        std::ofstream out(timings_path);
        out << "algorithm,sweep_axis,sweep_value,seed,wall_time_s\n";
        for (const MetricRecord &r : records)
            out << csv_field(r.algorithm) << ',' << r.sweep_axis << ','
                << csv_field(r.sweep_value) << ',' << r.seed << ',' << g17(r.wall_time_s)
                << '\n';
    }
    written.push_back(timings_path);
    return written;
}

namespace
{

std::vector<std::string> split_list(const std::string &text)
{
    std::vector<std::string> items;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
    {
        const std::size_t a = item.find_first_not_of(" \t");
        if (a == std::string::npos)
            continue;
        const std::size_t b = item.find_last_not_of(" \t");
        items.push_back(item.substr(a, b - a + 1));
    }
    return items;
}

} // namespace

ExperimentConfig load_experiment_config(const std::string &path)
{
    const KvDocument doc = load_kv_file(path);
    const KvTable &exp = doc.section("experiment");

    ExperimentConfig config;
    config.scene_path = exp.string_or("scene", "");
    config.algorithms = split_list(exp.string_or("algorithms", "bcm,zps,beam_scanning,genie"));
    config.sweep = axis_of(exp.string_or("sweep", "none"));
    if (exp.arrays.count("seeds"))
        for (double s : exp.array("seeds"))
            config.seeds.push_back(static_cast<std::uint64_t>(s));
    else
    {
        const auto base = static_cast<std::uint64_t>(exp.number_or("seed", 1.0));
        const auto count = static_cast<std::uint64_t>(exp.number_or("seed_count", 1.0));
        for (std::uint64_t i = 0; i < count; ++i)
            config.seeds.push_back(base + i);
    }
    config.samples = static_cast<std::size_t>(exp.number_or("samples", 1000.0));
    config.output_dir = exp.string_or("output_dir", "out");
    config.oracle_mode = exp.boolean_or("oracle", false);
    config.format = exp.string_or("format", "csv");
    config.threads = static_cast<int>(exp.number_or("threads", 1.0));

    KvTable empty;
    const auto sweep_it = doc.sections.find("sweep");
    const KvTable &sweep = sweep_it == doc.sections.end() ? empty : sweep_it->second;

    config.tx_power_dbm_values = {-10.0, -5.0, 0.0, 5.0, 10.0};
    if (sweep.arrays.count("tx_power_dbm"))
        config.tx_power_dbm_values = sweep.array("tx_power_dbm");

    config.samples_values = {1000, 2000, 3000};
    if (sweep.arrays.count("samples"))
    {
        config.samples_values.clear();
        for (double t : sweep.array("samples"))
            config.samples_values.push_back(static_cast<std::size_t>(t));
    }

    config.panel_grid_values = {{200, 4}, {200, 2}, {100, 4}, {100, 2}};
    if (sweep.arrays.count("grid_n") || sweep.arrays.count("grid_k"))
    {
        const std::vector<double> ns = sweep.array("grid_n");
        const std::vector<double> ks = sweep.array("grid_k");
        if (ns.size() != ks.size())
            throw std::invalid_argument("sweep: grid_n and grid_k lengths differ");
        config.panel_grid_values.clear();
        for (std::size_t i = 0; i < ns.size(); ++i)
            config.panel_grid_values.emplace_back(static_cast<int>(ns[i]),
                                                  static_cast<int>(ks[i]));
    }

    if (sweep.strings.count("placements"))
        config.placement_scenes = split_list(sweep.string_or("placements", ""));

    config.scaling_n_values = {100, 200, 400, 800};
    if (sweep.arrays.count("scaling_n"))
    {
        config.scaling_n_values.clear();
        for (double n : sweep.array("scaling_n"))
            config.scaling_n_values.push_back(static_cast<int>(n));
    }
    return config;
}

} // namespace mtsim
