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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mtsim/baselines.hpp"
#include "mtsim/bcm.hpp"
#include "mtsim/harness.hpp"
#include "mtsim/phase_math.hpp"
#include "mtsim/sampling.hpp"
#include "mtsim/scene_io.hpp"
#include "mtsim/sensing.hpp"

namespace
{

void warn_aliasing(const mtsim::SceneGeometry &scene)
{
    for (std::size_t p = 0; p < scene.panels.size(); ++p)
        if (mtsim::aliasing_risk(scene, p))
            std::cerr << "warning: panel " << p
                      << ": adjacent-atom phase differences exceed pi; angle "
                         "estimates may alias (reduce atom spacing below a "
                         "quarter wavelength)\n";
}

int report_cells(const std::vector<mtsim::MetricRecord> &records,
                 const std::vector<std::string> &files)
{
    std::size_t failed = 0;
    for (const mtsim::MetricRecord &r : records)
        if (r.status != "ok")
        {
            ++failed;
            std::cerr << "cell failed: " << r.algorithm << " " << r.sweep_axis << "="
                      << r.sweep_value << " seed " << r.seed << ": " << r.status << "\n";
        }
    for (const std::string &f : files)
        std::cout << "wrote " << f << "\n";
    std::cout << "cells: " << (records.size() - failed) << " ok, " << failed
              << " failed\n";
    return failed == 0 ? 0 : 1;
}

int cmd_run(const std::string &config_path, std::int64_t seed_override,
            const std::string &out_override, const std::string &format_override,
            int threads_override)
{
    mtsim::ExperimentConfig config = mtsim::load_experiment_config(config_path);
    if (seed_override >= 0)
        config.seeds = {static_cast<std::uint64_t>(seed_override)};
    if (!out_override.empty())
        config.output_dir = out_override;
    if (!format_override.empty())
        config.format = format_override;
    if (threads_override > 0)
        config.threads = threads_override;

    if (!config.scene_path.empty())
        try
        {
            warn_aliasing(mtsim::load_scene(config.scene_path).geometry);
        }
        catch (const std::exception &)
        {
            // run_experiment reports scene problems as failure rows
        }

    const std::vector<mtsim::MetricRecord> records = mtsim::run_experiment(config);
    const std::vector<std::string> files = mtsim::emit_results(records, config);
    return report_cells(records, files);
}

int cmd_scaling(const std::string &scene_path, std::vector<int> n_values, bool sampled,
                std::size_t samples, std::int64_t seed, const std::string &out,
                const std::string &format, int threads)
{
    mtsim::ExperimentConfig config;
    config.scene_path = scene_path;
    config.algorithms = {"bcm"};
    config.sweep = mtsim::SweepAxis::scaling_n;
    config.seeds = {static_cast<std::uint64_t>(seed)};
    config.samples = samples;
    config.output_dir = out;
    config.oracle_mode = !sampled;
    config.format = format;
    config.threads = threads;
    config.scaling_n_values = std::move(n_values);

    const std::vector<mtsim::MetricRecord> records = mtsim::run_experiment(config);
    for (const mtsim::MetricRecord &r : records)
        if (r.status == "ok")
            std::printf("N=%-6s boost=%10.4f dB  wall=%.6f s\n", r.sweep_value.c_str(),
                        r.snr_boost_db, r.wall_time_s);
    const std::vector<std::string> files = mtsim::emit_results(records, config);
    return report_cells(records, files);
}

int cmd_oracle_check(const std::string &scene_path, std::size_t samples,
                     std::int64_t seed, double tol, std::uint64_t cap, int threads)
{
    const mtsim::SceneSpec spec = mtsim::load_scene(scene_path);
    const mtsim::ChannelEnsemble ensemble =
        mtsim::build_ensemble(spec.geometry, spec.channel);
    const mtsim::GainTable exact = mtsim::exact_conditional_table(ensemble);

    const std::vector<mtsim::PhaseConfig> schedule =
        samples == 0 ? mtsim::exhaustive_schedule(spec.geometry, cap)
                     : mtsim::random_schedule(spec.geometry, samples, seed);
    const mtsim::RssDataset dataset =
        mtsim::collect_dataset(ensemble, schedule, spec.channel.meas_noise_sigma,
                               static_cast<std::uint64_t>(seed), spec.geometry, threads);
    const mtsim::GainTable table = mtsim::build_gain_table(dataset, threads);

    double max_dev = 0.0;
    std::size_t atoms = 0, agreeing = 0;
    const mtsim::PhaseConfig sampled_sel = mtsim::select_phases(table);
    const mtsim::PhaseConfig exact_sel = mtsim::select_phases(exact);
    for (std::size_t p = 0; p < table.panel_count(); ++p)
    {
        for (std::size_t i = 0; i < table.cond_mean[p].size(); ++i)
            max_dev = std::max(max_dev,
                               std::abs(table.cond_mean[p][i] - exact.cond_mean[p][i]));
        for (std::size_t a = 0; a < sampled_sel.k[p].size(); ++a)
        {
            ++atoms;
            if (sampled_sel.k[p][a] == exact_sel.k[p][a])
                ++agreeing;
        }
    }
    std::printf("schedule: %zu records (%s)\n", dataset.size(),
                samples == 0 ? "exhaustive" : "random");
    std::printf("max |cond_mean - closed form| = %.3e (tolerance %.3e)\n", max_dev, tol);
    std::printf("phase selections agreeing with closed form: %zu / %zu\n", agreeing,
                atoms);
    const bool ok = max_dev <= tol;
    std::printf("oracle-check: %s\n", ok ? "PASS" : "FAIL");
    return ok ? 0 : 1;
}

int cmd_dataset_collect(const std::string &scene_path, std::size_t samples,
                        std::int64_t seed, const std::string &out,
                        const std::string &format, int threads)
{
    const mtsim::SceneSpec spec = mtsim::load_scene(scene_path);
    warn_aliasing(spec.geometry);
    const mtsim::ChannelEnsemble ensemble =
        mtsim::build_ensemble(spec.geometry, spec.channel);
    const std::vector<mtsim::PhaseConfig> schedule =
        mtsim::random_schedule(spec.geometry, samples, static_cast<std::uint64_t>(seed));
    const mtsim::RssDataset dataset =
        mtsim::collect_dataset(ensemble, schedule, spec.channel.meas_noise_sigma,
                               static_cast<std::uint64_t>(seed), spec.geometry, threads);
    if (format == "binary")
        mtsim::save_dataset_binary(dataset, out);
    else
        mtsim::save_dataset_csv(dataset, out);
    std::cout << "wrote " << dataset.size() << " records to " << out << " (" << format
              << ")\n";
    return 0;
}

int cmd_dataset_inspect(const std::string &path)
{
    const mtsim::RssDataset dataset = mtsim::load_dataset(path);
    char fp[24];
    std::snprintf(fp, sizeof(fp), "%016llx",
                  static_cast<unsigned long long>(dataset.scene_fingerprint));
    std::printf("records: %zu\n", dataset.size());
    std::printf("master seed: %llu\n",
                static_cast<unsigned long long>(dataset.master_seed));
    std::printf("scene fingerprint: %s\n", fp);
    for (std::size_t p = 0; p < dataset.panel_rows.size(); ++p)
        std::printf("panel %zu: %dx%d atoms, %d phase levels\n", p,
                    dataset.panel_rows[p], dataset.panel_cols[p],
                    dataset.panel_levels[p]);
    if (!dataset.rss.empty())
    {
        double lo = dataset.rss[0], hi = dataset.rss[0], sum = 0.0;
        for (double s : dataset.rss)
        {
            lo = std::min(lo, s);
            hi = std::max(hi, s);
            sum += s;
        }
        std::printf("rss: min %.6g  mean %.6g  max %.6g\n", lo,
                    sum / static_cast<double>(dataset.size()), hi);
    }
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"mtsim: blind metasurface configuration and sensing simulator"};
    app.require_subcommand(1);
    int exit_code = 0;

    // run
    std::string run_config;
    std::int64_t run_seed = -1;
    std::string run_out, run_format;
    int run_threads = 0;
    CLI::App *run = app.add_subcommand("run", "Run an experiment config file");
    run->add_option("config", run_config, "experiment config file")->required();
    run->add_option("--seed", run_seed, "override: run this single master seed");
    run->add_option("--out", run_out, "override: output directory");
    run->add_option("--format", run_format, "override: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    run->add_option("--threads", run_threads, "override: worker thread count");
    run->callback([&] { exit_code = cmd_run(run_config, run_seed, run_out, run_format,
                                            run_threads); });

    // scaling
    std::string sc_scene, sc_out = "out_scaling", sc_format = "csv";
    std::vector<int> sc_n = {16, 64, 256};
    bool sc_sampled = false;
    std::size_t sc_samples = 1000;
    std::int64_t sc_seed = 1;
    int sc_threads = 1;
    CLI::App *scaling =
        app.add_subcommand("scaling", "Sweep total atom count N on a single panel");
    scaling->add_option("--scene", sc_scene, "scene file")->required();
    scaling->add_option("--n", sc_n, "N values")->delimiter(',');
    scaling->add_flag("--sampled", sc_sampled,
                      "use sampled datasets instead of exact-expectation tables");
    scaling->add_option("--samples", sc_samples, "T per run in sampled mode");
    scaling->add_option("--seed", sc_seed, "master seed");
    scaling->add_option("--out", sc_out, "output directory");
    scaling->add_option("--format", sc_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    scaling->add_option("--threads", sc_threads, "worker thread count");
    scaling->callback([&] {
        exit_code = cmd_scaling(sc_scene, sc_n, sc_sampled, sc_samples, sc_seed, sc_out,
                                sc_format, sc_threads);
    });

    // oracle-check
    std::string oc_scene;
    std::size_t oc_samples = 0;
    std::int64_t oc_seed = 1;
    double oc_tol = 1e-9;
    std::uint64_t oc_cap = 1ULL << 20;
    int oc_threads = 1;
    CLI::App *oracle = app.add_subcommand(
        "oracle-check", "Compare sampled conditional means with the closed-form table");
    oracle->add_option("--scene", oc_scene, "scene file")->required();
    oracle->add_option("--samples", oc_samples,
                       "random schedule length (0 = exhaustive schedule)");
    oracle->add_option("--seed", oc_seed, "master seed");
    oracle->add_option("--tol", oc_tol, "max allowed conditional-mean deviation");
    oracle->add_option("--cap", oc_cap, "exhaustive schedule size cap");
    oracle->add_option("--threads", oc_threads, "worker thread count");
    oracle->callback([&] {
        exit_code =
            cmd_oracle_check(oc_scene, oc_samples, oc_seed, oc_tol, oc_cap, oc_threads);
    });

    // dataset collect / inspect
    CLI::App *dataset = app.add_subcommand("dataset", "Dataset persistence utilities");
    dataset->require_subcommand(1);
    std::string dc_scene, dc_out = "dataset.csv", dc_format = "csv";
    std::size_t dc_samples = 1000;
    std::int64_t dc_seed = 1;
    int dc_threads = 1;
    CLI::App *collect =
        dataset->add_subcommand("collect", "Collect a randomized RSS dataset");
    collect->add_option("--scene", dc_scene, "scene file")->required();
    collect->add_option("--samples", dc_samples, "number of records T");
    collect->add_option("--seed", dc_seed, "master seed");
    collect->add_option("--out", dc_out, "output file");
    collect->add_option("--format", dc_format, "csv or binary")
        ->check(CLI::IsMember({"csv", "binary"}));
    collect->add_option("--threads", dc_threads, "worker thread count");
    collect->callback([&] {
        exit_code = cmd_dataset_collect(dc_scene, dc_samples, dc_seed, dc_out, dc_format,
                                        dc_threads);
    });
    std::string di_path;
    CLI::App *inspect =
        dataset->add_subcommand("inspect", "Print dataset metadata and RSS statistics");
    inspect->add_option("file", di_path, "dataset file")->required();
    inspect->callback([&] { exit_code = cmd_dataset_inspect(di_path); });

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        return app.exit(e);
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
