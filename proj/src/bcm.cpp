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

#include "mtsim/bcm.hpp"

#include <cstdio>
#include <stdexcept>
#include <thread>

#include "mtsim/phase_math.hpp"

namespace mtsim
{

namespace
{

// Fixed accumulation chunk size; chunk partials are merged in chunk order so
// floating-point sums are identical for every thread count.
constexpr std::size_t accum_chunk = 4096;

struct ChunkPartial
{
    std::vector<std::vector<double>> bin_sum; // [panel][atom*K + k]
    double rss_sum = 0.0;
};

} // namespace

GainTable build_gain_table(const RssDataset &dataset, int n_threads)
{
    const std::size_t count = dataset.size();
    if (count == 0)
        throw std::invalid_argument("build_gain_table: empty dataset");
    const std::size_t panels = dataset.panel_rows.size();

    GainTable table;
    table.sample_count = count;
    table.panel_rows = dataset.panel_rows;
    table.panel_cols = dataset.panel_cols;
    table.panel_levels = dataset.panel_levels;

    auto make_bins = [&]() {
        std::vector<std::vector<double>> bins(panels);
        for (std::size_t p = 0; p < panels; ++p)
            bins[p].assign(static_cast<std::size_t>(dataset.panel_rows[p]) *
                               dataset.panel_cols[p] * dataset.panel_levels[p],
                           0.0);
        return bins;
    };

    const std::size_t chunks = (count + accum_chunk - 1) / accum_chunk;
    std::vector<ChunkPartial> partials(chunks);

    auto accumulate_chunk = [&](std::size_t c) {
        ChunkPartial &part = partials[c];
        part.bin_sum = make_bins();
        const std::size_t begin = c * accum_chunk;
        const std::size_t end = std::min(count, begin + accum_chunk);
        for (std::size_t t = begin; t < end; ++t)
        {
            const double s = dataset.rss[t];
            part.rss_sum += s;
            const PhaseConfig &config = dataset.configs[t];
            for (std::size_t p = 0; p < panels; ++p)
            {
                const int levels = dataset.panel_levels[p];
                const auto &ks = config.k[p];
                auto &bins = part.bin_sum[p];
                for (std::size_t a = 0; a < ks.size(); ++a)
                    bins[a * levels + ks[a]] += s;
            }
        }
    };

    const int workers = std::max(1, n_threads);
    if (workers == 1 || chunks == 1)
    {
        for (std::size_t c = 0; c < chunks; ++c)
            accumulate_chunk(c);
    }
    else
    {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w]() {
                for (std::size_t c = static_cast<std::size_t>(w); c < chunks;
                     c += workers)
                    accumulate_chunk(c);
            });
        for (std::thread &th : pool)
            th.join();
    }

    // Counts do not depend on float order; tally them in one sequential pass.
    table.counts.resize(panels);
    for (std::size_t p = 0; p < panels; ++p)
        table.counts[p].assign(static_cast<std::size_t>(dataset.panel_rows[p]) *
                                   dataset.panel_cols[p] * dataset.panel_levels[p],
                               0);
    for (std::size_t t = 0; t < count; ++t)
        for (std::size_t p = 0; p < panels; ++p)
        {
            const int levels = dataset.panel_levels[p];
            const auto &ks = dataset.configs[t].k[p];
            for (std::size_t a = 0; a < ks.size(); ++a)
                ++table.counts[p][a * levels + ks[a]];
        }

    // Ordered merge of chunk partials.
    std::vector<std::vector<double>> sums = make_bins();
    double rss_total = 0.0;
    for (std::size_t c = 0; c < chunks; ++c)
    {
        rss_total += partials[c].rss_sum;
        for (std::size_t p = 0; p < panels; ++p)
        {
            const auto &src = partials[c].bin_sum[p];
            auto &dst = sums[p];
            for (std::size_t i = 0; i < dst.size(); ++i)
                dst[i] += src[i];
        }
    }

    table.global_mean = rss_total / static_cast<double>(count);
    table.cond_mean.resize(panels);
    table.j_hat.resize(panels);
    for (std::size_t p = 0; p < panels; ++p)
    {
        const int levels = dataset.panel_levels[p];
        const std::size_t atoms =
            static_cast<std::size_t>(dataset.panel_rows[p]) * dataset.panel_cols[p];
        table.cond_mean[p].resize(atoms * levels);
        table.j_hat[p].resize(atoms * levels);
        for (std::size_t a = 0; a < atoms; ++a)
            for (int k = 0; k < levels; ++k)
            {
                const std::size_t i = a * levels + k;
                if (table.counts[p][i] == 0)
                {
                    const int u = static_cast<int>(a) / dataset.panel_cols[p];
                    const int v = static_cast<int>(a) % dataset.panel_cols[p];
                    throw std::runtime_error(
                        "build_gain_table: empty bin at panel " + std::to_string(p) +
                        " atom (" + std::to_string(u) + "," + std::to_string(v) +
                        ") level " + std::to_string(k) +
                        "; increase T or lower K");
                }
                table.cond_mean[p][i] =
                    sums[p][i] / static_cast<double>(table.counts[p][i]);
                table.j_hat[p][i] = table.cond_mean[p][i] - table.global_mean;
            }
    }
    return table;
}

namespace
{

// Shared argmax for phase selection and delta recovery; ties break to the
// smallest index so both paths agree exactly.
int argmax_level(const std::vector<double> &cond_mean, std::size_t atom, int levels)
{
    int best = 0;
    double best_value = cond_mean[atom * levels];
    for (int k = 1; k < levels; ++k)
    {
        const double value = cond_mean[atom * levels + k];
        if (value > best_value)
        {
            best_value = value;
            best = k;
        }
    }
    return best;
}

} // namespace

PhaseConfig select_phases(const GainTable &table)
{
    PhaseConfig config;
    config.levels = table.panel_levels;
    config.k.resize(table.panel_count());
    for (std::size_t p = 0; p < table.panel_count(); ++p)
    {
        const int levels = table.panel_levels[p];
        const std::size_t atoms = table.cond_mean[p].size() / levels;
        config.k[p].resize(atoms);
        for (std::size_t a = 0; a < atoms; ++a)
            config.k[p][a] = argmax_level(table.cond_mean[p], a, levels);
    }
    return config;
}

BcmResult recover_delta(const GainTable &table)
{
    BcmResult result;
    result.theta_bcm = select_phases(table);
    result.k_star = result.theta_bcm.k;
    result.delta_star.resize(table.panel_count());
    for (std::size_t p = 0; p < table.panel_count(); ++p)
    {
        const double omega = two_pi / table.panel_levels[p];
        result.delta_star[p].resize(result.k_star[p].size());
        for (std::size_t a = 0; a < result.k_star[p].size(); ++a)
        {
            const int k = result.k_star[p][a];
            result.delta_star[p][a] = (k == 0) ? two_pi : k * omega;
        }
    }
    return result;
}

TrueGainParams true_gain_params(const ChannelEnsemble &ensemble)
{
    TrueGainParams params;
    params.scale = ensemble.tx_power;
    params.panel_levels = ensemble.panel_levels;
    const std::complex<double> direct_mean = ensemble.direct.mean();
    params.amplitude.resize(ensemble.panel_count());
    params.delta_true.resize(ensemble.panel_count());
    for (std::size_t p = 0; p < ensemble.panel_count(); ++p)
    {
        params.amplitude[p].resize(ensemble.atom_count(p));
        params.delta_true[p].resize(ensemble.atom_count(p));
        for (std::size_t a = 0; a < ensemble.atom_count(p); ++a)
        {
            const std::complex<double> reflected_mean = ensemble.reflected_mean(p, a);
            params.amplitude[p][a] = 2.0 * std::abs(direct_mean) * std::abs(reflected_mean);
            params.delta_true[p][a] =
                wrap_02pi(std::arg(direct_mean) - std::arg(reflected_mean));
        }
    }
    return params;
}

double exact_gain(const TrueGainParams &params, std::size_t panel, std::size_t atom,
                  int k)
{
    const double omega = two_pi / params.panel_levels[panel];
    return params.scale * params.amplitude[panel][atom] *
           std::cos(k * omega - params.delta_true[panel][atom]);
}

GainTable exact_conditional_table(const ChannelEnsemble &ensemble)
{
    const TrueGainParams params = true_gain_params(ensemble);
    GainTable table;
    table.sample_count = 0;
    table.global_mean = mean_rss_uniform(ensemble);
    table.panel_rows = ensemble.panel_rows;
    table.panel_cols = ensemble.panel_cols;
    table.panel_levels = ensemble.panel_levels;
    table.cond_mean.resize(ensemble.panel_count());
    table.j_hat.resize(ensemble.panel_count());
    table.counts.resize(ensemble.panel_count());
    for (std::size_t p = 0; p < ensemble.panel_count(); ++p)
    {
        const int levels = ensemble.panel_levels[p];
        const std::size_t atoms = ensemble.atom_count(p);
        table.cond_mean[p].resize(atoms * levels);
        table.j_hat[p].resize(atoms * levels);
        table.counts[p].assign(atoms * levels, 0);
        for (std::size_t a = 0; a < atoms; ++a)
            for (int k = 0; k < levels; ++k)
            {
                const double gain = exact_gain(params, p, a, k);
                table.j_hat[p][a * levels + k] = gain;
                table.cond_mean[p][a * levels + k] = table.global_mean + gain;
            }
    }
    return table;
}

void export_gain_table_csv(const GainTable &table, const std::string &path)
{
    std::FILE *f = std::fopen(path.c_str(), "w");
    if (!f)
        throw std::runtime_error("export_gain_table_csv: cannot open " + path);
    std::fprintf(f, "panel,u,v,k,count,cond_mean,j_hat\n");
    for (std::size_t p = 0; p < table.panel_count(); ++p)
    {
        const int levels = table.panel_levels[p];
        const int cols = table.panel_cols[p];
        const std::size_t atoms = table.cond_mean[p].size() / levels;
        for (std::size_t a = 0; a < atoms; ++a)
            for (int k = 0; k < levels; ++k)
            {
                const std::size_t i = a * levels + k;
                std::fprintf(f, "%zu,%d,%d,%d,%lld,%.17g,%.17g\n", p,
                             static_cast<int>(a) / cols, static_cast<int>(a) % cols, k,
                             static_cast<long long>(table.counts[p][i]),
                             table.cond_mean[p][i], table.j_hat[p][i]);
            }
    }
    std::fclose(f);
}

void export_bcm_result_csv(const BcmResult &result, const GainTable &table,
                           const std::string &path)
{
    std::FILE *f = std::fopen(path.c_str(), "w");
    if (!f)
        throw std::runtime_error("export_bcm_result_csv: cannot open " + path);
    std::fprintf(f, "panel,u,v,theta_index,delta_star\n");
    for (std::size_t p = 0; p < result.k_star.size(); ++p)
    {
        const int cols = table.panel_cols[p];
        for (std::size_t a = 0; a < result.k_star[p].size(); ++a)
            std::fprintf(f, "%zu,%d,%d,%d,%.17g\n", p, static_cast<int>(a) / cols,
                         static_cast<int>(a) % cols, result.k_star[p][a],
                         result.delta_star[p][a]);
    }
    std::fclose(f);
}

} // namespace mtsim
