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

#include "mtsim/sampling.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "mtsim/phase_math.hpp"
#include "mtsim/rng.hpp"

namespace mtsim
{

double PhaseConfig::phase(std::size_t panel, std::size_t atom) const
{
    return k[panel][atom] * (two_pi / levels[panel]);
}

bool PhaseConfig::dims_match(const ChannelEnsemble &ensemble) const
{
    if (k.size() != ensemble.panel_count() || levels.size() != k.size())
        return false;
    for (std::size_t p = 0; p < k.size(); ++p)
        if (k[p].size() != ensemble.atom_count(p) || levels[p] != ensemble.panel_levels[p])
            return false;
    return true;
}

PhaseConfig make_config(const SceneGeometry &scene)
{
    PhaseConfig c;
    for (const MtsPanel &panel : scene.panels)
    {
        c.k.emplace_back(panel.atom_count(), 0);
        c.levels.push_back(panel.phase_levels);
    }
    return c;
}

std::vector<PhaseConfig> random_schedule(const SceneGeometry &scene, std::size_t count,
                                         std::uint64_t master_seed)
{
    if (count < 1)
        throw std::invalid_argument("random_schedule: count must be >= 1");
    validate_scene(scene);
    std::mt19937_64 rng = derive_stream(master_seed, rng_tag_schedule);
    std::vector<PhaseConfig> schedule(count, make_config(scene));
    for (std::size_t t = 0; t < count; ++t)
        for (std::size_t p = 0; p < scene.panels.size(); ++p)
        {
            std::uniform_int_distribution<int> pick(0, scene.panels[p].phase_levels - 1);
            for (int &index : schedule[t].k[p])
                index = pick(rng);
        }
    return schedule;
}

std::vector<PhaseConfig> exhaustive_schedule(const SceneGeometry &scene,
                                             std::uint64_t cap)
{
    validate_scene(scene);
    // Total count = prod over atoms of K; detect overflow against the cap.
    std::uint64_t total = 1;
    for (const MtsPanel &panel : scene.panels)
        for (int a = 0; a < panel.atom_count(); ++a)
        {
            if (total > cap / static_cast<std::uint64_t>(panel.phase_levels))
                throw std::invalid_argument("exhaustive_schedule: config count exceeds cap");
            total *= static_cast<std::uint64_t>(panel.phase_levels);
        }

    std::vector<PhaseConfig> schedule;
    schedule.reserve(total);
    PhaseConfig current = make_config(scene);
    // Odometer enumeration; the last atom of the last panel varies fastest.
    while (true)
    {
        schedule.push_back(current);
        int carry = 1;
        for (std::size_t p = current.k.size(); carry && p-- > 0;)
            for (std::size_t a = current.k[p].size(); carry && a-- > 0;)
            {
                if (++current.k[p][a] < current.levels[p])
                    carry = 0;
                else
                    current.k[p][a] = 0;
            }
        if (carry)
            break;
    }
    if (schedule.size() != total)
        throw std::logic_error("exhaustive_schedule: enumeration mismatch");
    return schedule;
}

RssDataset collect_dataset(const ChannelEnsemble &ensemble,
                           const std::vector<PhaseConfig> &schedule,
                           double meas_noise_sigma, std::uint64_t master_seed,
                           const SceneGeometry &scene, int n_threads)
{
    if (schedule.empty())
        throw std::invalid_argument("collect_dataset: schedule must be non-empty");
    const std::size_t count = schedule.size();

    RssDataset ds;
    ds.configs = schedule;
    ds.rss.resize(count);
    ds.master_seed = master_seed;
    ds.scene_fingerprint = mtsim::scene_fingerprint(scene);
    ds.panel_rows = ensemble.panel_rows;
    ds.panel_cols = ensemble.panel_cols;
    ds.panel_levels = ensemble.panel_levels;

    // Record t is self-contained: its fading and noise streams derive from
    // (master_seed, t), so any partition across threads is bit-reproducible.
    auto measure_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t)
        {
            std::mt19937_64 fading = derive_stream(master_seed, rng_tag_fading, t);
            const ChannelRealization real = draw_realization(ensemble, fading);
            std::mt19937_64 noise = derive_stream(master_seed, rng_tag_noise, t);
            ds.rss[t] = measure_rss(real, schedule[t], ensemble.tx_power,
                                    meas_noise_sigma, noise);
        }
    };

    const int workers = std::max(1, n_threads);
    if (workers == 1 || count < 128)
    {
        measure_range(0, count);
    }
    else
    {
        std::vector<std::thread> pool;
        const std::size_t stride = (count + workers - 1) / workers;
        for (int w = 0; w < workers; ++w)
        {
            const std::size_t begin = w * stride;
            const std::size_t end = std::min(count, begin + stride);
            if (begin < end)
                pool.emplace_back(measure_range, begin, end);
        }
        for (std::thread &th : pool)
            th.join();
    }
    return ds;
}

namespace
{

void write_header_line(std::FILE *f, const RssDataset &ds)
{
    std::fprintf(f, "# mtsim-dataset v1\n");
    std::fprintf(f, "# T=%zu seed=%" PRIu64 " scene=%016" PRIx64 "\n", ds.size(),
                 ds.master_seed, ds.scene_fingerprint);
    std::fprintf(f, "# panels=%zu", ds.panel_rows.size());
    for (std::size_t p = 0; p < ds.panel_rows.size(); ++p)
        std::fprintf(f, " %dx%dx%d", ds.panel_rows[p], ds.panel_cols[p],
                     ds.panel_levels[p]);
    std::fprintf(f, "\n");
}

} // namespace

void save_dataset_csv(const RssDataset &dataset, const std::string &path)
{
    std::FILE *f = std::fopen(path.c_str(), "w");
    if (!f)
        throw std::runtime_error("save_dataset_csv: cannot open " + path);
    write_header_line(f, dataset);
    std::fprintf(f, "t");
    for (std::size_t p = 0; p < dataset.panel_rows.size(); ++p)
        for (int u = 0; u < dataset.panel_rows[p]; ++u)
            for (int v = 0; v < dataset.panel_cols[p]; ++v)
                std::fprintf(f, ",k_%zu_%d_%d", p, u, v);
    std::fprintf(f, ",rss\n");
    for (std::size_t t = 0; t < dataset.size(); ++t)
    {
        std::fprintf(f, "%zu", t);
        for (const auto &panel : dataset.configs[t].k)
            for (int index : panel)
                std::fprintf(f, ",%d", index);
        std::fprintf(f, ",%.17g\n", dataset.rss[t]);
    }
    std::fclose(f);
}

void save_dataset_binary(const RssDataset &dataset, const std::string &path)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("save_dataset_binary: cannot open " + path);
    const char magic[8] = {'M', 'T', 'S', 'D', 'S', '1', '\n', '\0'};
    f.write(magic, 8);
    auto put_u64 = [&f](std::uint64_t v) {
        f.write(reinterpret_cast<const char *>(&v), 8);
    };
    put_u64(dataset.size());
    put_u64(dataset.master_seed);
    put_u64(dataset.scene_fingerprint);
    put_u64(dataset.panel_rows.size());
    for (std::size_t p = 0; p < dataset.panel_rows.size(); ++p)
    {
        put_u64(static_cast<std::uint64_t>(dataset.panel_rows[p]));
        put_u64(static_cast<std::uint64_t>(dataset.panel_cols[p]));
        put_u64(static_cast<std::uint64_t>(dataset.panel_levels[p]));
    }
    for (std::size_t t = 0; t < dataset.size(); ++t)
    {
        for (const auto &panel : dataset.configs[t].k)
            for (int index : panel)
            {
                const std::uint16_t iv = static_cast<std::uint16_t>(index);
                f.write(reinterpret_cast<const char *>(&iv), 2);
            }
        const double s = dataset.rss[t];
        f.write(reinterpret_cast<const char *>(&s), 8);
    }
    if (!f)
        throw std::runtime_error("save_dataset_binary: write failed for " + path);
}

namespace
{

RssDataset load_dataset_binary(std::ifstream &f, const std::string &path)
{
    auto get_u64 = [&f]() {
        std::uint64_t v = 0;
        f.read(reinterpret_cast<char *>(&v), 8);
        return v;
    };
    RssDataset ds;
    const std::uint64_t count = get_u64();
    ds.master_seed = get_u64();
    ds.scene_fingerprint = get_u64();
    const std::uint64_t panels = get_u64();
    for (std::uint64_t p = 0; p < panels; ++p)
    {
        ds.panel_rows.push_back(static_cast<int>(get_u64()));
        ds.panel_cols.push_back(static_cast<int>(get_u64()));
        ds.panel_levels.push_back(static_cast<int>(get_u64()));
    }
    PhaseConfig proto;
    for (std::uint64_t p = 0; p < panels; ++p)
    {
        proto.k.emplace_back(static_cast<std::size_t>(ds.panel_rows[p]) *
                                 ds.panel_cols[p],
                             0);
        proto.levels.push_back(ds.panel_levels[p]);
    }
    ds.configs.assign(count, proto);
    ds.rss.resize(count);
    for (std::uint64_t t = 0; t < count; ++t)
    {
        for (auto &panel : ds.configs[t].k)
            for (int &index : panel)
            {
                std::uint16_t iv = 0;
                f.read(reinterpret_cast<char *>(&iv), 2);
                index = iv;
            }
        f.read(reinterpret_cast<char *>(&ds.rss[t]), 8);
    }
    if (!f)
        throw std::runtime_error("load_dataset: truncated binary file " + path);
    return ds;
}

RssDataset load_dataset_csv(std::ifstream &f, const std::string &path)
{
    RssDataset ds;
    std::string line;
    std::size_t count = 0;
    // Header comment lines.
    if (!std::getline(f, line) || line.rfind("# mtsim-dataset", 0) != 0)
        throw std::runtime_error("load_dataset: bad CSV header in " + path);
    if (!std::getline(f, line) ||
        std::sscanf(line.c_str(), "# T=%zu seed=%" SCNu64 " scene=%" SCNx64, &count,
                    &ds.master_seed, &ds.scene_fingerprint) != 3)
        throw std::runtime_error("load_dataset: bad metadata line in " + path);
    if (!std::getline(f, line) || line.rfind("# panels=", 0) != 0)
        throw std::runtime_error("load_dataset: bad panels line in " + path);
    {
        std::size_t panels = 0;
        int consumed = 0;
        const char *s = line.c_str();
        if (std::sscanf(s, "# panels=%zu%n", &panels, &consumed) != 1)
            throw std::runtime_error("load_dataset: bad panels line in " + path);
        s += consumed;
        for (std::size_t p = 0; p < panels; ++p)
        {
            int r = 0, c = 0, k = 0;
            if (std::sscanf(s, " %dx%dx%d%n", &r, &c, &k, &consumed) != 3)
                throw std::runtime_error("load_dataset: bad panel dims in " + path);
            s += consumed;
            ds.panel_rows.push_back(r);
            ds.panel_cols.push_back(c);
            ds.panel_levels.push_back(k);
        }
    }
    std::getline(f, line); // column header

    PhaseConfig proto;
    for (std::size_t p = 0; p < ds.panel_rows.size(); ++p)
    {
        proto.k.emplace_back(static_cast<std::size_t>(ds.panel_rows[p]) *
                                 ds.panel_cols[p],
                             0);
        proto.levels.push_back(ds.panel_levels[p]);
    }
    ds.configs.assign(count, proto);
    ds.rss.resize(count);
    for (std::size_t t = 0; t < count; ++t)
    {
        if (!std::getline(f, line))
            throw std::runtime_error("load_dataset: truncated CSV file " + path);
        const char *s = line.c_str();
        char *end = nullptr;
        std::strtoull(s, &end, 10); // row index, unused
        s = end;
        for (auto &panel : ds.configs[t].k)
            for (int &index : panel)
            {
                if (*s != ',')
                    throw std::runtime_error("load_dataset: malformed row in " + path);
                index = static_cast<int>(std::strtol(s + 1, &end, 10));
                s = end;
            }
        if (*s != ',')
            throw std::runtime_error("load_dataset: malformed row in " + path);
        ds.rss[t] = std::strtod(s + 1, &end);
    }
    return ds;
}

} // namespace

RssDataset load_dataset(const std::string &path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("load_dataset: cannot open " + path);
    char magic[8] = {};
    f.read(magic, 8);
    if (std::memcmp(magic, "MTSDS1\n", 7) == 0)
        return load_dataset_binary(f, path);
    f.clear();
    f.seekg(0);
    return load_dataset_csv(f, path);
}

} // namespace mtsim
