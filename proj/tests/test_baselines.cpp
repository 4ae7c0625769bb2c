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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include "mtsim/baselines.hpp"
#include "mtsim/bcm.hpp"
#include "mtsim/channel.hpp"
#include "mtsim/phase_math.hpp"
#include "mtsim/sampling.hpp"
#include "test_support.hpp"

using namespace mtsim;

namespace
{

bool configs_equal(const PhaseConfig &a, const PhaseConfig &b)
{
    return a.k == b.k && a.levels == b.levels;
}

} // namespace

TEST_CASE("zps returns the all-zero configuration with scene dimensions")
{
    const SceneGeometry scene = mtsim_test::frozen_oracle_scene();
    const PhaseConfig config = zps(scene);
    REQUIRE(config.k.size() == scene.panels.size());
    for (std::size_t p = 0; p < config.k.size(); ++p)
    {
        CHECK(config.levels[p] == scene.panels[p].phase_levels);
        CHECK(config.k[p].size() ==
              static_cast<std::size_t>(scene.panels[p].atom_count()));
        for (int k : config.k[p])
            CHECK(k == 0);
    }
}

TEST_CASE("beam scanning returns the schedule's measured argmax")
{
    const SceneGeometry scene = mtsim_test::tiny_two_panel_scene(2, 2, 4);
    const ChannelEnsemble ens =
        build_ensemble(scene, mtsim_test::fading_options(0.3, 8.0));
    const std::uint64_t seed = 2024;
    const std::size_t count = 400;
    const double sigma = 0.01;

    // Oracle: replay the identical schedule and measurement streams, then
    // scan for the first strict maximum.
    const std::vector<PhaseConfig> schedule = random_schedule(scene, count, seed);
    const RssDataset ds = collect_dataset(ens, schedule, sigma, seed, scene);
    std::size_t best = 0;
    for (std::size_t t = 1; t < ds.size(); ++t)
        if (ds.rss[t] > ds.rss[best])
            best = t;

    const PhaseConfig picked = beam_scanning(ens, scene, count, sigma, seed);
    CHECK(configs_equal(picked, schedule[best]));
}

TEST_CASE("beam scanning breaks exact ties toward the earliest sample")
{
    // Two 1x1 binary panels admit only four joint configurations, so a pure
    // LOS noiseless run of 64 samples is full of exact duplicates.
    const SceneGeometry scene = mtsim_test::tiny_two_panel_scene(1, 1, 2);
    const ChannelEnsemble ens =
        build_ensemble(scene, mtsim_test::pure_los_options(0.4));
    const std::uint64_t seed = 7;
    const std::size_t count = 64;

    const std::vector<PhaseConfig> schedule = random_schedule(scene, count, seed);
    const RssDataset ds = collect_dataset(ens, schedule, 0.0, seed, scene);
    std::size_t best = 0;
    for (std::size_t t = 1; t < ds.size(); ++t)
        if (ds.rss[t] > ds.rss[best])
            best = t;

    const PhaseConfig picked = beam_scanning(ens, scene, count, 0.0, seed);
    CHECK(configs_equal(picked, schedule[best]));

    // The winning value occurs more than once; the pick is the first.
    std::size_t occurrences = 0;
    for (double value : ds.rss)
        if (value == ds.rss[best])
            ++occurrences;
    CHECK(occurrences > 1);
}

TEST_CASE("beam scanning is bit-identical across thread counts")
{
    const SceneGeometry scene = mtsim_test::tiny_two_panel_scene(3, 2, 4);
    const ChannelEnsemble ens =
        build_ensemble(scene, mtsim_test::fading_options(0.2, 5.0, 1.0, 0.02));
    const PhaseConfig one = beam_scanning(ens, scene, 300, 0.02, 99, 1);
    const PhaseConfig four = beam_scanning(ens, scene, 300, 0.02, 99, 4);
    CHECK(configs_equal(one, four));
}

TEST_CASE("genie meets the aligned-sum lower bound and dominates random"
          " configurations")
{
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> gamma_draw(0.05, 0.6);
    std::uniform_real_distribution<double> rician_draw(0.5, 30.0);
    for (int trial = 0; trial < 20; ++trial)
    {
        const SceneGeometry scene = mtsim_test::tiny_two_panel_scene(2, 3, 4);
        const ChannelEnsemble ens = build_ensemble(
            scene,
            mtsim_test::fading_options(gamma_draw(rng), rician_draw(rng), 2.0));
        const PhaseConfig config = genie_closest_rotation(ens);
        const double achieved = expected_snr(ens, config);

        // Every rotated mean lies within half a level of the direct mean's
        // phase, so the coherent sum is at least the cos(omega/2)-discounted
        // stack of magnitudes.
        double stacked = std::abs(ens.direct.mean());
        for (std::size_t p = 0; p < ens.panel_count(); ++p)
        {
            const double discount =
                std::cos(pi / static_cast<double>(ens.panel_levels[p]));
            for (std::size_t a = 0; a < ens.atom_count(p); ++a)
                stacked += discount * std::abs(ens.reflected_mean(p, a));
        }
        CHECK(achieved >= ens.tx_power * stacked * stacked - 1e-12);

        for (const PhaseConfig &other : random_schedule(scene, 100, 1000 + trial))
            CHECK(achieved >= expected_snr(ens, other) - 1e-12);
        CHECK(achieved >= expected_snr(ens, zps(scene)) - 1e-12);
    }
}

TEST_CASE("genie agrees with the exact conditional-mean argmax in pure LOS")
{
    // With zero fading the conditional-mean gain table is exact, and both
    // methods maximize cos(k*omega - Delta) per atom with the same tie rule.
    const SceneGeometry scene = mtsim_test::frozen_oracle_scene();
    const ChannelEnsemble ens =
        build_ensemble(scene, mtsim_test::pure_los_options(0.3));
    const PhaseConfig genie = genie_closest_rotation(ens);
    const BcmResult bcm = recover_delta(exact_conditional_table(ens));
    CHECK(configs_equal(genie, bcm.theta_bcm));
}

TEST_CASE("genie rejects an ensemble whose direct mean vanishes")
{
    ChannelEnsemble ens;
    ens.direct.attenuation = 0.25;
    ens.direct.rician_factor = 0.0; // pure scatter: zero deterministic part
    ens.tx_to_atom = {{RicianLink{0.2, 10.0, 0.3}}};
    ens.atom_to_rx = {{RicianLink{0.2, 10.0, -0.1}}};
    ens.panel_rows = {1};
    ens.panel_cols = {1};
    ens.panel_levels = {2};
    CHECK_THROWS_AS(genie_closest_rotation(ens), std::domain_error);
}

TEST_CASE("beam scanning rejects an empty schedule")
{
    const SceneGeometry scene = mtsim_test::tiny_two_panel_scene(1, 1, 2);
    const ChannelEnsemble ens =
        build_ensemble(scene, mtsim_test::pure_los_options(0.4));
    CHECK_THROWS_AS(beam_scanning(ens, scene, 0, 0.0, 1), std::invalid_argument);
}
