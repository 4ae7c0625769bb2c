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

#include "mtsim/channel.hpp"
#include "mtsim/phase_math.hpp"
#include "mtsim/rng.hpp"
#include "mtsim/sampling.hpp"
#include "test_support.hpp"

using namespace mtsim;

TEST_CASE("Rician link moments: hand arithmetic")
{
    RicianLink link{0.5, 1.0, 0.7};
    CHECK(link.los_weight() == doctest::Approx(std::sqrt(0.5)));
    CHECK(link.fading_weight() == doctest::Approx(std::sqrt(0.5)));
    CHECK(std::abs(link.mean()) == doctest::Approx(0.5)); // sqrt(0.5)*sqrt(0.5)
    CHECK(std::arg(link.mean()) == doctest::Approx(0.7));
    CHECK(link.variance() == doctest::Approx(0.25));

    RicianLink pure{0.36, std::numeric_limits<double>::infinity(), -1.2};
    CHECK(pure.los_weight() == doctest::Approx(1.0));
    CHECK(pure.fading_weight() == doctest::Approx(0.0));
    CHECK(std::abs(pure.mean()) == doctest::Approx(0.6));
    CHECK(pure.variance() == doctest::Approx(0.0));
}

TEST_CASE("attenuation models: values, cap, and range errors")
{
    AttenuationModel constant;
    constant.kind = AttenuationModel::Kind::constant;
    constant.gamma = 0.37;
    CHECK(constant(123.0, 0.125) == doctest::Approx(0.37));

    AttenuationModel free_space;
    free_space.kind = AttenuationModel::Kind::power_law;
    free_space.coeff = 1.0;
    free_space.exponent = 2.0;
    // gamma(d) = (lambda / (4*pi*d))^2
    const double lambda = 0.125, d = 2.0;
    const double expect = std::pow(lambda / (4.0 * pi * d), 2.0);
    CHECK(free_space(d, lambda) == doctest::Approx(expect).epsilon(1e-14));

    free_space.gamma_max = 1e-6;
    CHECK(free_space(d, lambda) == doctest::Approx(1e-6));

    CHECK_THROWS_AS(free_space(0.0, lambda), std::invalid_argument);
    constant.gamma = 1.5;
    CHECK_THROWS_AS(constant(1.0, lambda), std::invalid_argument);
    constant.gamma = 0.0;
    CHECK_THROWS_AS(constant(1.0, lambda), std::invalid_argument);
}

TEST_CASE("build_ensemble wires geometry phases and panel dimensions")
{
    const SceneGeometry scene = mtsim_test::tiny_two_panel_scene(2, 3, 4);
    const ChannelEnsemble ens = build_ensemble(scene, mtsim_test::pure_los_options());
    REQUIRE(ens.panel_count() == 2);
    CHECK(ens.atom_count(0) == 6);
    CHECK(ens.panel_rows[0] == 2);
    CHECK(ens.panel_cols[0] == 3);
    CHECK(ens.panel_levels[0] == 4);

    const LosPhaseTable phases = los_phases(scene, 1);
    CHECK(ens.direct.los_phase == doctest::Approx(phases.direct));
    for (std::size_t a = 0; a < 6; ++a)
    {
        CHECK(ens.tx_to_atom[1][a].los_phase == doctest::Approx(phases.tx_to_atom[a]));
        CHECK(ens.atom_to_rx[1][a].los_phase == doctest::Approx(phases.atom_to_rx[a]));
    }
}

TEST_CASE("Monte Carlo link moments match closed forms within 4 sigma")
{
    SceneGeometry scene = mtsim_test::tiny_two_panel_scene();
    scene.panels.resize(1);
    const ChannelEnsemble ens = build_ensemble(scene, mtsim_test::fading_options(0.3, 2.0));

    const std::size_t trials = 200000;
    std::mt19937_64 rng = derive_stream(42, rng_tag_fading, 0);
    std::complex<double> sum_d = 0.0, sum_r = 0.0;
    double sum_d2 = 0.0, sum_r2 = 0.0;
    for (std::size_t i = 0; i < trials; ++i)
    {
        const ChannelRealization real = draw_realization(ens, rng);
        sum_d += real.direct;
        sum_d2 += std::norm(real.direct);
        sum_r += real.reflected[0][0];
        sum_r2 += std::norm(real.reflected[0][0]);
    }
    const double inv = 1.0 / static_cast<double>(trials);

    // E[h_d], E|h_d|^2 = gamma; each complex component has std <= sqrt(gamma/2).
    const std::complex<double> mean_d = ens.direct.mean();
    const double se = std::sqrt(0.5 * 0.3) / std::sqrt(double(trials));
    CHECK(std::abs(sum_d * inv - mean_d) < 4.0 * se * std::sqrt(2.0));
    CHECK(sum_d2 * inv == doctest::Approx(0.3).epsilon(0.02));

    // Composed reflected: E[XY] = E[X]E[Y]; E|XY|^2 = gamma_t * gamma_r.
    const std::complex<double> mean_r = ens.reflected_mean(0, 0);
    const double var_r = ens.reflected_variance(0, 0);
    const double se_r = std::sqrt(var_r / double(trials));
    CHECK(std::abs(sum_r * inv - mean_r) < 4.0 * se_r * std::sqrt(2.0) + 1e-12);
    CHECK(sum_r2 * inv == doctest::Approx(0.3 * 0.3).epsilon(0.03));
}

TEST_CASE("expected_snr: pure LOS aligned hand case")
{
    // Two unit-coupling atoms rotated into alignment with the direct path:
    // amplitude (sqrt(gd) + 2*sqrt(gt*gr)), all phases zero.
    ChannelEnsemble ens;
    ens.tx_power = 2.0;
    const double inf = std::numeric_limits<double>::infinity();
    ens.direct = {0.25, inf, 0.0};
    ens.tx_to_atom = {{{0.5, inf, 0.3}, {0.5, inf, -1.1}}};
    ens.atom_to_rx = {{{0.5, inf, -0.3}, {0.5, inf, 1.1}}};
    ens.panel_rows = {1};
    ens.panel_cols = {2};
    ens.panel_levels = {4};

    PhaseConfig config;
    config.k = {{0, 0}};
    config.levels = {4};
    const double amp = 0.5 + 2.0 * 0.5;
    CHECK(expected_snr(ens, config) == doctest::Approx(2.0 * amp * amp).epsilon(1e-12));
}

TEST_CASE("expected_snr is invariant to a global phase rotation")
{
    const SceneGeometry scene = mtsim_test::tiny_two_panel_scene(2, 2, 4);
    ChannelEnsemble ens = build_ensemble(scene, mtsim_test::fading_options(0.35, 5.0));
    PhaseConfig config = make_config(scene);
    config.k[0] = {1, 2, 3, 0};
    config.k[1] = {2, 0, 1, 3};
    const double before = expected_snr(ens, config);

    const double shift = 1.234;
    ens.direct.los_phase = wrap_pi(ens.direct.los_phase + shift);
    for (auto &panel : ens.tx_to_atom)
        for (auto &link : panel)
            link.los_phase = wrap_pi(link.los_phase + shift);
    CHECK(expected_snr(ens, config) == doctest::Approx(before).epsilon(1e-12));
}

TEST_CASE("Monte Carlo mean RSS matches expected_snr within 4 standard errors")
{
    const SceneGeometry scene = mtsim_test::tiny_two_panel_scene(2, 2, 4);
    const ChannelOptions options = mtsim_test::fading_options(0.3, 4.0, 1.5, 0.05);
    const ChannelEnsemble ens = build_ensemble(scene, options);

    std::mt19937_64 cfg_rng(7);
    std::uniform_int_distribution<int> pick(0, 3);
    for (int trial = 0; trial < 3; ++trial)
    {
        PhaseConfig config = make_config(scene);
        for (auto &panel : config.k)
            for (int &k : panel)
                k = pick(cfg_rng);
        const double closed = expected_snr(ens, config);

        const std::size_t trials = 100000;
        std::mt19937_64 rng = derive_stream(100 + trial, rng_tag_fading, 0);
        double sum = 0.0, sum_sq = 0.0;
        for (std::size_t i = 0; i < trials; ++i)
        {
            const ChannelRealization real = draw_realization(ens, rng);
            const double s = measure_rss(real, config, ens.tx_power,
                                         options.meas_noise_sigma, rng);
            sum += s;
            sum_sq += s * s;
        }
        const double mean = sum / trials;
        const double var = sum_sq / trials - mean * mean;
        const double se = std::sqrt(var / trials);
        CHECK(std::abs(mean - closed) < 4.0 * se);
    }
}

TEST_CASE("mean_rss_uniform equals the analytic power sum and the MC mean")
{
    const SceneGeometry scene = mtsim_test::tiny_two_panel_scene(1, 2, 4);
    const ChannelOptions options = mtsim_test::fading_options(0.3, 3.0, 2.0);
    const ChannelEnsemble ens = build_ensemble(scene, options);

    // Analytic: P * (gamma_d + sum gamma_t * gamma_r) with 4 atoms.
    CHECK(mean_rss_uniform(ens) ==
          doctest::Approx(2.0 * (0.3 + 4.0 * 0.3 * 0.3)).epsilon(1e-12));

    const std::size_t trials = 200000;
    std::mt19937_64 rng = derive_stream(5, rng_tag_fading, 1);
    std::uniform_int_distribution<int> pick(0, 3);
    double sum = 0.0, sum_sq = 0.0;
    PhaseConfig config = make_config(scene);
    for (std::size_t i = 0; i < trials; ++i)
    {
        for (auto &panel : config.k)
            for (int &k : panel)
                k = pick(rng);
        const ChannelRealization real = draw_realization(ens, rng);
        const double s = instantaneous_power(real, config, ens.tx_power);
        sum += s;
        sum_sq += s * s;
    }
    const double mean = sum / trials;
    const double se = std::sqrt((sum_sq / trials - mean * mean) / trials);
    CHECK(std::abs(mean - mean_rss_uniform(ens)) < 4.0 * se);
}

TEST_CASE("measure_rss: zero sigma reproduces the power, noise clamps at zero")
{
    const SceneGeometry scene = mtsim_test::tiny_two_panel_scene();
    const ChannelEnsemble ens = build_ensemble(scene, mtsim_test::pure_los_options());
    const PhaseConfig config = make_config(scene);
    std::mt19937_64 rng(3);
    const ChannelRealization real = draw_realization(ens, rng);
    const double power = instantaneous_power(real, config, ens.tx_power);
    CHECK(measure_rss(real, config, ens.tx_power, 0.0, rng) == power);

    // Noise far larger than the signal: clamps must keep RSS non-negative.
    for (int i = 0; i < 2000; ++i)
        CHECK(measure_rss(real, config, ens.tx_power, 1e3 * power + 1.0, rng) >= 0.0);
    CHECK_THROWS_AS(measure_rss(real, config, ens.tx_power, -0.1, rng),
                    std::invalid_argument);
}

TEST_CASE("pure LOS draws are deterministic and fading preserves link power")
{
    const SceneGeometry scene = mtsim_test::tiny_two_panel_scene();
    const ChannelEnsemble pure = build_ensemble(scene, mtsim_test::pure_los_options());
    std::mt19937_64 r1(1), r2(99);
    const ChannelRealization a = draw_realization(pure, r1);
    const ChannelRealization b = draw_realization(pure, r2);
    CHECK(std::abs(a.direct - b.direct) == doctest::Approx(0.0));
    CHECK(std::abs(a.reflected[0][0] - b.reflected[0][0]) == doctest::Approx(0.0));
    CHECK(std::abs(a.direct) == doctest::Approx(std::sqrt(0.4)));
}
