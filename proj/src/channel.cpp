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

#include "mtsim/channel.hpp"

#include <stdexcept>

#include "mtsim/phase_math.hpp"
#include "mtsim/rng.hpp"
#include "mtsim/sampling.hpp"

namespace mtsim
{

std::complex<double> RicianLink::mean() const
{
    const double amp = std::sqrt(attenuation) * los_weight();
    return std::polar(amp, los_phase);
}

double AttenuationModel::operator()(double distance, double wavelength) const
{
    double g;
    if (kind == Kind::constant)
    {
        g = gamma;
    }
    else
    {
        if (!(distance > 0.0))
            throw std::invalid_argument("attenuation: distance must be positive");
        g = coeff * std::pow(wavelength / (2.0 * two_pi * distance), exponent);
        g = std::min(g, gamma_max);
    }
    if (!(g > 0.0) || g >= 1.0)
        throw std::invalid_argument("attenuation: gamma must lie in (0,1), got " +
                                    std::to_string(g));
    return g;
}

std::size_t ChannelEnsemble::total_atoms() const
{
    std::size_t n = 0;
    for (const auto &panel : tx_to_atom)
        n += panel.size();
    return n;
}

std::complex<double> ChannelEnsemble::reflected_mean(std::size_t p, std::size_t a) const
{
    return tx_to_atom[p][a].mean() * atom_to_rx[p][a].mean();
}

double ChannelEnsemble::reflected_variance(std::size_t p, std::size_t a) const
{
    // E|XY|^2 = gamma_x * gamma_y for independent links with E|h|^2 = gamma.
    const double second = tx_to_atom[p][a].attenuation * atom_to_rx[p][a].attenuation;
    const double mean_sq = std::norm(reflected_mean(p, a));
    return second - mean_sq;
}

ChannelEnsemble build_ensemble(const SceneGeometry &scene, const ChannelOptions &options)
{
    validate_scene(scene);
    ChannelEnsemble ens;
    ens.tx_power = options.tx_power;
    if (!(ens.tx_power > 0.0))
        throw std::invalid_argument("channel: tx_power must be positive");

    const double lambda = scene.wavelength;
    const double d_tr = (scene.tx - scene.rx).norm();

    ens.direct.attenuation = options.attenuation(d_tr, lambda) * options.blockage_factor;
    if (!(ens.direct.attenuation > 0.0) || ens.direct.attenuation >= 1.0)
        throw std::invalid_argument("channel: blocked direct gamma left (0,1)");
    ens.direct.rician_factor = options.rician.direct;

    ens.tx_to_atom.resize(scene.panels.size());
    ens.atom_to_rx.resize(scene.panels.size());
    for (std::size_t p = 0; p < scene.panels.size(); ++p)
    {
        const MtsPanel &panel = scene.panels[p];
        const LosPhaseTable phases = los_phases(scene, p);
        ens.direct.los_phase = phases.direct; // same value for every panel
        const double d_t = link_angles(scene, p, LinkEndpoint::tx).distance;
        const double d_r = link_angles(scene, p, LinkEndpoint::rx).distance;
        const double gamma_t = options.attenuation(d_t, lambda);
        const double gamma_r = options.attenuation(d_r, lambda);

        ens.tx_to_atom[p].resize(panel.atom_count());
        ens.atom_to_rx[p].resize(panel.atom_count());
        for (int a = 0; a < panel.atom_count(); ++a)
        {
            ens.tx_to_atom[p][a] = {gamma_t, options.rician.tx_to_panel,
                                    phases.tx_to_atom[a]};
            ens.atom_to_rx[p][a] = {gamma_r, options.rician.panel_to_rx,
                                    phases.atom_to_rx[a]};
        }
        ens.panel_rows.push_back(panel.n_row);
        ens.panel_cols.push_back(panel.n_col);
        ens.panel_levels.push_back(panel.phase_levels);
    }
    if (scene.panels.empty())
        ens.direct.los_phase = wrap_pi(scene.xi() * d_tr);
    return ens;
}

namespace
{
std::complex<double> draw_link(const RicianLink &link, std::mt19937_64 &rng)
{
    // Pure LOS keeps the draw for stream alignment but zeroes its weight.
    const std::complex<double> fading = complex_gaussian(rng);
    const std::complex<double> los = std::polar(1.0, link.los_phase);
    return std::sqrt(link.attenuation) *
           (link.los_weight() * los + link.fading_weight() * fading);
}
} // namespace

ChannelRealization draw_realization(const ChannelEnsemble &ensemble,
                                    std::mt19937_64 &rng)
{
    ChannelRealization real;
    real.direct = draw_link(ensemble.direct, rng);
    real.reflected.resize(ensemble.panel_count());
    for (std::size_t p = 0; p < ensemble.panel_count(); ++p)
    {
        real.reflected[p].resize(ensemble.atom_count(p));
        for (std::size_t a = 0; a < ensemble.atom_count(p); ++a)
        {
            const std::complex<double> h_t = draw_link(ensemble.tx_to_atom[p][a], rng);
            const std::complex<double> h_r = draw_link(ensemble.atom_to_rx[p][a], rng);
            real.reflected[p][a] = h_t * h_r;
        }
    }
    return real;
}

double instantaneous_power(const ChannelRealization &realization,
                           const PhaseConfig &config, double tx_power)
{
    if (config.k.size() != realization.reflected.size())
        throw std::invalid_argument("instantaneous_power: panel count mismatch");
    std::complex<double> sum = realization.direct;
    for (std::size_t p = 0; p < realization.reflected.size(); ++p)
    {
        const auto &atoms = realization.reflected[p];
        const auto &ks = config.k[p];
        if (ks.size() != atoms.size())
            throw std::invalid_argument("instantaneous_power: atom count mismatch");
        // omega is per panel; infer K from the config owner via ensemble dims is
        // not available here, so the caller guarantees indices match the panel.
        for (std::size_t a = 0; a < atoms.size(); ++a)
            sum += atoms[a] * std::polar(1.0, config.phase(p, a));
    }
    return tx_power * std::norm(sum);
}

double expected_snr(const ChannelEnsemble &ensemble, const PhaseConfig &config)
{
    if (!config.dims_match(ensemble))
        throw std::invalid_argument("expected_snr: config dimensions mismatch");
    std::complex<double> coherent = ensemble.direct.mean();
    double variance = ensemble.direct.variance();
    for (std::size_t p = 0; p < ensemble.panel_count(); ++p)
    {
        for (std::size_t a = 0; a < ensemble.atom_count(p); ++a)
        {
            coherent += ensemble.reflected_mean(p, a) *
                        std::polar(1.0, config.phase(p, a));
            variance += ensemble.reflected_variance(p, a);
        }
    }
    return ensemble.tx_power * (std::norm(coherent) + variance);
}

double mean_rss_uniform(const ChannelEnsemble &ensemble)
{
    // E|h_d|^2 + sum E|h_n|^2; uniform phases kill every cross term.
    double acc = ensemble.direct.attenuation;
    for (std::size_t p = 0; p < ensemble.panel_count(); ++p)
        for (std::size_t a = 0; a < ensemble.atom_count(p); ++a)
            acc += ensemble.tx_to_atom[p][a].attenuation *
                   ensemble.atom_to_rx[p][a].attenuation;
    return ensemble.tx_power * acc;
}

double measure_rss(const ChannelRealization &realization, const PhaseConfig &config,
                   double tx_power, double meas_noise_sigma, std::mt19937_64 &rng)
{
    if (meas_noise_sigma < 0.0)
        throw std::invalid_argument("measure_rss: sigma must be >= 0");
    double s = instantaneous_power(realization, config, tx_power);
    if (meas_noise_sigma > 0.0)
    {
        std::normal_distribution<double> noise(0.0, meas_noise_sigma);
        s += noise(rng);
    }
    return s < 0.0 ? 0.0 : s;
}

} // namespace mtsim
