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

#ifndef MTSIM_CHANNEL_HPP
#define MTSIM_CHANNEL_HPP

#include <complex>
#include <limits>
#include <random>
#include <vector>

#include "mtsim/geometry.hpp"

namespace mtsim
{

struct PhaseConfig; // sampling.hpp

/// One Rician-faded link: h = sqrt(gamma) * (sqrt(delta/(1+delta)) * h_bar
/// + sqrt(1/(1+delta)) * h_tilde), |h_bar| = 1, h_tilde ~ CN(0,1).
/// rician_factor = +infinity is the first-class pure-LOS mode (zero fading).
struct RicianLink
{
    double attenuation = 0.0;   // gamma, in (0,1)
    double rician_factor = 1.0; // delta, > 0 or +infinity
    double los_phase = 0.0;     // angle(h_bar), radians

    /// Deterministic-component weight sqrt(delta/(1+delta)); 1 in pure LOS.
    double los_weight() const
    {
        return std::isinf(rician_factor)
                   ? 1.0
                   : std::sqrt(rician_factor / (1.0 + rician_factor));
    }
    /// Fading-component weight sqrt(1/(1+delta)); 0 in pure LOS.
    double fading_weight() const
    {
        return std::isinf(rician_factor) ? 0.0
                                         : std::sqrt(1.0 / (1.0 + rician_factor));
    }
    /// E[h] = sqrt(gamma) * los_weight * exp(j*los_phase).
    std::complex<double> mean() const;
    /// Var[h] = gamma / (1 + delta); 0 in pure LOS.
    double variance() const
    {
        return std::isinf(rician_factor) ? 0.0
                                         : attenuation / (1.0 + rician_factor);
    }
};

/// Distance-to-attenuation map. "constant" ignores distance; "power_law" is
/// gamma(d) = min(coeff * (lambda/(4*pi*d))^exponent, gamma_max).
struct AttenuationModel
{
    enum class Kind
    {
        constant,
        power_law
    };
    Kind kind = Kind::constant;
    double gamma = 0.5;     // constant model value
    double coeff = 1.0;     // power-law c
    double exponent = 2.0;  // power-law beta
    double gamma_max = 0.999999; // power-law cap, < 1

    /// Evaluate gamma(d); throws std::invalid_argument outside (0,1).
    double operator()(double distance, double wavelength) const;
};

/// Rician factor per link class; +infinity means pure LOS.
struct RicianFactors
{
    double direct = std::numeric_limits<double>::infinity();
    double tx_to_panel = std::numeric_limits<double>::infinity();
    double panel_to_rx = std::numeric_limits<double>::infinity();
};

/// All Rician links of a scene plus transmit power (linear scale; background
/// noise power is normalized to 1). Immutable once built; shareable across
/// threads.
struct ChannelEnsemble
{
    RicianLink direct;
    std::vector<std::vector<RicianLink>> tx_to_atom; // [panel][atom]
    std::vector<std::vector<RicianLink>> atom_to_rx; // [panel][atom]
    double tx_power = 1.0;
    std::vector<int> panel_rows, panel_cols, panel_levels; // scene dims

    std::size_t panel_count() const { return tx_to_atom.size(); }
    std::size_t atom_count(std::size_t p) const { return tx_to_atom[p].size(); }
    std::size_t total_atoms() const;
    /// Mean of the composed reflected channel: E[h_tx_atom] * E[h_atom_rx].
    std::complex<double> reflected_mean(std::size_t p, std::size_t a) const;
    /// Var of the composed channel: E|X|^2 E|Y|^2 - |E[X]E[Y]|^2 (independence).
    double reflected_variance(std::size_t p, std::size_t a) const;
};

/// One fading draw: composed complex amplitudes for the direct link and all
/// reflected paths.
struct ChannelRealization
{
    std::complex<double> direct;
    std::vector<std::vector<std::complex<double>>> reflected; // [panel][atom]
};

/// Options controlling ensemble construction beyond the attenuation model.
struct ChannelOptions
{
    AttenuationModel attenuation;
    RicianFactors rician;
    double tx_power = 1.0;         // linear
    double blockage_factor = 1.0;  // multiplies the direct-link gamma (NLOS < 1)
    double meas_noise_sigma = 0.0; // RSS measurement noise std deviation
};

/// Builds every link of the scene: LOS phases from geometry, gamma from the
/// attenuation model (direct gamma additionally scaled by blockage_factor),
/// Rician factor per link class. Throws std::invalid_argument if any gamma
/// leaves (0,1).
ChannelEnsemble build_ensemble(const SceneGeometry &scene,
                               const ChannelOptions &options);

/// Draws fresh fading for every link and composes reflected channels.
/// Pure LOS returns the deterministic product without consuming randomness
/// beyond the per-link draws (weights zero the fading term).
ChannelRealization draw_realization(const ChannelEnsemble &ensemble,
                                    std::mt19937_64 &rng);

/// tx_power * |h_direct + sum over atoms of h_reflected * exp(j*theta)|^2.
double instantaneous_power(const ChannelRealization &realization,
                           const PhaseConfig &config, double tx_power);

/// Closed-form E[SNR] over fading:
/// tx_power * (|E[h_d] + sum E[h_n] e^{j theta_n}|^2 + Var[h_d] + sum Var[h_n]).
double expected_snr(const ChannelEnsemble &ensemble, const PhaseConfig &config);

/// Analytic mean RSS under per-atom uniform random phases (K >= 2):
/// tx_power * (E|h_d|^2 + sum E|h_n|^2); cross terms vanish since E[e^{j theta}] = 0.
double mean_rss_uniform(const ChannelEnsemble &ensemble);

/// One RSS measurement: instantaneous power plus zero-mean Gaussian noise of
/// std meas_noise_sigma, clamped at 0. sigma = 0 reproduces the power exactly.
double measure_rss(const ChannelRealization &realization, const PhaseConfig &config,
                   double tx_power, double meas_noise_sigma, std::mt19937_64 &rng);

} // namespace mtsim

#endif
