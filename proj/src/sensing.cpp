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

#include "mtsim/sensing.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "mtsim/phase_math.hpp"

namespace mtsim
{

namespace
{

constexpr double denominator_floor = 1e-9;

// Wrap an adjacent-pair delta difference to (-pi, pi], counting wraps.
double wrapped_diff(double next, double prev, int &wrap_count)
{
    const double raw = next - prev;
    const double wrapped = wrap_pi(raw);
    if (std::abs(raw - wrapped) > 1e-12)
        ++wrap_count;
    return wrapped;
}

double clamped_asin(double argument, int &clamp_count)
{
    if (argument < -1.0 || argument > 1.0)
    {
        ++clamp_count;
        argument = std::clamp(argument, -1.0, 1.0);
    }
    return std::asin(argument);
}

} // namespace

AngleEstimate estimate_elevation(const std::vector<double> &delta,
                                 const MtsPanel &panel, double known_phi_lr,
                                 double xi)
{
    if (panel.n_row < 2)
        throw std::invalid_argument("estimate_elevation: panel needs n_row >= 2");
    if (delta.size() != static_cast<std::size_t>(panel.atom_count()))
        throw std::invalid_argument("estimate_elevation: delta table size mismatch");

    AngleEstimate out;
    const double sin_phi_lr = std::sin(known_phi_lr);
    const double step = xi * panel.spacing;
    double sum = 0.0;
    for (int u = 0; u + 1 < panel.n_row; ++u)
        for (int v = 0; v < panel.n_col; ++v)
        {
            const std::size_t i = static_cast<std::size_t>(u) * panel.n_col + v;
            const std::size_t j = i + panel.n_col;
            const double diff = wrapped_diff(delta[j], delta[i], out.wrap_count);
            sum += clamped_asin(sin_phi_lr - diff / step, out.clamp_count);
        }
    out.value = sum / (static_cast<double>(panel.n_row - 1) * panel.n_col);
    return out;
}

AngleEstimate estimate_azimuth(const std::vector<double> &delta,
                               const MtsPanel &panel, double known_psi_lr,
                               double known_phi_lr, double phi_hat, double xi)
{
    if (panel.n_col < 2)
        throw std::invalid_argument("estimate_azimuth: panel needs n_col >= 2");
    if (delta.size() != static_cast<std::size_t>(panel.atom_count()))
        throw std::invalid_argument("estimate_azimuth: delta table size mismatch");
    const double cos_phi_hat = std::cos(phi_hat);
    if (cos_phi_hat < denominator_floor)
        throw std::domain_error("estimate_azimuth: elevation too close to the pole");

    AngleEstimate out;
    const double step = xi * panel.spacing;
    const double rx_term = std::sin(known_psi_lr) * std::cos(known_phi_lr) / cos_phi_hat;
    double sum = 0.0;
    for (int u = 0; u < panel.n_row; ++u)
        for (int v = 0; v + 1 < panel.n_col; ++v)
        {
            const std::size_t i = static_cast<std::size_t>(u) * panel.n_col + v;
            const double diff = wrapped_diff(delta[i + 1], delta[i], out.wrap_count);
            sum += clamped_asin(diff / (step * cos_phi_hat) + rx_term, out.clamp_count);
        }
    out.value = sum / (static_cast<double>(panel.n_col - 1) * panel.n_row);
    return out;
}

void triangulate(double psi_hat_1, const MtsPanel &panel_1, double psi_hat_2,
                 const MtsPanel &panel_2, double &out_x, double &out_y)
{
    // Horizontal bearing of the target from panel l is psi_hat_l + alpha_l.
    const double bearing_1 = psi_hat_1 + panel_1.boresight_azimuth;
    const double bearing_2 = psi_hat_2 + panel_2.boresight_azimuth;
    if (std::abs(std::cos(bearing_1)) < denominator_floor ||
        std::abs(std::cos(bearing_2)) < denominator_floor)
        throw std::domain_error("triangulate: bearing tangent singular");

    const double t1 = std::tan(bearing_1);
    const double t2 = -std::tan(bearing_2);
    const double den = t1 + t2;
    if (std::abs(den) < denominator_floor)
        throw std::domain_error("triangulate: near-parallel bearing lines");

    const double zx1 = panel_1.center.x, zy1 = panel_1.center.y;
    const double zx2 = panel_2.center.x, zy2 = panel_2.center.y;
    out_x = (t1 * zx1 + t2 * zx2 + zy2 - zy1) / den;
    out_y = -t1 * (zx1 - out_x) + zy1;
}

SensingEstimate localize(const BcmResult &bcm, const SceneGeometry &scene)
{
    if (scene.panels.size() < 2)
        throw std::invalid_argument("localize: needs at least two panels");
    for (const MtsPanel &panel : scene.panels)
        if (panel.n_row < 2 || panel.n_col < 2)
            throw std::invalid_argument("localize: every panel needs n_row, n_col >= 2");
    if (bcm.delta_star.size() != scene.panels.size())
        throw std::invalid_argument("localize: result/scene panel count mismatch");

    SensingEstimate est;
    const double xi = scene.xi();
    for (std::size_t p = 0; p < scene.panels.size(); ++p)
    {
        const MtsPanel &panel = scene.panels[p];
        const LinkAngles rx = link_angles(scene, p, LinkEndpoint::rx);
        const AngleEstimate phi =
            estimate_elevation(bcm.delta_star[p], panel, rx.elevation, xi);
        const AngleEstimate psi = estimate_azimuth(bcm.delta_star[p], panel, rx.azimuth,
                                                   rx.elevation, phi.value, xi);
        est.phi_hat.push_back(phi.value);
        est.psi_hat.push_back(psi.value);
        est.clamp_count += phi.clamp_count + psi.clamp_count;
        est.wrap_count += phi.wrap_count + psi.wrap_count;
    }

    // Position per panel pair, averaged (a single pair when L = 2).
    double x_sum = 0.0, y_sum = 0.0;
    int pairs = 0;
    for (std::size_t i = 0; i < scene.panels.size(); ++i)
        for (std::size_t j = i + 1; j < scene.panels.size(); ++j)
        {
            double x = 0.0, y = 0.0;
            triangulate(est.psi_hat[i], scene.panels[i], est.psi_hat[j],
                        scene.panels[j], x, y);
            x_sum += x;
            y_sum += y;
            ++pairs;
        }
    est.position_x = x_sum / pairs;
    est.position_y = y_sum / pairs;

    const double ex = est.position_x - scene.tx.x;
    const double ey = est.position_y - scene.tx.y;
    est.squared_error = ex * ex + ey * ey;
    return est;
}

bool aliasing_risk(const SceneGeometry &scene, std::size_t panel_index)
{
    const MtsPanel &panel = scene.panels[panel_index];
    const LinkAngles at = link_angles(scene, panel_index, LinkEndpoint::tx);
    const LinkAngles ar = link_angles(scene, panel_index, LinkEndpoint::rx);
    const double step = std::abs(scene.xi()) * panel.spacing;
    const double row_diff =
        step * std::abs(std::sin(ar.elevation) - std::sin(at.elevation));
    const double col_diff =
        step * std::abs(std::sin(at.azimuth) * std::cos(at.elevation) -
                        std::sin(ar.azimuth) * std::cos(ar.elevation));
    return row_diff > pi || col_diff > pi;
}

std::string sensing_estimate_json(const SensingEstimate &estimate)
{
    std::ostringstream os;
    os.precision(17);
    os << "{\n  \"phi_hat_deg\": [";
    for (std::size_t i = 0; i < estimate.phi_hat.size(); ++i)
        os << (i ? ", " : "") << rad2deg(estimate.phi_hat[i]);
    os << "],\n  \"psi_hat_deg\": [";
    for (std::size_t i = 0; i < estimate.psi_hat.size(); ++i)
        os << (i ? ", " : "") << rad2deg(estimate.psi_hat[i]);
    os << "],\n  \"position_m\": [" << estimate.position_x << ", "
       << estimate.position_y << "],\n";
    if (estimate.squared_error)
        os << "  \"squared_error_m2\": " << *estimate.squared_error << ",\n";
    os << "  \"clamp_count\": " << estimate.clamp_count
       << ",\n  \"wrap_count\": " << estimate.wrap_count << "\n}\n";
    return os.str();
}

} // namespace mtsim
