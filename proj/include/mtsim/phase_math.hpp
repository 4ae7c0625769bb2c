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

#ifndef MTSIM_PHASE_MATH_HPP
#define MTSIM_PHASE_MATH_HPP

#include <cmath>
#include <numbers>

namespace mtsim
{

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Reduce an angle to the principal interval (-pi, pi].
inline double wrap_pi(double x)
{
    double r = std::remainder(x, two_pi); // [-pi, pi], ties to even
    if (r <= -pi)
        r += two_pi;
    return r;
}

/// Reduce an angle to the interval (0, 2*pi]; multiples of 2*pi map to 2*pi.
inline double wrap_02pi(double x)
{
    double r = std::fmod(x, two_pi);
    if (r <= 0.0)
        r += two_pi;
    return r;
}

/// Degrees-to-radians conversion for file-boundary values.
inline double deg2rad(double deg) { return deg * pi / 180.0; }

/// Radians-to-degrees conversion for report-boundary values.
inline double rad2deg(double rad) { return rad * 180.0 / pi; }

/// dBm-to-linear power conversion (noise power normalized to 1).
inline double dbm_to_linear(double dbm) { return std::pow(10.0, dbm / 10.0); }

/// Linear ratio to decibels.
inline double to_db(double ratio) { return 10.0 * std::log10(ratio); }

} // namespace mtsim

#endif
