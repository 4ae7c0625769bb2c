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

#ifndef MTSIM_RNG_HPP
#define MTSIM_RNG_HPP

#include <complex>
#include <cstdint>
#include <random>

namespace mtsim
{

/// splitmix64 finalizer; decorrelates seed-derived sub-stream identifiers.
inline std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derive an independent, reproducible random stream from a master seed,
/// a purpose tag, and an index. Streams for distinct (tag, index) pairs are
/// decorrelated, so parallel consumers reproduce the sequential results.
inline std::mt19937_64 derive_stream(std::uint64_t master_seed, std::uint64_t tag,
                                     std::uint64_t index = 0)
{
    return std::mt19937_64(mix64(mix64(master_seed ^ tag) + index));
}

// Stream purpose tags (arbitrary distinct constants).
inline constexpr std::uint64_t rng_tag_schedule = 0x5343484544554c45ULL;
inline constexpr std::uint64_t rng_tag_fading = 0x4641444530303030ULL;
inline constexpr std::uint64_t rng_tag_noise = 0x4e4f495345303030ULL;
inline constexpr std::uint64_t rng_tag_scene = 0x5343454e45303030ULL;

/// Standard complex Gaussian CN(0,1): real and imaginary parts are
/// independent N(0, 1/2).
inline std::complex<double> complex_gaussian(std::mt19937_64 &rng)
{
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    const double re = n(rng);
    const double im = n(rng);
    return {re, im};
}

} // namespace mtsim

#endif
