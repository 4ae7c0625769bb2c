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

#ifndef MTSIM_SCENE_IO_HPP
#define MTSIM_SCENE_IO_HPP

#include <map>
#include <string>
#include <vector>

#include "mtsim/channel.hpp"
#include "mtsim/geometry.hpp"

namespace mtsim
{

/// Minimal TOML-style document: [section] and repeated [[section]] tables of
/// key = value pairs. Values: numbers, booleans, quoted strings, "inf", and
/// flat numeric arrays. Enough for scene and experiment files; anything else
/// is a parse error.
struct KvTable
{
    std::map<std::string, std::string> strings;
    std::map<std::string, double> numbers;
    std::map<std::string, bool> booleans;
    std::map<std::string, std::vector<double>> arrays;

    bool has(const std::string &key) const;
    double number(const std::string &key) const;            // throws if absent
    double number_or(const std::string &key, double d) const;
    std::string string_or(const std::string &key, const std::string &d) const;
    bool boolean_or(const std::string &key, bool d) const;
    std::vector<double> array(const std::string &key) const; // throws if absent
};

struct KvDocument
{
    std::map<std::string, KvTable> sections;              // [name]
    std::map<std::string, std::vector<KvTable>> tables;   // [[name]]

    const KvTable &section(const std::string &name) const; // throws if absent
};

/// Parse a TOML-subset document from text; throws std::invalid_argument with
/// a line number on malformed input.
KvDocument parse_kv_document(const std::string &text);
KvDocument load_kv_file(const std::string &path);

/// Scene file contents: geometry plus the channel configuration block.
/// File-boundary units: meters, degrees, dBm; internal units: radians and
/// linear power. Exactly one of wavelength / carrier_frequency_hz is required.
struct SceneSpec
{
    SceneGeometry geometry;
    ChannelOptions channel;
};

SceneSpec load_scene(const std::string &path);
SceneSpec parse_scene(const std::string &text, const std::string &origin = "<string>");

} // namespace mtsim

#endif
