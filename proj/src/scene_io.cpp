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

#include "mtsim/scene_io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mtsim/phase_math.hpp"

namespace mtsim
{

namespace
{

constexpr double speed_of_light = 299792458.0;

std::string trim(const std::string &s)
{
    const std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    const std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string &what)
{
    throw std::invalid_argument("config parse error at line " + std::to_string(line) +
                                ": " + what);
}

double parse_number(const std::string &text, int line)
{
    const char *s = text.c_str();
    char *end = nullptr;
    const double v = std::strtod(s, &end);
    if (end == s || trim(end) != "")
        fail(line, "expected a number, got '" + text + "'");
    return v;
}

void parse_value(KvTable &table, const std::string &key, const std::string &raw,
                 int line)
{
    if (raw.empty())
        fail(line, "empty value for key '" + key + "'");
    if (raw.front() == '"')
    {
        if (raw.size() < 2 || raw.back() != '"')
            fail(line, "unterminated string for key '" + key + "'");
        table.strings[key] = raw.substr(1, raw.size() - 2);
        return;
    }
    if (raw == "true" || raw == "false")
    {
        table.booleans[key] = (raw == "true");
        return;
    }
    if (raw.front() == '[')
    {
        if (raw.back() != ']')
            fail(line, "unterminated array for key '" + key + "'");
        std::vector<double> values;
        std::string body = raw.substr(1, raw.size() - 2);
        std::istringstream parts(body);
        std::string item;
        while (std::getline(parts, item, ','))
        {
            item = trim(item);
            if (item.empty())
                fail(line, "empty array element for key '" + key + "'");
            values.push_back(parse_number(item, line));
        }
        table.arrays[key] = std::move(values);
        return;
    }
    table.numbers[key] = parse_number(raw, line); // strtod accepts "inf"
}

} // namespace

bool KvTable::has(const std::string &key) const
{
    return strings.count(key) || numbers.count(key) || booleans.count(key) ||
           arrays.count(key);
}

double KvTable::number(const std::string &key) const
{
    const auto it = numbers.find(key);
    if (it == numbers.end())
        throw std::invalid_argument("config: missing numeric key '" + key + "'");
    return it->second;
}

double KvTable::number_or(const std::string &key, double d) const
{
    const auto it = numbers.find(key);
    return it == numbers.end() ? d : it->second;
}

std::string KvTable::string_or(const std::string &key, const std::string &d) const
{
    const auto it = strings.find(key);
    return it == strings.end() ? d : it->second;
}

bool KvTable::boolean_or(const std::string &key, bool d) const
{
    const auto it = booleans.find(key);
    return it == booleans.end() ? d : it->second;
}

std::vector<double> KvTable::array(const std::string &key) const
{
    const auto it = arrays.find(key);
    if (it == arrays.end())
        throw std::invalid_argument("config: missing array key '" + key + "'");
    return it->second;
}

const KvTable &KvDocument::section(const std::string &name) const
{
    const auto it = sections.find(name);
    if (it == sections.end())
        throw std::invalid_argument("config: missing section [" + name + "]");
    return it->second;
}

KvDocument parse_kv_document(const std::string &text)
{
    KvDocument doc;
    KvTable *current = nullptr;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[')
        {
            if (line.size() > 4 && line[1] == '[' && line.ends_with("]]"))
            {
                const std::string name = trim(line.substr(2, line.size() - 4));
                doc.tables[name].emplace_back();
                current = &doc.tables[name].back();
            }
            else if (line.ends_with("]"))
            {
                const std::string name = trim(line.substr(1, line.size() - 2));
                current = &doc.sections[name];
            }
            else
                fail(line_no, "malformed section header");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            fail(line_no, "expected key = value");
        if (!current)
            fail(line_no, "key outside any section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            fail(line_no, "empty key");
        parse_value(*current, key, value, line_no);
    }
    return doc;
}

KvDocument load_kv_file(const std::string &path)
{
    std::ifstream f(path);
    if (!f)
        throw std::runtime_error("cannot open config file " + path);
    std::ostringstream buffer;
    buffer << f.rdbuf();
    return parse_kv_document(buffer.str());
}

namespace
{

Vec3 vec3_of(const KvTable &table, const std::string &key)
{
    const std::vector<double> a = table.array(key);
    if (a.size() != 3)
        throw std::invalid_argument("config: '" + key + "' must have 3 components");
    return {a[0], a[1], a[2]};
}

} // namespace

SceneSpec parse_scene(const std::string &text, const std::string &origin)
{
    const KvDocument doc = parse_kv_document(text);
    SceneSpec spec;

    const KvTable &scene = doc.section("scene");
    spec.geometry.name = scene.string_or("name", origin);
    const bool has_lambda = scene.has("wavelength");
    const bool has_freq = scene.has("carrier_frequency_hz");
    if (has_lambda == has_freq)
        throw std::invalid_argument(
            "scene: exactly one of wavelength / carrier_frequency_hz is required");
    spec.geometry.wavelength = has_lambda
                                   ? scene.number("wavelength")
                                   : speed_of_light / scene.number("carrier_frequency_hz");
    spec.geometry.tx = vec3_of(scene, "tx");
    spec.geometry.rx = vec3_of(scene, "rx");

    const auto panels = doc.tables.find("panel");
    if (panels != doc.tables.end())
        for (const KvTable &entry : panels->second)
        {
            MtsPanel panel;
            panel.center = vec3_of(entry, "center");
            panel.boresight_azimuth = deg2rad(entry.number("boresight_azimuth_deg"));
            panel.n_row = static_cast<int>(entry.number("n_row"));
            panel.n_col = static_cast<int>(entry.number("n_col"));
            panel.spacing = entry.number("spacing");
            panel.phase_levels = static_cast<int>(entry.number("phase_levels"));
            spec.geometry.panels.push_back(panel);
        }
    validate_scene(spec.geometry);

    const KvTable &channel = doc.section("channel");
    const std::string model = channel.string_or("attenuation_model", "constant");
    if (model == "constant")
    {
        spec.channel.attenuation.kind = AttenuationModel::Kind::constant;
        spec.channel.attenuation.gamma = channel.number_or("gamma", 0.5);
    }
    else if (model == "power_law")
    {
        spec.channel.attenuation.kind = AttenuationModel::Kind::power_law;
        spec.channel.attenuation.coeff = channel.number_or("coeff", 1.0);
        spec.channel.attenuation.exponent = channel.number_or("exponent", 2.0);
        spec.channel.attenuation.gamma_max = channel.number_or("gamma_max", 0.999999);
    }
    else
        throw std::invalid_argument("channel: unknown attenuation model '" + model + "'");

    if (channel.boolean_or("pure_los", false))
    {
        spec.channel.rician = RicianFactors{}; // all infinite
    }
    else
    {
        spec.channel.rician.direct = channel.number_or("rician_direct", 10.0);
        spec.channel.rician.tx_to_panel = channel.number_or("rician_tx_panel", 10.0);
        spec.channel.rician.panel_to_rx = channel.number_or("rician_panel_rx", 10.0);
    }
    spec.channel.tx_power = dbm_to_linear(channel.number_or("tx_power_dbm", 0.0));
    spec.channel.meas_noise_sigma = channel.number_or("meas_noise_sigma", 0.0);
    spec.channel.blockage_factor =
        channel.boolean_or("direct_blocked", false)
            ? channel.number_or("blockage_factor", 1e-3)
            : channel.number_or("blockage_factor", 1.0);
    return spec;
}

SceneSpec load_scene(const std::string &path)
{
    std::ifstream f(path);
    if (!f)
        throw std::runtime_error("cannot open scene file " + path);
    std::ostringstream buffer;
    buffer << f.rdbuf();
    return parse_scene(buffer.str(), path);
}

} // namespace mtsim
