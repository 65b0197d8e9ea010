// SPDX-License-Identifier: Apache-2.0
//
// coopout: outage rate and duration of cooperative relaying over
// mobile-to-mobile Rayleigh fading.
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

#include "run_config.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace coopout::cli {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        parts.push_back(trim(item));
    }
    if (!s.empty() && s.back() == sep) {
        parts.emplace_back();
    }
    return parts;
}

double parse_double(const std::string& text, const std::string& what)
{
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(v)) {
        throw std::invalid_argument(what + ": expected a number, got '" + text + "'");
    }
    return v;
}

std::uint64_t parse_count(const std::string& text, const std::string& what)
{
    const std::string t = trim(text);
    // Accept 2e7-style counts as well as plain integers.
    const double v = parse_double(t, what);
    if (v < 1 || v != std::floor(v) || v > 1e15) {
        throw std::invalid_argument(what + ": expected a positive integer, got '" + text + "'");
    }
    return static_cast<std::uint64_t>(v);
}

std::array<double, 3> parse_triple(const std::string& text, const std::string& what)
{
    const auto parts = split(text, ',');
    if (parts.size() != 3) {
        throw std::invalid_argument(what + ": expected three comma-separated values, got '" + text + "'");
    }
    return {parse_double(parts[0], what), parse_double(parts[1], what), parse_double(parts[2], what)};
}

std::string lower(std::string s)
{
    for (auto& c : s) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return s;
}

}  // namespace

Scenario RunConfig::scenario(double db) const
{
    Scenario s;
    s.gamma0 = db_to_linear(db);
    s.r0 = r0;
    s.gains = omega;
    s.dopplers = doppler;
    if (y0) {
        s.sr_threshold = SrThresholdPolicy::explicit_value(*y0);
    }
    return s;
}

const std::vector<std::string>& known_keys()
{
    static const std::vector<std::string> keys = {
        "snr_db", "snr_db_range", "rate",        "omega",         "doppler", "protocols", "normalize",
        "fm_t",   "seed",         "samples",     "oversampling",  "sinusoids", "realizations", "y0",
        "out",    "mc",           "dump_trace",
    };
    return keys;
}

std::vector<double> parse_db_range(const std::string& text)
{
    const auto parts = split(text, ':');
    if (parts.size() != 3) {
        throw std::invalid_argument("snr_db_range: expected A:B:STEP, got '" + text + "'");
    }
    const double a = parse_double(parts[0], "snr_db_range");
    const double b = parse_double(parts[1], "snr_db_range");
    const double step = parse_double(parts[2], "snr_db_range");
    if (!(step > 0.0)) {
        throw std::invalid_argument("snr_db_range: STEP must be positive");
    }
    if (b < a) {
        throw std::invalid_argument("snr_db_range: empty range (B < A)");
    }
    std::vector<double> v;
    // Index-based so that e.g. 0:40:0.1 hits 40 exactly.
    const auto n = static_cast<long>(std::floor((b - a) / step + 1e-9));
    for (long i = 0; i <= n; ++i) {
        v.push_back(a + static_cast<double>(i) * step);
    }
    return v;
}

Normalization parse_normalization(const std::string& text)
{
    const auto t = lower(trim(text));
    if (t == "hz") {
        return Normalization::Hz;
    }
    if (t == "fm") {
        return Normalization::PerFm;
    }
    if (t == "block") {
        return Normalization::PerBlock;
    }
    throw std::invalid_argument("normalize: expected hz, fm or block, got '" + text + "'");
}

std::vector<Protocol> parse_protocol_list(const std::string& text)
{
    std::vector<Protocol> out;
    if (lower(trim(text)) == "all") {
        return {kAllProtocols.begin(), kAllProtocols.end()};
    }
    for (const auto& name : split(text, ',')) {
        if (name.empty()) {
            continue;
        }
        const auto p = parse_protocol(name);
        if (!p) {
            throw std::invalid_argument("protocols: unknown protocol '" + name + "' (expected sr, af, df, direct)");
        }
        if (std::find(out.begin(), out.end(), *p) == out.end()) {
            out.push_back(*p);
        }
    }
    if (out.empty()) {
        throw std::invalid_argument("protocols: empty protocol list");
    }
    return out;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value)
{
    if (key == "snr_db") {
        cfg.snr_db = {parse_double(value, key)};
    } else if (key == "snr_db_range") {
        cfg.snr_db = parse_db_range(value);
    } else if (key == "rate") {
        cfg.r0 = parse_double(value, key);
        if (cfg.r0 < 0.0) {
            throw std::invalid_argument("rate: must be >= 0");
        }
    } else if (key == "omega") {
        const auto t = parse_triple(value, key);
        if (!(t[0] > 0 && t[1] > 0 && t[2] > 0)) {
            throw std::invalid_argument("omega: mean-square gains must be positive");
        }
        cfg.omega = {t[0], t[1], t[2]};
    } else if (key == "doppler") {
        const auto t = parse_triple(value, key);
        if (!(t[0] >= 0 && t[1] >= 0 && t[2] >= 0)) {
            throw std::invalid_argument("doppler: frequencies must be >= 0");
        }
        cfg.doppler = {t[0], t[1], t[2]};
    } else if (key == "protocols") {
        cfg.protocols = parse_protocol_list(value);
    } else if (key == "normalize") {
        cfg.normalize = parse_normalization(value);
    } else if (key == "fm_t") {
        cfg.fm_t = parse_double(value, key);
    } else if (key == "seed") {
        const std::string t = trim(value);
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
            throw std::invalid_argument("seed: expected an unsigned 64-bit integer, got '" + value + "'");
        }
        cfg.trace.seed = v;
    } else if (key == "samples") {
        cfg.samples = parse_count(value, key);
    } else if (key == "oversampling") {
        cfg.trace.oversampling = static_cast<int>(std::min<std::uint64_t>(parse_count(value, key), 1u << 20));
    } else if (key == "sinusoids") {
        cfg.trace.n_sinusoids = static_cast<int>(std::min<std::uint64_t>(parse_count(value, key), 1u << 16));
    } else if (key == "realizations") {
        cfg.trace.n_realizations = static_cast<int>(std::min<std::uint64_t>(parse_count(value, key), 1u << 24));
    } else if (key == "y0") {
        const double v = parse_double(value, key);
        if (v < 0.0) {
            throw std::invalid_argument("y0: must be >= 0");
        }
        cfg.y0 = v;
    } else if (key == "out") {
        cfg.out = trim(value);
    } else if (key == "dump_trace") {
        cfg.dump_trace = trim(value);
    } else if (key == "mc") {
        const auto t = lower(trim(value));
        if (t == "true" || t == "1" || t == "yes" || t == "on") {
            cfg.mc = true;
        } else if (t == "false" || t == "0" || t == "no" || t == "off") {
            cfg.mc = false;
        } else {
            throw std::invalid_argument("mc: expected true or false, got '" + value + "'");
        }
    } else {
        throw std::invalid_argument("unknown setting '" + key + "'");
    }
}

void load_config_file(RunConfig& cfg, const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path.string() + ": cannot open config file");
    }
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (body.empty()) {
            continue;
        }
        const auto where = path.string() + ":" + std::to_string(number) + ": ";
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(where + "expected 'key = value'");
        }
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(where + "missing key before '='");
        }
        try {
            apply_setting(cfg, key, value);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(where + e.what());
        }
    }
}

void finalize(RunConfig& cfg)
{
    if (cfg.snr_db.empty()) {
        throw ConfigError("snr_db_range: empty range");
    }
    if (cfg.protocols.empty()) {
        throw ConfigError("protocols: empty protocol list");
    }
    if (cfg.normalize == Normalization::PerBlock && !(cfg.fm_t > 0.0 && cfg.fm_t < 1.0)) {
        throw ConfigError("fm_t: must lie in (0, 1) for block normalization");
    }
    if (cfg.normalize != Normalization::Hz && !(cfg.f_m() > 0.0)) {
        throw ConfigError("normalize: fm and block need at least one mobile node");
    }
    const auto r = static_cast<std::uint64_t>(cfg.trace.n_realizations);
    cfg.trace.n_samples = std::max<std::uint64_t>(1, (cfg.samples + r - 1) / r);
    try {
        mc::validate(cfg.trace);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace coopout::cli
