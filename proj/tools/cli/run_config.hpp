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

#pragma once

// Run configuration shared by all subcommands: built from an optional
// `key = value` file, then overridden by command-line flags.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "coopout/channel.hpp"
#include "coopout/mc_sim.hpp"
#include "coopout/protocol.hpp"

namespace coopout::cli {

/// Bad configuration value or file; the message carries the location.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Normalization { Hz, PerFm, PerBlock };

struct RunConfig {
    std::vector<double> snr_db{20.0};  // transmit SNR Gamma0 in dB
    double r0 = 0.5;
    LinkGains omega{1.0, 1.0, 1.0};
    NodeDopplers doppler{1.0, 1.0, 1.0};
    std::optional<double> y0;  // SR relay threshold; default G0
    std::vector<Protocol> protocols{kAllProtocols.begin(), kAllProtocols.end()};
    Normalization normalize = Normalization::Hz;
    double fm_t = 1e-3;  // f_m T for block normalization
    mc::TraceConfig trace{64, 1 << 15, 32, 1, 640};
    std::uint64_t samples = 640ull << 15;  // total MC samples
    bool mc = false;                       // metrics: add a Monte Carlo column
    std::optional<std::filesystem::path> out;
    std::optional<std::filesystem::path> dump_trace;

    Scenario scenario(double snr_db) const;
    /// Normalizing Doppler: the largest node Doppler.
    double f_m() const noexcept { return doppler.max(); }
};

/// Setting names accepted in config files; flags use the same names with
/// '-' for '_' (e.g. fm_t <-> --fm-t).
const std::vector<std::string>& known_keys();

/// Applies one setting. Throws std::invalid_argument with a message that
/// does not include the location.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Parses a config file into cfg. Errors are reported as "path:line: ...".
void load_config_file(RunConfig& cfg, const std::filesystem::path& path);

/// Cross-field checks (run after file and flags are merged).
void finalize(RunConfig& cfg);

std::vector<double> parse_db_range(const std::string& text);
Normalization parse_normalization(const std::string& text);
std::vector<Protocol> parse_protocol_list(const std::string& text);

}  // namespace coopout::cli
