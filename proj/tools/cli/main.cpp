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

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "commands.hpp"
#include "coopout/errors.hpp"
#include "run_config.hpp"

namespace {

using coopout::cli::RunConfig;

struct FlagSpec {
    const char* flag;
    const char* key;
    const char* help;
};

constexpr FlagSpec kValueFlags[] = {
    {"--snr-db", "snr_db", "Transmit SNR Gamma0 in dB (single point)"},
    {"--snr-db-range", "snr_db_range", "SNR range A:B:STEP in dB, inclusive"},
    {"--rate", "rate", "Target spectral efficiency R0 in bit/s/Hz"},
    {"--omega", "omega", "Mean link gains X,Y,Z (S-D, S-R, R-D)"},
    {"--doppler", "doppler", "Maximum Doppler frequencies S,R,D in Hz"},
    {"--protocols", "protocols", "Comma-separated subset of direct,af,df,sr, or all"},
    {"--normalize", "normalize", "Rate/duration units: hz, fm or block"},
    {"--fm-t", "fm_t", "f_m T product for block normalization"},
    {"--seed", "seed", "Monte Carlo seed"},
    {"--samples", "samples", "Total Monte Carlo samples over all realizations"},
    {"--oversampling", "oversampling", "Samples per Doppler period"},
    {"--sinusoids", "sinusoids", "Sinusoids per fading process (even)"},
    {"--realizations", "realizations", "Independent Monte Carlo realizations"},
    {"--y0", "y0", "Relay SNR threshold for SR (default G0)"},
    {"--out", "out", "Write output to this file instead of stdout"},
    {"--dump-trace", "dump_trace", "validate: write the composed gain trace to this file"},
};

using Command = std::function<int(const RunConfig&, std::ostream&)>;

}  // namespace

int main(int argc, char** argv)
{
    namespace cli = coopout::cli;

    CLI::App app{"Outage rate and duration of cooperative relaying over mobile-to-mobile fading"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "coopout " COOPOUT_VERSION);

    const std::pair<const char*, const char*> commands[] = {
        {"metrics", "Exact, asymptotic and optional simulated metrics at one SNR"},
        {"sweep", "CSV of exact and asymptotic metrics over an SNR range"},
        {"validate", "Compare exact metrics against Monte Carlo simulation"},
        {"slope", "Fit high-SNR exponents of OP, AOR and AOD"},
        {"table1", "Asymptotic metrics for the symmetric network"},
    };
    const std::map<std::string, Command> handlers = {
        {"metrics", cli::cmd_metrics}, {"sweep", cli::cmd_sweep}, {"validate", cli::cmd_validate},
        {"slope", cli::cmd_slope},     {"table1", cli::cmd_table1},
    };

    std::string config_path;
    std::map<std::string, std::string> values;  // key -> flag value
    bool mc = false;
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "Config file of key = value lines");
        for (const auto& f : kValueFlags) {
            sub->add_option_function<std::string>(
                f.flag, [&values, key = f.key](const std::string& v) { values[key] = v; }, f.help);
        }
        if (std::string(name) == "metrics") {
            sub->add_flag("--mc", mc, "Add Monte Carlo estimates");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? cli::kExitOk : cli::kExitUsage;
    }

    const CLI::App* sub = app.get_subcommands().front();
    RunConfig cfg;
    try {
        if (!config_path.empty()) {
            cli::load_config_file(cfg, config_path);
        }
        if (values.count("snr_db") && values.count("snr_db_range")) {
            throw cli::ConfigError("--snr-db and --snr-db-range are mutually exclusive");
        }
        // A single point on the command line replaces a range from the file, and vice versa.
        for (const auto& [key, value] : values) {
            try {
                cli::apply_setting(cfg, key, value);
            } catch (const std::invalid_argument& e) {
                throw cli::ConfigError(std::string("--") + key + ": " + e.what());
            }
        }
        if (mc) {
            cfg.mc = true;
        }
        cli::finalize(cfg);
    } catch (const std::exception& e) {
        std::cerr << "coopout: " << e.what() << '\n';
        return cli::kExitUsage;
    }

    try {
        const Command& run = handlers.at(sub->get_name());
        if (cfg.out) {
            std::ofstream file(*cfg.out, std::ios::binary);
            if (!file) {
                std::cerr << "coopout: cannot open " << cfg.out->string() << " for writing\n";
                return cli::kExitUsage;
            }
            const int code = run(cfg, file);
            file.flush();
            if (!file) {
                std::cerr << "coopout: write to " << cfg.out->string() << " failed\n";
                return cli::kExitUsage;
            }
            return code;
        }
        return run(cfg, std::cout);
    } catch (const cli::ConfigError& e) {
        std::cerr << "coopout: " << e.what() << '\n';
        return cli::kExitUsage;
    } catch (const coopout::ArgumentError& e) {
        std::cerr << "coopout: " << e.what() << '\n';
        return cli::kExitUsage;
    } catch (const coopout::DomainError& e) {
        std::cerr << "coopout: " << e.what() << '\n';
        return cli::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "coopout: error: " << e.what() << '\n';
        return cli::kExitUsage;
    }
}
