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

// Subcommand implementations. Each returns the process exit code:
// 0 success, 1 validation failure, 2 usage or configuration error.

#include <iosfwd>
#include <optional>
#include <string>

#include "coopout/asym_metrics.hpp"
#include "coopout/exact_metrics.hpp"
#include "run_config.hpp"

namespace coopout::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailed = 1;
inline constexpr int kExitUsage = 2;

/// Multipliers from Hz / seconds to the selected normalization.
struct Units {
    double aor = 1.0;
    double aod = 1.0;
    std::string aor_label;
    std::string aod_label;
};

Units units_for(const RunConfig& cfg);

/// Exact and asymptotic metrics at one point. The rate is absent for a
/// network with no mobile node.
struct PointMetrics {
    double p_out = 0.0;
    std::optional<double> aor;
    std::optional<double> aod;
    asym::AsymMetrics asym;
};

PointMetrics evaluate(const Scenario& s, Protocol p);

/// "%.9g"; "nan" for an absent value.
std::string format_number(std::optional<double> v);

int cmd_metrics(const RunConfig& cfg, std::ostream& out);
int cmd_sweep(const RunConfig& cfg, std::ostream& out);
int cmd_validate(const RunConfig& cfg, std::ostream& out);
int cmd_slope(const RunConfig& cfg, std::ostream& out);
int cmd_table1(const RunConfig& cfg, std::ostream& out);

}  // namespace coopout::cli
