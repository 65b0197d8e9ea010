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

/**
 * @file asym_metrics.hpp
 * @brief High-SNR closed forms for P_out, N_I and T_I.
 *
 * With q = (2^(2 R0) - 1) / Gamma0 (q = (2^R0 - 1) / Gamma0 for direct
 * transmission) every protocol behaves as
 *
 *   P_out ~ c_p q^d,   N_I ~ c_n q^(d - 1/2),   T_I ~ (c_p / c_n) q^(1/2)
 *
 * where d is the diversity gain. Eliminating q gives N_I ~ h P_out^((d+1)/4)
 * and T_I ~ P_out^((3-d)/4) / h.
 */

#include <optional>

#include "coopout/channel.hpp"
#include "coopout/protocol.hpp"

namespace coopout::asym {

struct AsymMetrics {
    double p_out_asym = 0.0;
    double aor_asym = 0.0;              // Hz
    std::optional<double> aod_asym;     // seconds; absent when aor_asym == 0
    double slope_op = 0.0;              // -d
    double slope_aor = 0.0;             // -(d - 1/2)
    double slope_aod = -0.5;
};

/// Rows of the symmetric-network summary table.
enum class Table1Row { Direct, Simo1x2, AF, DF, SR };

/// (x^3 - y^3) / (x^2 - y^2) without the removable 0/0 at x == y.
double cubic_ratio(double x, double y) noexcept;

AsymMetrics asym(const Scenario& s, Protocol p);

/// Symmetric network: Omega_X = Omega_Y = Omega_Z, every node with maximum
/// Doppler f_m, average received SNR gamma_bar = Omega Gamma0.
AsymMetrics table1_symmetric(double gamma_bar, double r0, double f_m, Table1Row row);

/// h in N_I ~ h P_out^((d+1)/4), taken from the scenario's Doppler and
/// gain parameters. Independent of Gamma0 and R0. Zero for a static network.
double h_factor(const Scenario& s, Protocol p);
double op_to_aor(double p_out, const Scenario& s, Protocol p);
double op_to_aod(double p_out, const Scenario& s, Protocol p);

}  // namespace coopout::asym
