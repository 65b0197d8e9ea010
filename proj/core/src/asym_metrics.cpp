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

#include "coopout/asym_metrics.hpp"

#include <cmath>
#include <numbers>

#include "coopout/errors.hpp"

namespace coopout::asym {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrtPi = std::sqrt(kPi);
const double kSqrt2Pi = std::sqrt(2.0 * kPi);

AsymMetrics assemble(double p, double n, int d)
{
    AsymMetrics m;
    m.p_out_asym = p;
    m.aor_asym = n;
    if (n > 0.0) {
        m.aod_asym = p / n;
    }
    m.slope_op = -d;
    m.slope_aor = -(d - 0.5);
    return m;
}

// Two-hop outage coefficient shared by AF and SR.
double two_hop_coefficient(const LinkGains& g)
{
    return (g.omega_y + g.omega_z) / (2.0 * g.omega_x * g.omega_y * g.omega_z);
}

}  // namespace

double cubic_ratio(double x, double y) noexcept
{
    const double s = x + y;
    if (s == 0.0) {
        return 0.0;
    }
    return (x * x + x * y + y * y) / s;
}

AsymMetrics asym(const Scenario& s, Protocol p)
{
    validate(s);
    const auto d = derive(s);
    const auto& g = s.gains;
    const auto& l = d.links;
    const double q = d.thresholds.g0 * d.thresholds.g0;
    const int dk = diversity_gain(p);

    switch (p) {
    case Protocol::Direct: {
        const double u = d.thresholds.x0 * d.thresholds.x0 / g.omega_x;
        return assemble(u, kSqrt2Pi * l.fm_x * std::sqrt(u), dk);
    }
    case Protocol::DF: {
        const double u = q / g.omega_y;
        return assemble(u, kSqrt2Pi * l.fm_y * std::sqrt(u), dk);
    }
    case Protocol::AF: {
        const double sx = l.fm_x * std::sqrt(g.omega_x);
        const double sy = l.fm_y * std::sqrt(g.omega_y);
        const double sz = l.fm_z * std::sqrt(g.omega_z);
        const double c = cubic_ratio(sx, sz) / (g.omega_x * g.omega_z) + cubic_ratio(sx, sy) / (g.omega_x * g.omega_y);
        return assemble(two_hop_coefficient(g) * q * q, 2.0 * kSqrt2Pi / 3.0 * c * std::pow(q, 1.5), dk);
    }
    case Protocol::SR: {
        const double sx = l.fm_x * std::sqrt(g.omega_x);
        const double sz = l.fm_z * std::sqrt(g.omega_z);
        const double c = (sx + l.fm_y * std::sqrt(g.omega_y / 2.0)) / (g.omega_x * g.omega_y) +
                         2.0 * std::numbers::sqrt2 / (3.0 * g.omega_x * g.omega_z) * cubic_ratio(sz, sx);
        return assemble(two_hop_coefficient(g) * q * q, kSqrtPi * c * std::pow(q, 1.5), dk);
    }
    }
    throw ArgumentError("asym: unknown protocol");
}

AsymMetrics table1_symmetric(double gamma_bar, double r0, double f_m, Table1Row row)
{
    if (!(gamma_bar > 0.0) || !(r0 >= 0.0) || !(f_m >= 0.0)) {
        throw DomainError("table1_symmetric: need gamma_bar > 0, r0 >= 0, f_m >= 0");
    }
    const double q = std::expm1(2.0 * r0 * std::numbers::ln2) / gamma_bar;
    switch (row) {
    case Table1Row::Direct: {
        // Single hop over the full block: threshold 2^R0 - 1.
        const double u = std::expm1(r0 * std::numbers::ln2) / gamma_bar;
        return assemble(u, 2.0 * kSqrtPi * f_m * std::sqrt(u), 1);
    }
    case Table1Row::Simo1x2:
        return assemble(q * q / 2.0, 2.0 * kSqrtPi * f_m * std::pow(q, 1.5), 2);
    case Table1Row::AF:
        return assemble(q * q, 4.0 * kSqrtPi * f_m * std::pow(q, 1.5), 2);
    case Table1Row::DF:
        return assemble(q, 2.0 * kSqrtPi * f_m * std::sqrt(q), 1);
    case Table1Row::SR:
        return assemble(q * q, (std::numbers::sqrt2 + 3.0) * kSqrtPi * f_m * std::pow(q, 1.5), 2);
    }
    throw ArgumentError("table1_symmetric: unknown row");
}

double h_factor(const Scenario& s, Protocol p)
{
    auto probe = s;
    if (!(probe.r0 > 0.0)) {
        probe.r0 = 1.0;  // h does not depend on the rate; avoid 0/0
    }
    const auto m = asym(probe, p);
    return m.aor_asym / std::pow(m.p_out_asym, (diversity_gain(p) + 1) / 4.0);
}

double op_to_aor(double p_out, const Scenario& s, Protocol p)
{
    if (!(p_out > 0.0 && p_out < 1.0)) {
        throw DomainError("op_to_aor: p_out must lie in (0, 1)");
    }
    return h_factor(s, p) * std::pow(p_out, (diversity_gain(p) + 1) / 4.0);
}

double op_to_aod(double p_out, const Scenario& s, Protocol p)
{
    if (!(p_out > 0.0 && p_out < 1.0)) {
        throw DomainError("op_to_aod: p_out must lie in (0, 1)");
    }
    const double h = h_factor(s, p);
    if (h == 0.0) {
        throw DegenerateMobilityError("op_to_aod: no node moves");
    }
    return std::pow(p_out, (3 - diversity_gain(p)) / 4.0) / h;
}

}  // namespace coopout::asym
