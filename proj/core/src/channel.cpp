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

#include "coopout/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "coopout/errors.hpp"

namespace coopout {

double NodeDopplers::max() const noexcept { return std::max({source, relay, destination}); }

void validate(const Scenario& s)
{
    if (!(s.gamma0 > 0.0) || !std::isfinite(s.gamma0)) {
        throw ArgumentError("scenario: transmit SNR must be positive and finite");
    }
    if (!(s.r0 >= 0.0) || !std::isfinite(s.r0)) {
        throw ArgumentError("scenario: target rate must be nonnegative and finite");
    }
    const auto& g = s.gains;
    if (!(g.omega_x > 0.0 && g.omega_y > 0.0 && g.omega_z > 0.0)) {
        throw ArgumentError("scenario: mean-square link gains must be positive");
    }
    const auto& d = s.dopplers;
    if (!(d.source >= 0.0 && d.relay >= 0.0 && d.destination >= 0.0)) {
        throw ArgumentError("scenario: node Dopplers must be nonnegative");
    }
    if (s.sr_threshold.explicit_y0 && !(*s.sr_threshold.explicit_y0 > 0.0)) {
        throw ArgumentError("scenario: explicit SR threshold Y0 must be positive");
    }
}

double derivative_variance(double omega, double f_a, double f_b)
{
    return std::numbers::pi * std::numbers::pi * omega * (f_a * f_a + f_b * f_b);
}

DerivedScenario derive(const Scenario& s)
{
    validate(s);
    const auto& d = s.dopplers;
    const auto& g = s.gains;

    DerivedScenario out;
    auto& l = out.links;
    l.fm_x = std::hypot(d.source, d.destination);
    l.fm_y = std::hypot(d.source, d.relay);
    l.fm_z = std::hypot(d.relay, d.destination);
    l.sigma2_x = derivative_variance(g.omega_x, d.source, d.destination);
    l.sigma2_y = derivative_variance(g.omega_y, d.source, d.relay);
    l.sigma2_z = derivative_variance(g.omega_z, d.relay, d.destination);

    // 2^r - 1 via expm1 so that tiny rates keep their relative precision.
    const double relayed = std::expm1(2.0 * s.r0 * std::numbers::ln2);
    const double direct = std::expm1(s.r0 * std::numbers::ln2);
    auto& t = out.thresholds;
    t.g0 = std::sqrt(relayed / s.gamma0);
    t.x0 = std::sqrt(direct / s.gamma0);
    t.c1 = 1.0 / s.gamma0;
    t.y0 = s.sr_threshold.explicit_y0.value_or(t.g0);
    return out;
}

double rayleigh_cdf(double x, double omega)
{
    if (!(x >= 0.0)) {
        throw DomainError("rayleigh_cdf: gain must be nonnegative");
    }
    return -std::expm1(-x * x / omega);
}

double rayleigh_lcr(double level, double omega, double sigma2)
{
    return std::sqrt(2.0 * sigma2 / std::numbers::pi) * (level / omega) * std::exp(-level * level / omega);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace coopout
