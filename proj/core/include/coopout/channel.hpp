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
 * @file channel.hpp
 * @brief Three-node relay network over independent mobile-to-mobile Rayleigh links.
 *
 * Link naming follows the usual relay triangle:
 *   X  source -> destination (direct link)
 *   Y  source -> relay
 *   Z  relay  -> destination
 *
 * Each link gain is Rayleigh with mean-square value omega. A link between two
 * terminals with maximum Dopplers f_a and f_b has composite Doppler
 * sqrt(f_a^2 + f_b^2), and its envelope derivative is zero-mean Gaussian with
 * variance pi^2 * omega * f_link^2.
 *
 * SNR is linear everywhere in the library; dB only appears at the CLI.
 */

#include <optional>

namespace coopout {

/// Maximum Doppler frequency (Hz) introduced by each node's motion.
struct NodeDopplers {
    double source = 0.0;
    double relay = 0.0;
    double destination = 0.0;

    bool any_mobile() const noexcept { return source > 0.0 || relay > 0.0 || destination > 0.0; }
    /// Largest of the three node Dopplers; the f_m used for normalisation.
    double max() const noexcept;
};

/// Mean-square gains E[X^2], E[Y^2], E[Z^2].
struct LinkGains {
    double omega_x = 1.0;
    double omega_y = 1.0;
    double omega_z = 1.0;
};

/// How the selection-relaying threshold Y0 on the source->relay gain is set.
struct SrThresholdPolicy {
    std::optional<double> explicit_y0;  // empty: Y0 = G0

    static SrThresholdPolicy equal_to_g0() { return {}; }
    static SrThresholdPolicy explicit_value(double y0) { return {y0}; }
};

struct Scenario {
    double gamma0 = 1.0;  // transmit SNR P_T/N_0, linear
    double r0 = 0.5;      // target spectral efficiency, b/s/Hz
    LinkGains gains;
    NodeDopplers dopplers;
    SrThresholdPolicy sr_threshold;
};

/// Per-link composite Dopplers and envelope-derivative variances.
struct LinkDerived {
    double fm_x = 0.0;
    double fm_y = 0.0;
    double fm_z = 0.0;
    double sigma2_x = 0.0;
    double sigma2_y = 0.0;
    double sigma2_z = 0.0;
};

struct Thresholds {
    double g0 = 0.0;  // relayed protocols: sqrt((2^(2 r0) - 1) / gamma0)
    double x0 = 0.0;  // direct transmission: sqrt((2^r0 - 1) / gamma0)
    double c1 = 0.0;  // variable-gain AF constant 1/gamma0
    double y0 = 0.0;  // SR relay-activation threshold, resolved from the policy
};

struct DerivedScenario {
    LinkDerived links;
    Thresholds thresholds;
};

/// Throws ArgumentError unless gamma0 > 0, r0 >= 0, all omegas > 0, all
/// Dopplers >= 0 and an explicit Y0 (if any) is > 0.
void validate(const Scenario& scenario);

/// Composite Dopplers, derivative variances and outage thresholds.
DerivedScenario derive(const Scenario& scenario);

/// Envelope derivative variance of one link, pi^2 * omega * (f_a^2 + f_b^2).
double derivative_variance(double omega, double f_a, double f_b);

/// Rayleigh cdf 1 - exp(-x^2/omega). Throws DomainError for x < 0.
double rayleigh_cdf(double x, double omega);

/// Rice level-crossing rate of a Rayleigh envelope:
///   sqrt(2 sigma2 / pi) * (level/omega) * exp(-level^2/omega)
double rayleigh_lcr(double level, double omega, double sigma2);

double db_to_linear(double db);
double linear_to_db(double linear);

}  // namespace coopout
