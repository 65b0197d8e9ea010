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
 * @file exact_metrics.hpp
 * @brief Exact outage probability, outage rate and outage duration.
 *
 * Equivalent end-to-end gains:
 *   Direct  G = X                                   (threshold X0)
 *   AF      G = sqrt(X^2 + Y^2 Z^2 / (Y^2 + Z^2 + C1))
 *   DF      G = min(Y, U),  U = sqrt(X^2 + Z^2)
 *   SR      G = sqrt(2) X if Y <= Y0, else U
 *
 * The outage rate is Rice's level-crossing rate of G at the threshold; the
 * outage duration is P_out / N_I.
 *
 * Closed forms with a removable 0/0 at Omega_X == Omega_Z (or sigma_X ==
 * sigma_Z) are evaluated in rearranged forms that stay accurate right up to
 * the equal case; the printed equal-parameter form is used only when the
 * relative gap is at most kEqualTolerance.
 */

#include <optional>

#include "coopout/channel.hpp"
#include "coopout/protocol.hpp"

namespace coopout::exact {

inline constexpr double kEqualTolerance = 1e-9;

/// |a - b| <= tol * max(|a|, |b|)
bool nearly_equal(double a, double b, double tol = kEqualTolerance) noexcept;

/// Quadrature controls for the AF integrals.
struct AfOptions {
    double op_tol = 1e-8;    // relative, order doubling on the outer rule
    double aor_tol = 1e-7;
    /// Evaluate the outer integral with exactly this many Gauss-Legendre
    /// points instead of adapting. Used for self-convergence studies.
    std::optional<int> fixed_outer_order;
    /// Inner (t) tolerance; defaults to aor_tol / 10.
    std::optional<double> inner_tol;
    /// Replace C1 = 1 / Gamma0 in the relayed term (0 gives the high-SNR
    /// simplified gain).
    std::optional<double> c1;
};

// Direct transmission --------------------------------------------------------

double op_direct(const Scenario& s);
double aor_direct(const Scenario& s);

// AF -------------------------------------------------------------------------

double op_af(const Scenario& s, const AfOptions& opt = {});
double aor_af(const Scenario& s, const AfOptions& opt = {});

/// Integrand of the AF outage probability in the variable a in (0, G0^2).
double af_op_integrand(double a, double g0, double c1, const LinkGains& gains);
/// Inner t-integral of the AF outage rate at fixed a, without the outer
/// exp(-a(1/Oy + 1/Oz - 1/Ox)) factor and without the global prefactor.
double af_aor_inner(double a, const DerivedScenario& d, const LinkGains& gains, double tol);
/// Integrand of the inner integral, exposed for quadrature studies.
double af_aor_inner_integrand(double t, double a, const DerivedScenario& d, const LinkGains& gains);

// Building blocks for DF / SR -----------------------------------------------

/// Pr{U > g}, U = sqrt(X^2 + Z^2).
double prob_u_exceeds(double g, double omega_x, double omega_z);
/// Pr{U <= g}, accurate also when it is tiny (small g).
double prob_u_at_most(double g, double omega_x, double omega_z);

/// Level-crossing rate of U at level g.
double lcr_u(double g, double omega_x, double omega_z, double sigma2_x, double sigma2_z);

/// Pr{sqrt(2) X > g and U < g}
double prob_direct_above_u_below(double g, double omega_x, double omega_z);
/// Pr{sqrt(2) X < g and U > g}
double prob_direct_below_u_above(double g, double omega_x, double omega_z);

// DF / SR --------------------------------------------------------------------

double op_df(const Scenario& s);
double aor_df(const Scenario& s);

double op_sr(const Scenario& s);

/// The four nonnegative contributions to the SR outage rate: envelope
/// crossings on either branch, and crossings forced by Y switching.
struct SrAorTerms {
    double direct_branch = 0.0;  // sqrt(2) X crosses while Y <= Y0
    double relay_branch = 0.0;   // U crosses while Y > Y0
    double switch_up = 0.0;      // Y rises through Y0 while sqrt(2) X > G0 > U
    double switch_down = 0.0;    // Y falls through Y0 while U > G0 > sqrt(2) X

    double total() const noexcept { return direct_branch + relay_branch + switch_up + switch_down; }
};

SrAorTerms aor_sr_terms(const Scenario& s);
double aor_sr(const Scenario& s);

// Dispatch -------------------------------------------------------------------

double op(const Scenario& s, Protocol p);
/// Throws DegenerateMobilityError when no node moves.
double aor(const Scenario& s, Protocol p);
OutageMetrics metrics(const Scenario& s, Protocol p);

}  // namespace coopout::exact
