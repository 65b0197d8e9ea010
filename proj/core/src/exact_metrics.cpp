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

#include "coopout/exact_metrics.hpp"

#include <algorithm>
#include <cmath>

#include "coopout/errors.hpp"
#include "coopout/numerics.hpp"

namespace coopout::exact {

namespace nm = numerics;

namespace {

// (exp(-a) - exp(-b)) / (b - a), symmetric, exp(-a) at a == b.
double exp_gap(double a, double b)
{
    const double lo = std::min(a, b);
    const double d = std::abs(b - a);
    if (d == 0.0) {
        return std::exp(-lo);
    }
    return std::exp(-lo) * (-std::expm1(-d)) / d;
}

// Small-threshold representations. With a = g^2/Ox, b = g^2/Oz and
// s = g^2 r the joint events reduce to integrals over r of an entire
// integrand, which a fixed Gauss-Legendre rule evaluates to full precision.
// The closed forms cancel to O(g^4) from O(g^2) terms in this regime.
constexpr double kSmallArg = 1.0;
constexpr int kSmallOrder = 32;

double u_below_density(double r, double a, double b) { return a * std::exp(-a * r) * -std::expm1(-b * (1.0 - r)); }

double fixed_rule(double lo, double hi, double a, double b)
{
    const auto& rule = nm::legendre_reference(kSmallOrder);
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    return half * rule.apply([&](double x) { return u_below_density(mid + half * x, a, b); });
}

void require_mobility(const Scenario& s)
{
    if (!s.dopplers.any_mobile()) {
        throw DegenerateMobilityError("outage rate undefined: no node is mobile");
    }
}

// a = G0^2 * u^3 (4 - 3u): cubic at a = 0 (tames the a ln a behaviour of the
// K1 kernel), quadratic at a = G0^2 (turns sqrt(G0^2 - a) into a polynomial).
double stretch(double u) { return u * u * u * (4.0 - 3.0 * u); }
double stretch_jacobian(double u) { return 12.0 * u * u * (1.0 - u); }

template <class F>
double outer_integral(F&& f, double tol, const std::optional<int>& fixed_order)
{
    if (fixed_order) {
        const auto& rule = nm::legendre_reference(*fixed_order);
        return 0.5 * rule.apply([&](double x) { return f(0.5 * (x + 1.0)); });
    }
    return nm::integrate_finite(f, 0.0, 1.0, tol).value;
}

// Level-crossing rate of U, integral part. With v^2 the derivative variance
// at the crossing point, N_U = 2 g^3 / (sqrt(2 pi) Ox Oz) * I and
//   I = int_0^1 sqrt((1-s) sx^2 + s sz^2) exp(-a - s (b - a)) ds.
double lcr_u_integral(double a, double b, double sx, double sz)
{
    const double sx2 = sx * sx;
    const double sz2 = sz * sz;
    const double ds2 = sz2 - sx2;

    if (nearly_equal(sx, sz)) {
        return 0.5 * (sx + sz) * exp_gap(a, b);
    }

    // Incomplete-gamma closed form when W > 0 and the difference is well
    // conditioned.
    if (sx > 0.0) {
        const double kappa = sz2 / sx2;
        const double w = (b - a) / (kappa - 1.0);
        if (w > 0.0 && std::isfinite(kappa * w)) {
            const double big = nm::upper_inc_gamma_3_2_scaled(w);
            const double small = nm::upper_inc_gamma_3_2_scaled(kappa * w) * std::exp(-(b - a));
            const double diff = big - small;
            if (std::abs(diff) >= 1e-3 * std::max(std::abs(big), std::abs(small))) {
                return sx2 * sx / ds2 * std::exp(-a) * std::pow(w, -1.5) * diff;
            }
        }
    }

    // Close speeds: the s-form integrand is smooth on [0, 1] and avoids the
    // cancellation in (v^2 - sx^2) / ds2.
    if (std::abs(ds2) < 0.5 * std::max(sx2, sz2)) {
        auto f = [&](double s) { return std::sqrt((1.0 - s) * sx2 + s * sz2) * std::exp(-a - s * (b - a)); };
        return nm::integrate_finite(f, 0.0, 1.0, 1e-13, 16).value;
    }

    // Otherwise in v = sqrt((1-s) sx^2 + s sz^2) the integrand
    // 2 v^2 exp(...) is entire.
    const double lo = std::min(sx, sz);
    const double hi = std::max(sx, sz);
    auto f = [&](double v) { return 2.0 * v * v * std::exp(-a - (b - a) * (v * v - sx2) / ds2); };
    return nm::integrate_finite(f, lo, hi, 1e-13, 16).value / std::abs(ds2);
}

}  // namespace

bool nearly_equal(double a, double b, double tol) noexcept
{
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

// ---------------------------------------------------------------------------
// Direct
// ---------------------------------------------------------------------------

double op_direct(const Scenario& s)
{
    const auto d = derive(s);
    return rayleigh_cdf(d.thresholds.x0, s.gains.omega_x);
}

double aor_direct(const Scenario& s)
{
    require_mobility(s);
    const auto d = derive(s);
    return rayleigh_lcr(d.thresholds.x0, s.gains.omega_x, d.links.sigma2_x);
}

// ---------------------------------------------------------------------------
// AF
// ---------------------------------------------------------------------------

double af_op_integrand(double a, double g0, double c1, const LinkGains& g)
{
    const double oyz = g.omega_y * g.omega_z;
    const double beta = (g.omega_y + g.omega_z) / oyz;
    const double z = 2.0 * std::sqrt(a * (a + c1) / oyz);
    // 1 - z K1(z) exp(-beta a), split so that nothing cancels near a = 0.
    double bracket = -std::expm1(-beta * a);
    if (z > 0.0) {
        bracket += std::exp(-beta * a) * nm::one_minus_z_k1(z);
    }
    return std::exp(-(g0 * g0 - a) / g.omega_x) / g.omega_x * bracket;
}

double op_af(const Scenario& s, const AfOptions& opt)
{
    auto d = derive(s);
    if (opt.c1) {
        d.thresholds.c1 = *opt.c1;
    }
    const double g0 = d.thresholds.g0;
    if (g0 == 0.0) {
        return 0.0;
    }
    const double g02 = g0 * g0;
    auto f = [&](double u) {
        return af_op_integrand(g02 * stretch(u), g0, d.thresholds.c1, s.gains) * g02 * stretch_jacobian(u);
    };
    return outer_integral(f, opt.op_tol, opt.fixed_outer_order);
}

double af_aor_inner_integrand(double t, double a, const DerivedScenario& d, const LinkGains& g)
{
    const double g02 = d.thresholds.g0 * d.thresholds.g0;
    const double c1 = d.thresholds.c1;
    const auto& l = d.links;

    const double at1 = a * t + 1.0;
    const double act1 = (a + c1) * t + 1.0;
    const double ac = a + c1;
    const double var = (g02 - a) * l.sigma2_x + a * a * ac * ac * t * t * t / (at1 * act1 * act1) * l.sigma2_y +
                       a / (at1 * at1 * act1) * l.sigma2_z;
    const double weight = at1 * act1 / (t * t);
    return std::sqrt(std::max(var, 0.0)) * weight * std::exp(-(a * t * ac / g.omega_z + 1.0 / (t * g.omega_y)));
}

double af_aor_inner(double a, const DerivedScenario& d, const LinkGains& g, double tol)
{
    // Mass sits around t ~ 1/Oy (where exp(-1/(t Oy)) switches on) and on a
    // plateau reaching out to t ~ Oz / (a (a + C1)); it can span tens of
    // decades at small a, so integrate in ln t.
    const double q = 1.0 / g.omega_y;
    const double p = a * (a + d.thresholds.c1) / g.omega_z;
    const double saddle = std::sqrt(q / p);
    const double lo = std::min(q / 80.0, saddle / 50.0);
    const double hi = std::max(80.0 / p, 50.0 * saddle);
    auto f = [&](double t) { return af_aor_inner_integrand(t, a, d, g); };
    return nm::integrate_log_window(f, lo, hi, tol).value;
}

double aor_af(const Scenario& s, const AfOptions& opt)
{
    require_mobility(s);
    auto d = derive(s);
    if (opt.c1) {
        d.thresholds.c1 = *opt.c1;
    }
    const double g0 = d.thresholds.g0;
    if (g0 == 0.0) {
        return 0.0;
    }
    const auto& g = s.gains;
    const double g02 = g0 * g0;
    const double inner_tol = opt.inner_tol.value_or(0.1 * opt.aor_tol);
    const double rate = 1.0 / g.omega_y + 1.0 / g.omega_z;

    auto f = [&](double u) {
        const double a = g02 * stretch(u);
        const double decay = std::exp(-(g02 - a) / g.omega_x - a * rate);
        return decay * af_aor_inner(a, d, g, inner_tol) * g02 * stretch_jacobian(u);
    };
    const double prefactor = std::sqrt(2.0 / nm::kPi) / (g.omega_x * g.omega_y * g.omega_z);
    return prefactor * outer_integral(f, opt.aor_tol, opt.fixed_outer_order);
}

// ---------------------------------------------------------------------------
// U = sqrt(X^2 + Z^2) and the SR joint events
// ---------------------------------------------------------------------------

double prob_u_exceeds(double g, double ox, double oz)
{
    const double a = g * g / ox;
    if (nearly_equal(ox, oz)) {
        return std::exp(-a) * (1.0 + a);
    }
    // Ox/(Ox-Oz) e^-a + Oz/(Oz-Ox) e^-b  ==  e^-a + a * gap(a, b)
    const double b = g * g / oz;
    return std::exp(-a) + a * exp_gap(a, b);
}

double prob_u_at_most(double g, double ox, double oz)
{
    const double a = g * g / ox;
    const double b = g * g / oz;
    if (std::max(a, b) < kSmallArg) {
        return fixed_rule(0.0, 1.0, a, b);
    }
    return 1.0 - prob_u_exceeds(g, ox, oz);
}

double prob_direct_above_u_below(double g, double ox, double oz)
{
    const double a = g * g / ox;
    const double b = g * g / oz;
    if (std::max(a, b) < kSmallArg) {
        return fixed_rule(0.5, 1.0, a, b);
    }
    if (nearly_equal(ox, oz)) {
        return std::exp(-0.5 * a) - (g * g + 2.0 * ox) / (2.0 * ox) * std::exp(-a);
    }
    // e^{-a/2} - e^{-(a+b)/2} + Ox/(Oz-Ox) (e^{-a} - e^{-(a+b)/2})
    const double half = 0.5 * (a + b);
    return std::exp(-0.5 * a) * -std::expm1(-0.5 * b) - 0.5 * b * exp_gap(a, half);
}

double prob_direct_below_u_above(double g, double ox, double oz)
{
    const double a = g * g / ox;
    if (nearly_equal(ox, oz)) {
        return 0.5 * a * std::exp(-a);
    }
    // Oz/(Ox-Oz) [e^{-(a+b)/2} - e^{-b}]  ==  (a/2) gap((a+b)/2, b)
    const double b = g * g / oz;
    return 0.5 * a * exp_gap(0.5 * (a + b), b);
}

double lcr_u(double g, double ox, double oz, double sigma2_x, double sigma2_z)
{
    if (g == 0.0) {
        return 0.0;
    }
    const double sx = std::sqrt(sigma2_x);
    const double sz = std::sqrt(sigma2_z);
    if (sx == 0.0 && sz == 0.0) {
        return 0.0;
    }
    const double a = g * g / ox;
    const double prefactor = 2.0 * g * g * g / (std::sqrt(2.0 * nm::kPi) * ox * oz);

    if (nearly_equal(ox, oz)) {
        // (2/3)(sz^3 - sx^3)/(sz^2 - sx^2) written without the 0/0.
        const double mean = 2.0 / 3.0 * (sx * sx + sx * sz + sz * sz) / (sx + sz);
        return prefactor * std::exp(-a) * mean;
    }
    return prefactor * lcr_u_integral(a, g * g / oz, sx, sz);
}

// ---------------------------------------------------------------------------
// DF
// ---------------------------------------------------------------------------

double op_df(const Scenario& s)
{
    const auto d = derive(s);
    const double g0 = d.thresholds.g0;
    const auto& g = s.gains;
    // 1 - Pr{Y > G0} Pr{U > G0} = Pr{Y <= G0} + Pr{Y > G0} Pr{U <= G0}
    const double y_above = std::exp(-g0 * g0 / g.omega_y);
    return rayleigh_cdf(g0, g.omega_y) + y_above * prob_u_at_most(g0, g.omega_x, g.omega_z);
}

double aor_df(const Scenario& s)
{
    require_mobility(s);
    const auto d = derive(s);
    const double g0 = d.thresholds.g0;
    const auto& g = s.gains;
    const auto& l = d.links;
    const double n_y = rayleigh_lcr(g0, g.omega_y, l.sigma2_y);
    const double n_u = lcr_u(g0, g.omega_x, g.omega_z, l.sigma2_x, l.sigma2_z);
    return n_y * prob_u_exceeds(g0, g.omega_x, g.omega_z) + n_u * std::exp(-g0 * g0 / g.omega_y);
}

// ---------------------------------------------------------------------------
// SR
// ---------------------------------------------------------------------------

double op_sr(const Scenario& s)
{
    const auto d = derive(s);
    const double g0 = d.thresholds.g0;
    const double y0 = d.thresholds.y0;
    const auto& g = s.gains;
    const double y_below = rayleigh_cdf(y0, g.omega_y);
    const double y_above = std::exp(-y0 * y0 / g.omega_y);
    const double direct_below = rayleigh_cdf(g0 / std::sqrt(2.0), g.omega_x);
    return direct_below * y_below + prob_u_at_most(g0, g.omega_x, g.omega_z) * y_above;
}

SrAorTerms aor_sr_terms(const Scenario& s)
{
    require_mobility(s);
    const auto d = derive(s);
    const double g0 = d.thresholds.g0;
    const double y0 = d.thresholds.y0;
    const auto& g = s.gains;
    const auto& l = d.links;

    const double y_below = rayleigh_cdf(y0, g.omega_y);
    const double y_above = std::exp(-y0 * y0 / g.omega_y);
    const double n_y = rayleigh_lcr(y0, g.omega_y, l.sigma2_y);

    SrAorTerms t;
    t.direct_branch = rayleigh_lcr(g0 / std::sqrt(2.0), g.omega_x, l.sigma2_x) * y_below;
    t.relay_branch = lcr_u(g0, g.omega_x, g.omega_z, l.sigma2_x, l.sigma2_z) * y_above;
    t.switch_up = n_y * prob_direct_above_u_below(g0, g.omega_x, g.omega_z);
    t.switch_down = n_y * prob_direct_below_u_above(g0, g.omega_x, g.omega_z);
    return t;
}

double aor_sr(const Scenario& s) { return aor_sr_terms(s).total(); }

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

double op(const Scenario& s, Protocol p)
{
    switch (p) {
    case Protocol::Direct:
        return op_direct(s);
    case Protocol::AF:
        return op_af(s);
    case Protocol::DF:
        return op_df(s);
    case Protocol::SR:
        return op_sr(s);
    }
    throw ArgumentError("unknown protocol");
}

double aor(const Scenario& s, Protocol p)
{
    switch (p) {
    case Protocol::Direct:
        return aor_direct(s);
    case Protocol::AF:
        return aor_af(s);
    case Protocol::DF:
        return aor_df(s);
    case Protocol::SR:
        return aor_sr(s);
    }
    throw ArgumentError("unknown protocol");
}

OutageMetrics metrics(const Scenario& s, Protocol p)
{
    require_mobility(s);
    return make_metrics(op(s, p), aor(s, p));
}

}  // namespace coopout::exact
