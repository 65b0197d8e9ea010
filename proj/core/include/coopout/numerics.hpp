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
 * @file numerics.hpp
 * @brief Special functions and Gauss quadrature used by the outage formulas.
 *
 * Only what the closed forms need: K0, K1, erfc, the upper incomplete gamma
 * function of order 3/2, and Gauss-Legendre / Gauss-Laguerre rules built
 * from the three-term recurrences by Newton iteration.
 *
 * Everything here is a pure function. Rules are immutable once built and the
 * reference Legendre rules are cached process-wide behind a mutex.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "coopout/errors.hpp"

namespace coopout::numerics {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrtPi = 1.77245385090551602730;
inline constexpr double kEulerGamma = 0.57721566490153286061;

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

/// A function value that may have been saturated to zero on underflow.
struct FlaggedValue {
    double value = 0.0;
    bool underflow = false;
};

/// Modified Bessel function of the second kind, order 0. Throws DomainError
/// for z <= 0; results below the smallest normal double saturate to 0.
double bessel_k0(double z);
/// Modified Bessel function of the second kind, order 1.
double bessel_k1(double z);

FlaggedValue bessel_k0_flagged(double z);
FlaggedValue bessel_k1_flagged(double z);

/// exp(z) * K0(z); never underflows.
double bessel_k0_scaled(double z);
/// exp(z) * K1(z); never underflows.
double bessel_k1_scaled(double z);

/// 1 - z*K1(z), free of cancellation for small z (where z*K1(z) -> 1).
double one_minus_z_k1(double z);

/// Complementary error function.
double erfc(double x);
/// Scaled complementary error function exp(x^2) * erfc(x).
double erfcx(double x);

/// Upper incomplete gamma function Gamma(3/2, x) for x >= 0, evaluated as
/// (sqrt(pi)/2) erfc(sqrt(x)) + sqrt(x) exp(-x).
double upper_inc_gamma_3_2(double x);
/// exp(x) * Gamma(3/2, x).
double upper_inc_gamma_3_2_scaled(double x);

/// expm1(x)/x with the removable singularity at 0 filled in.
double expm1_over_x(double x);

// ---------------------------------------------------------------------------
// Quadrature rules
// ---------------------------------------------------------------------------

enum class RuleKind {
    FiniteLegendre,       // integrates f over [a, b]
    SemiInfiniteLaguerre, // integrates exp(-t) f(t) over [0, inf)
    MappedLegendre,       // integrates f over [0, inf) via an algebraic map
};

class QuadratureRule {
public:
    QuadratureRule(RuleKind kind, std::vector<double> nodes, std::vector<double> weights);

    RuleKind kind() const noexcept { return kind_; }
    int order() const noexcept { return static_cast<int>(nodes_.size()); }
    std::span<const double> nodes() const noexcept { return nodes_; }
    std::span<const double> weights() const noexcept { return weights_; }

    /// Weighted sum of f over the nodes. For a Laguerre rule this is the
    /// approximation of the integral of exp(-t) f(t).
    template <class F>
    double apply(F&& f) const
    {
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            sum += weights_[i] * f(nodes_[i]);
        }
        return sum;
    }

private:
    RuleKind kind_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// Gauss-Legendre rule of the given order on [a, b]. Throws ArgumentError for
/// order < 1 or a >= b.
QuadratureRule gauss_legendre(int order, double a, double b);

/// Gauss-Laguerre rule (weight exp(-t) on [0, inf)).
QuadratureRule gauss_laguerre(int order);

/// Gauss-Legendre rule mapped onto [0, inf) by t = scale * v^2 / (1 - v^2),
/// v in (0, 1). The weights absorb the Jacobian.
QuadratureRule mapped_legendre(int order, double scale = 1.0);

/// Cached Gauss-Legendre rule on [-1, 1]. The reference stays valid for the
/// lifetime of the process.
const QuadratureRule& legendre_reference(int order);
/// Cached Gauss-Laguerre rule.
const QuadratureRule& laguerre_reference(int order);

inline constexpr int kDefaultOrder = 64;
inline constexpr int kMaxOrder = 1024;

// ---------------------------------------------------------------------------
// Adaptive integration
// ---------------------------------------------------------------------------

struct IntegralResult {
    double value = 0.0;
    double previous = 0.0;     // estimate at half the final order
    int order = 0;             // final rule order
    double laguerre = 0.0;     // Gauss-Laguerre cross-check (semi-infinite only)
    bool laguerre_disagrees = false;
};

namespace detail {

inline bool converged(double current, double previous, double tol)
{
    const double diff = std::abs(current - previous);
    return diff <= tol * std::abs(current) || (current == 0.0 && previous == 0.0);
}

}  // namespace detail

/// Integral of f over [a, b] by Gauss-Legendre with order doubling from
/// `start_order` until successive estimates agree to `tol` (relative).
/// Throws ConvergenceError past kMaxOrder.
template <class F>
IntegralResult integrate_finite(F&& f, double a, double b, double tol, int start_order = kDefaultOrder)
{
    if (!(a < b)) {
        throw ArgumentError("integrate_finite: empty interval");
    }
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    auto estimate = [&](int order) {
        const auto& rule = legendre_reference(order);
        return half * rule.apply([&](double x) { return f(mid + half * x); });
    };

    int order = start_order;
    double previous = estimate(order);
    double older = previous;
    while (order < kMaxOrder) {
        order *= 2;
        const double current = estimate(order);
        if (detail::converged(current, previous, tol)) {
            return IntegralResult{current, previous, order, 0.0, false};
        }
        older = previous;
        previous = current;
    }
    throw ConvergenceError("integrate_finite: no convergence at order cap", previous, older);
}

/// Integral of f over (0, inf). Nodes come from a Gauss-Legendre rule mapped
/// by t = scale * v^2 / (1 - v^2); the order doubles until successive
/// estimates differ by less than `tol`. A 64-point Gauss-Laguerre estimate is
/// recorded alongside and flagged when it differs by more than 10 * tol.
template <class F>
IntegralResult integrate_semi_infinite(F&& f, double tol, double scale = 1.0)
{
    if (!(scale > 0.0)) {
        throw ArgumentError("integrate_semi_infinite: scale must be positive");
    }
    auto estimate = [&](int order) {
        const auto& rule = legendre_reference(order);
        double sum = 0.0;
        const auto x = rule.nodes();
        const auto w = rule.weights();
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double v = 0.5 * (x[i] + 1.0);
            const double v2 = v * v;
            const double den = 1.0 - v2;
            const double t = scale * v2 / den;
            const double jac = scale * 2.0 * v / (den * den);
            sum += 0.5 * w[i] * jac * f(t);
        }
        return sum;
    };

    int order = kDefaultOrder;
    double previous = estimate(order);
    double older = previous;
    while (order < kMaxOrder) {
        order *= 2;
        const double current = estimate(order);
        if (detail::converged(current, previous, tol)) {
            IntegralResult result{current, previous, order, 0.0, false};
            const auto& laguerre = laguerre_reference(kDefaultOrder);
            result.laguerre = scale * laguerre.apply([&](double x) { return std::exp(x) * f(scale * x); });
            result.laguerre_disagrees = std::abs(result.laguerre - current) > 10.0 * tol * std::abs(current);
            return result;
        }
        older = previous;
        previous = current;
    }
    throw ConvergenceError("integrate_semi_infinite: no convergence at order cap", previous, older);
}

/// Integral of f over [lo, hi] (0 < lo < hi) in the variable s = ln t, split
/// into unit-width panels with a Gauss-Legendre rule on each. The per-panel
/// order doubles from 8 until the composite estimate settles to `tol`.
/// Suited to integrands whose mass is spread over many decades of t.
template <class F>
IntegralResult integrate_log_window(F&& f, double lo, double hi, double tol)
{
    if (!(lo > 0.0 && lo < hi)) {
        throw ArgumentError("integrate_log_window: need 0 < lo < hi");
    }
    const double s_lo = std::log(lo);
    const double s_hi = std::log(hi);
    const int panels = std::max(1, static_cast<int>(std::ceil(s_hi - s_lo)));
    const double width = (s_hi - s_lo) / panels;

    auto estimate = [&](int order) {
        const auto& rule = legendre_reference(order);
        const auto x = rule.nodes();
        const auto w = rule.weights();
        double sum = 0.0;
        for (int p = 0; p < panels; ++p) {
            const double mid = s_lo + (p + 0.5) * width;
            double panel = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double t = std::exp(mid + 0.5 * width * x[i]);
                panel += w[i] * t * f(t);
            }
            sum += 0.5 * width * panel;
        }
        return sum;
    };

    constexpr int kCap = 256;
    int order = 8;
    double previous = estimate(order);
    double older = previous;
    while (order < kCap) {
        order *= 2;
        const double current = estimate(order);
        if (detail::converged(current, previous, tol)) {
            return IntegralResult{current, previous, order, 0.0, false};
        }
        older = previous;
        previous = current;
    }
    throw ConvergenceError("integrate_log_window: no convergence at order cap", previous, older);
}

}  // namespace coopout::numerics
