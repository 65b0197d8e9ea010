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

#include "coopout/numerics.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace coopout::numerics {

namespace {

constexpr double kEps = 1e-17;
constexpr int kMaxIter = 10000;

// Ascending series, valid for 0 < z <= 2.
//   K0(z) = -(ln(z/2) + gamma) I0(z) + sum_{k>=1} H_k (z^2/4)^k / (k!)^2
double k0_series(double z)
{
    const double t = 0.25 * z * z;
    double term = 1.0;
    double i0 = 1.0;
    double harmonic = 0.0;
    double tail = 0.0;
    for (int k = 1; k < 200; ++k) {
        term *= t / (static_cast<double>(k) * k);
        harmonic += 1.0 / k;
        i0 += term;
        tail += harmonic * term;
        if (term * std::max(harmonic, 1.0) < kEps * std::abs(tail)) {
            break;
        }
    }
    return -(std::log(0.5 * z) + kEulerGamma) * i0 + tail;
}

// The two sums in the ascending series of K1:
//   K1(z) = 1/z + ln(z/2) (z/2) s1 - (z/4) s2
//   s1 = sum t^k / (k! (k+1)!),  s2 = sum [psi(k+1) + psi(k+2)] t^k / (k! (k+1)!)
struct K1Sums {
    double s1;
    double s2;
};

K1Sums k1_sums(double z)
{
    const double t = 0.25 * z * z;
    double term = 1.0;  // t^k / (k! (k+1)!)
    double h_k = 0.0;   // H_k
    double s1 = 1.0;
    double s2 = (h_k - kEulerGamma) + (1.0 - kEulerGamma);
    for (int k = 1; k < 200; ++k) {
        term *= t / (static_cast<double>(k) * (k + 1));
        h_k += 1.0 / k;
        const double psi_sum = (h_k - kEulerGamma) + (h_k + 1.0 / (k + 1) - kEulerGamma);
        s1 += term;
        s2 += psi_sum * term;
        if (term * std::max(std::abs(psi_sum), 1.0) < kEps * std::abs(s2)) {
            break;
        }
    }
    return {s1, s2};
}

double k1_series(double z)
{
    const auto [s1, s2] = k1_sums(z);
    return 1.0 / z + std::log(0.5 * z) * 0.5 * z * s1 - 0.25 * z * s2;
}

// Steed/Temme continued fraction for z > 2, giving exp(z) K0(z) and
// exp(z) K1(z) together.
struct ScaledK01 {
    double k0;
    double k1;
};

ScaledK01 k01_continued_fraction(double z)
{
    double b = 2.0 * (1.0 + z);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 1; i < kMaxIter; ++i) {
        a -= 2 * i;
        c = -a * c / (i + 1.0);
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < 1e-17) {
            break;
        }
    }
    h = a1 * h;
    const double k0 = std::sqrt(kPi / (2.0 * z)) / s;
    const double k1 = k0 * (z + 0.5 - h) / z;
    return {k0, k1};
}

void require_positive(double z, const char* name)
{
    if (!(z > 0.0)) {
        throw DomainError(std::string(name) + ": argument must be positive");
    }
}

FlaggedValue saturate(double scaled, double z)
{
    const double value = scaled * std::exp(-z);
    if (!(value >= DBL_MIN)) {
        return {0.0, true};
    }
    return {value, false};
}

}  // namespace

double bessel_k0_scaled(double z)
{
    require_positive(z, "bessel_k0");
    if (z <= 2.0) {
        return std::exp(z) * k0_series(z);
    }
    return k01_continued_fraction(z).k0;
}

double bessel_k1_scaled(double z)
{
    require_positive(z, "bessel_k1");
    if (z <= 2.0) {
        return std::exp(z) * k1_series(z);
    }
    return k01_continued_fraction(z).k1;
}

FlaggedValue bessel_k0_flagged(double z)
{
    require_positive(z, "bessel_k0");
    if (z <= 2.0) {
        return {k0_series(z), false};
    }
    return saturate(k01_continued_fraction(z).k0, z);
}

FlaggedValue bessel_k1_flagged(double z)
{
    require_positive(z, "bessel_k1");
    if (z <= 2.0) {
        return {k1_series(z), false};
    }
    return saturate(k01_continued_fraction(z).k1, z);
}

double bessel_k0(double z) { return bessel_k0_flagged(z).value; }

double bessel_k1(double z) { return bessel_k1_flagged(z).value; }

double one_minus_z_k1(double z)
{
    require_positive(z, "one_minus_z_k1");
    if (z <= 2.0) {
        const auto [s1, s2] = k1_sums(z);
        return 0.25 * z * z * (s2 - 2.0 * std::log(0.5 * z) * s1);
    }
    return 1.0 - z * bessel_k1(z);
}

// erfc: positive-term series of erf for |x| < 2, Lentz continued fraction
// for the scaled function beyond.
namespace {

// erf(x) * exp(x^2) * sqrt(pi) / 2 = sum 2^n x^(2n+1) / (2n+1)!!
double erf_series_scaled(double x)
{
    const double two_x2 = 2.0 * x * x;
    double term = x;
    double sum = x;
    for (int n = 1; n < 500; ++n) {
        term *= two_x2 / (2 * n + 1);
        sum += term;
        if (term < kEps * sum) {
            break;
        }
    }
    return sum;
}

// exp(x^2) erfc(x) for x >= 2 via
//   erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
double erfcx_continued_fraction(double x)
{
    constexpr double kTiny = 1e-300;
    double f = x;
    double c = f;
    double d = 0.0;
    for (int k = 1; k < kMaxIter; ++k) {
        const double a = 0.5 * k;
        d = x + a * d;
        if (d == 0.0) {
            d = kTiny;
        }
        c = x + a / c;
        if (c == 0.0) {
            c = kTiny;
        }
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) {
            break;
        }
    }
    return 1.0 / (kSqrtPi * f);
}

}  // namespace

double erfcx(double x)
{
    if (x < 0.0) {
        return 2.0 * std::exp(x * x) - erfcx(-x);
    }
    if (x < 2.0) {
        const double ex2 = std::exp(x * x);
        return ex2 - 2.0 / kSqrtPi * erf_series_scaled(x);
    }
    return erfcx_continued_fraction(x);
}

double erfc(double x)
{
    if (x < 0.0) {
        return 2.0 - erfc(-x);
    }
    if (x < 2.0) {
        return 1.0 - 2.0 / kSqrtPi * std::exp(-x * x) * erf_series_scaled(x);
    }
    return std::exp(-x * x) * erfcx_continued_fraction(x);
}

double upper_inc_gamma_3_2(double x)
{
    if (!(x >= 0.0)) {
        throw DomainError("upper_inc_gamma_3_2: argument must be nonnegative");
    }
    const double r = std::sqrt(x);
    return 0.5 * kSqrtPi * erfc(r) + r * std::exp(-x);
}

double upper_inc_gamma_3_2_scaled(double x)
{
    if (!(x >= 0.0)) {
        throw DomainError("upper_inc_gamma_3_2: argument must be nonnegative");
    }
    const double r = std::sqrt(x);
    return 0.5 * kSqrtPi * erfcx(r) + r;
}

double expm1_over_x(double x)
{
    if (x == 0.0) {
        return 1.0;
    }
    return std::expm1(x) / x;
}

// ---------------------------------------------------------------------------
// Rules
// ---------------------------------------------------------------------------

QuadratureRule::QuadratureRule(RuleKind kind, std::vector<double> nodes, std::vector<double> weights)
    : kind_(kind), nodes_(std::move(nodes)), weights_(std::move(weights))
{
    if (nodes_.empty() || nodes_.size() != weights_.size()) {
        throw ArgumentError("QuadratureRule: nodes and weights must be nonempty and equal in size");
    }
}

namespace {

// Newton iteration on the Legendre recurrence; nodes ascending on [-1, 1].
QuadratureRule build_legendre(int n)
{
    std::vector<double> x(n);
    std::vector<double> w(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0;
            double p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) {
                break;
            }
        }
        const double weight = 2.0 / ((1.0 - z * z) * pp * pp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = weight;
        w[n - 1 - i] = weight;
    }
    if (n % 2 == 1) {
        x[n / 2] = 0.0;
    }
    return QuadratureRule(RuleKind::FiniteLegendre, std::move(x), std::move(w));
}

// Newton iteration on the Laguerre recurrence with the usual asymptotic
// starting guesses. Carried in long double: the large nodes sit where the
// recurrence loses a few digits, and the weights inherit that loss.
QuadratureRule build_laguerre(int n)
{
    std::vector<double> x(n);
    std::vector<double> w(n);
    std::vector<long double> xl(n);
    long double z = 0.0L;
    for (int i = 0; i < n; ++i) {
        if (i == 0) {
            z = 3.0L / (1.0L + 2.4L * n);
        } else if (i == 1) {
            z += 15.0L / (1.0L + 2.5L * n);
        } else {
            const long double ai = i - 1;
            z += ((1.0L + 2.55L * ai) / (1.9L * ai)) * (z - xl[i - 2]);
        }
        long double pp = 0.0L;
        long double p2 = 0.0L;
        for (int iter = 0; iter < 200; ++iter) {
            long double p1 = 1.0L;
            p2 = 0.0L;
            for (int j = 1; j <= n; ++j) {
                const long double p3 = p2;
                p2 = p1;
                p1 = ((2.0L * j - 1.0L - z) * p2 - (j - 1.0L) * p3) / j;
            }
            pp = (n * p1 - n * p2) / z;
            const long double z1 = z;
            z = z1 - p1 / pp;
            if (std::fabs(z - z1) <= 1e-18L * std::max(1.0L, std::fabs(z))) {
                break;
            }
        }
        xl[i] = z;
        x[i] = static_cast<double>(z);
        w[i] = static_cast<double>(-1.0L / (pp * n * p2));
    }
    return QuadratureRule(RuleKind::SemiInfiniteLaguerre, std::move(x), std::move(w));
}

template <class Builder>
const QuadratureRule& cached(std::map<int, std::unique_ptr<QuadratureRule>>& cache, std::mutex& mutex, int order,
                             Builder build)
{
    std::lock_guard lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) {
        it = cache.emplace(order, std::make_unique<QuadratureRule>(build(order))).first;
    }
    return *it->second;
}

void require_order(int order)
{
    if (order < 1) {
        throw ArgumentError("quadrature order must be at least 1");
    }
}

}  // namespace

const QuadratureRule& legendre_reference(int order)
{
    require_order(order);
    static std::map<int, std::unique_ptr<QuadratureRule>> cache;
    static std::mutex mutex;
    return cached(cache, mutex, order, build_legendre);
}

const QuadratureRule& laguerre_reference(int order)
{
    require_order(order);
    static std::map<int, std::unique_ptr<QuadratureRule>> cache;
    static std::mutex mutex;
    return cached(cache, mutex, order, build_laguerre);
}

QuadratureRule gauss_legendre(int order, double a, double b)
{
    require_order(order);
    if (!(a < b)) {
        throw ArgumentError("gauss_legendre: need a < b");
    }
    const auto& ref = legendre_reference(order);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    std::vector<double> x(ref.nodes().begin(), ref.nodes().end());
    std::vector<double> w(ref.weights().begin(), ref.weights().end());
    for (int i = 0; i < order; ++i) {
        x[i] = mid + half * x[i];
        w[i] *= half;
    }
    return QuadratureRule(RuleKind::FiniteLegendre, std::move(x), std::move(w));
}

QuadratureRule gauss_laguerre(int order) { return laguerre_reference(order); }

QuadratureRule mapped_legendre(int order, double scale)
{
    require_order(order);
    if (!(scale > 0.0)) {
        throw ArgumentError("mapped_legendre: scale must be positive");
    }
    const auto& ref = legendre_reference(order);
    std::vector<double> x(order);
    std::vector<double> w(order);
    for (int i = 0; i < order; ++i) {
        const double v = 0.5 * (ref.nodes()[i] + 1.0);
        const double den = 1.0 - v * v;
        x[i] = scale * v * v / den;
        w[i] = 0.5 * ref.weights()[i] * scale * 2.0 * v / (den * den);
    }
    return QuadratureRule(RuleKind::MappedLegendre, std::move(x), std::move(w));
}

}  // namespace coopout::numerics
