#include <doctest.h>

#include <cmath>
#include <vector>

#include "coopout/numerics.hpp"
#include "special_oracles.hpp"

namespace nm = coopout::numerics;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::vector<double> log_grid(double lo, double hi, int n)
{
    std::vector<double> out;
    for (int i = 0; i < n; ++i) {
        out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    }
    return out;
}

}  // namespace

TEST_SUITE("bessel")
{
    TEST_CASE("small-argument anchors")
    {
        const double z = 1e-8;
        // K0(z) / -ln z tends to 1 only logarithmically (1.0063 at 1e-8);
        // the next term of the expansion is what pins it.
        CHECK(std::abs(nm::bessel_k0(z) / -std::log(z) - 1.0) < 1e-2);
        CHECK(std::abs(nm::bessel_k0(1e-300) / -std::log(1e-300) - 1.0) < 1e-3);
        CHECK(nm::bessel_k0(z) == doctest::Approx(-std::log(0.5 * z) - nm::kEulerGamma).epsilon(1e-14));
        CHECK(std::abs(z * nm::bessel_k1(z) - 1.0) < 1e-6);
    }

    TEST_CASE("pinned values")
    {
        CHECK(nm::bessel_k0(1.0) == doctest::Approx(oracle::k0(1.0)).epsilon(1e-12));
        CHECK(nm::bessel_k0(1.0) == doctest::Approx(0.42102443824070834).epsilon(1e-12));
        CHECK(nm::bessel_k1(1.0) == doctest::Approx(0.60190723019723457).epsilon(1e-12));
        CHECK(nm::bessel_k0(2.0) == doctest::Approx(0.11389387274953344).epsilon(1e-12));
        CHECK(nm::bessel_k1(5.0) > 0.0);
        CHECK(nm::bessel_k1(5.0) < nm::bessel_k1(1.0));
        CHECK(nm::bessel_k1(5.0) == doctest::Approx(oracle::k1(5.0)).epsilon(1e-12));
    }

    TEST_CASE("agree with integral representation on a log grid")
    {
        double worst0 = 0.0;
        double worst1 = 0.0;
        for (double z : log_grid(1e-6, 50.0, 161)) {
            worst0 = std::max(worst0, rel(nm::bessel_k0(z), oracle::k0(z)));
            worst1 = std::max(worst1, rel(nm::bessel_k1(z), oracle::k1(z)));
        }
        CHECK(worst0 < 1e-10);
        CHECK(worst1 < 1e-10);
    }

    TEST_CASE("scaled forms and the small-z complement")
    {
        for (double z : {0.3, 2.0, 2.5, 17.0}) {
            CHECK(nm::bessel_k0_scaled(z) == doctest::Approx(std::exp(z) * oracle::k0(z)).epsilon(1e-11));
            CHECK(nm::bessel_k1_scaled(z) == doctest::Approx(std::exp(z) * oracle::k1(z)).epsilon(1e-11));
        }
        for (double z : {1e-4, 0.01, 0.5, 1.9, 2.1, 6.0}) {
            const long double ref = 1.0L - z * oracle::bessel_k_integral(1, z);
            CHECK(nm::one_minus_z_k1(z) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-9));
        }
        // No cancellation: for tiny z the complement is ~ (z^2/2) ln(1/z).
        const double z = 1e-6;
        const double lead = 0.5 * z * z * (std::log(2.0 / z) - nm::kEulerGamma + 0.5);
        CHECK(nm::one_minus_z_k1(z) == doctest::Approx(lead).epsilon(1e-6));
    }

    TEST_CASE("domain and underflow")
    {
        CHECK_THROWS_AS(nm::bessel_k0(0.0), coopout::DomainError);
        CHECK_THROWS_AS(nm::bessel_k1(-1.0), coopout::DomainError);
        const auto k = nm::bessel_k0_flagged(800.0);
        CHECK(k.value == 0.0);
        CHECK(k.underflow);
        CHECK_FALSE(nm::bessel_k1_flagged(50.0).underflow);
    }
}

TEST_SUITE("incomplete gamma")
{
    TEST_CASE("anchors")
    {
        CHECK(nm::upper_inc_gamma_3_2(0.0) == doctest::Approx(0.5 * nm::kSqrtPi).epsilon(1e-15));
        CHECK(nm::upper_inc_gamma_3_2(1.0) == doctest::Approx(oracle::upper_gamma_3_2_series(1.0)).epsilon(1e-13));
        CHECK(nm::upper_inc_gamma_3_2(1.0) == doctest::Approx(0.50728223381177329).epsilon(1e-12));
        CHECK_THROWS_AS(nm::upper_inc_gamma_3_2(-0.1), coopout::DomainError);
    }

    TEST_CASE("series agreement and monotone decay")
    {
        double worst = 0.0;
        for (double x : log_grid(1e-8, 4.0, 101)) {
            worst = std::max(worst, rel(nm::upper_inc_gamma_3_2(x), oracle::upper_gamma_3_2_series(x)));
        }
        CHECK(worst < 1e-12);
        double last = nm::upper_inc_gamma_3_2(0.0);
        for (double x = 0.25; x < 800.0; x *= 1.5) {
            const double g = nm::upper_inc_gamma_3_2(x);
            CHECK(g < last);
            last = g;
            CHECK(nm::upper_inc_gamma_3_2_scaled(x) > 0.0);
        }
        CHECK(nm::upper_inc_gamma_3_2_scaled(400.0) == doctest::Approx(std::sqrt(400.0)).epsilon(2e-3));
    }

    TEST_CASE("erfc against the C library")
    {
        double worst = 0.0;
        for (double x = -5.0; x <= 25.0; x += 0.0625) {
            worst = std::max(worst, rel(nm::erfc(x), std::erfc(x)));
        }
        CHECK(worst < 1e-13);
        CHECK(nm::erfcx(30.0) == doctest::Approx(1.0 / (30.0 * nm::kSqrtPi) * (1.0 - 1.0 / 1800.0)).epsilon(1e-6));
    }

    TEST_CASE("expm1 over x")
    {
        CHECK(nm::expm1_over_x(0.0) == 1.0);
        CHECK(nm::expm1_over_x(1e-12) == doctest::Approx(1.0 + 5e-13).epsilon(1e-15));
        CHECK(nm::expm1_over_x(2.0) == doctest::Approx(std::expm1(2.0) / 2.0).epsilon(1e-15));
        CHECK(nm::expm1_over_x(-50.0) == doctest::Approx(1.0 / 50.0).epsilon(1e-15));
    }
}

TEST_SUITE("rules")
{
    TEST_CASE("two-point Legendre")
    {
        const auto r = nm::gauss_legendre(2, -1.0, 1.0);
        REQUIRE(r.order() == 2);
        CHECK(r.nodes()[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
        CHECK(r.nodes()[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
        CHECK(r.weights()[0] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(r.weights()[1] == doctest::Approx(1.0).epsilon(1e-15));
        const auto unit = nm::gauss_legendre(2, 0.0, 1.0);
        CHECK(std::abs(unit.apply([](double x) { return x * x * x; }) - 0.25) < 1e-14);
    }

    TEST_CASE("polynomial exactness up to degree 2n-1")
    {
        for (int n : {1, 3, 8, 17, 64, 200}) {
            const auto r = nm::gauss_legendre(n, -0.5, 2.0);
            for (int k = 0; k <= 2 * n - 1 && k <= 40; ++k) {
                const double exact = (std::pow(2.0, k + 1) - std::pow(-0.5, k + 1)) / (k + 1);
                const double got = r.apply([k](double x) { return std::pow(x, k); });
                CHECK(std::abs(got - exact) <= 1e-13 * std::max(1.0, std::abs(exact)));
            }
        }
    }

    TEST_CASE("exponential on [0,1] with 32 points")
    {
        const auto r = nm::gauss_legendre(32, 0.0, 1.0);
        CHECK(std::abs(r.apply([](double x) { return std::exp(-x); }) - (1.0 - std::exp(-1.0))) < 1e-13);
    }

    TEST_CASE("rule invariants")
    {
        for (int n : {1, 2, 5, 64, 1024}) {
            for (const auto& r : {nm::gauss_legendre(n, 0.0, 3.0), nm::mapped_legendre(n, 2.0)}) {
                for (int i = 0; i < r.order(); ++i) {
                    CHECK(r.weights()[i] > 0.0);
                    if (i > 0) {
                        CHECK(r.nodes()[i] > r.nodes()[i - 1]);
                    }
                }
            }
        }
        for (int n : {2, 16, 64, 128}) {
            const auto r = nm::gauss_laguerre(n);
            CHECK(r.kind() == nm::RuleKind::SemiInfiniteLaguerre);
            double sum = 0.0;
            for (int i = 0; i < r.order(); ++i) {
                sum += r.weights()[i];
                CHECK(r.weights()[i] > 0.0);
                if (i > 0) {
                    CHECK(r.nodes()[i] > r.nodes()[i - 1]);
                }
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
            // integral of exp(-t) t^3 = 6
            CHECK(r.apply([](double t) { return t * t * t; }) == doctest::Approx(6.0).epsilon(1e-12));
        }
    }

    TEST_CASE("argument errors")
    {
        CHECK_THROWS_AS(nm::gauss_legendre(0, 0.0, 1.0), coopout::ArgumentError);
        CHECK_THROWS_AS(nm::gauss_legendre(4, 1.0, 1.0), coopout::ArgumentError);
        CHECK_THROWS_AS(nm::gauss_legendre(4, 2.0, 1.0), coopout::ArgumentError);
        CHECK_THROWS_AS(nm::gauss_laguerre(0), coopout::ArgumentError);
    }
}

TEST_SUITE("integration")
{
    TEST_CASE("semi-infinite basics")
    {
        const auto e = nm::integrate_semi_infinite([](double t) { return std::exp(-t); }, 1e-12);
        CHECK(e.value == doctest::Approx(1.0).epsilon(1e-12));
        CHECK_FALSE(e.laguerre_disagrees);
        const auto h = nm::integrate_semi_infinite([](double t) { return std::exp(-t) / std::sqrt(t); }, 1e-10);
        CHECK(h.value == doctest::Approx(nm::kSqrtPi).epsilon(1e-10));
    }

    TEST_CASE("u^-1 exp(-(u + 1/u)) integrates to 2 K0(2)")
    {
        const auto r = nm::integrate_semi_infinite([](double u) { return std::exp(-(u + 1.0 / u)) / u; }, 1e-11);
        CHECK(r.value == doctest::Approx(2.0 * oracle::k0(2.0)).epsilon(1e-10));
        CHECK(r.value == doctest::Approx(2.0 * nm::bessel_k0(2.0)).epsilon(1e-10));
    }

    TEST_CASE("exp(-(u/p + q/u)) kernels on a parameter grid")
    {
        for (double p : {0.1, 1.0, 7.0}) {
            for (double q : {0.05, 1.0, 4.0}) {
                auto kernel = [p, q](double u) { return std::exp(-(u / p + q / u)); };
                const double arg = 2.0 * std::sqrt(q / p);
                const double scale = std::sqrt(p * q);
                const auto j1 = nm::integrate_semi_infinite(kernel, 1e-11, scale);
                CHECK(j1.value == doctest::Approx(2.0 * std::sqrt(p * q) * nm::bessel_k1(arg)).epsilon(1e-9));
                const auto j2 = nm::integrate_semi_infinite([&](double u) { return kernel(u) / u; }, 1e-11, scale);
                CHECK(j2.value == doctest::Approx(2.0 * nm::bessel_k0(arg)).epsilon(1e-9));
                const auto j3 = nm::integrate_semi_infinite([&](double u) { return kernel(u) / (u * u); }, 1e-11, scale);
                CHECK(j3.value == doctest::Approx(2.0 / std::sqrt(p * q) * nm::bessel_k1(arg)).epsilon(1e-9));
            }
        }
    }

    TEST_CASE("finite and log-window integration")
    {
        const auto f = nm::integrate_finite([](double x) { return std::sqrt(1.0 - x * x); }, -1.0, 1.0, 1e-8);
        CHECK(f.value == doctest::Approx(0.5 * nm::kPi).epsilon(1e-8));
        // Mass spread over ten decades.
        const auto g = nm::integrate_log_window([](double t) { return 1.0 / ((1.0 + t) * (1.0 + t)); }, 1e-8, 1e8, 1e-12);
        CHECK(g.value == doctest::Approx(1.0 / (1.0 + 1e-8) - 1.0 / (1.0 + 1e8)).epsilon(1e-11));
    }

    TEST_CASE("non-convergence carries both estimates")
    {
        try {
            (void)nm::integrate_finite([](double x) { return std::sin(1e6 * x) + 2.0; }, 0.0, 1.0, 1e-15);
            FAIL("expected ConvergenceError");
        } catch (const coopout::ConvergenceError& e) {
            CHECK(e.last_estimate() != e.previous_estimate());
            CHECK(std::isfinite(e.last_estimate()));
        }
        CHECK_THROWS_AS(nm::integrate_finite([](double) { return 1.0; }, 1.0, 0.0, 1e-8), coopout::ArgumentError);
    }
}
