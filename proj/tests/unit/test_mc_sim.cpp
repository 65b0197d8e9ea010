#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "coopout/errors.hpp"
#include "coopout/mc_sim.hpp"
#include "coopout/rng.hpp"

using namespace coopout;
using namespace coopout::mc;

namespace {

TraceConfig small_cfg(std::uint64_t n, int realizations = 1)
{
    TraceConfig c;
    c.n_samples = n;
    c.n_realizations = realizations;
    return c;
}

EmpiricalMetrics pooled_link(double omega, double f_tx, double f_rx, double level, const TraceConfig& c)
{
    std::vector<EmpiricalMetrics> parts;
    for (int r = 0; r < c.n_realizations; ++r) {
        const auto t = gen_m2m_rayleigh(omega, f_tx, f_rx, c, {static_cast<std::uint32_t>(r), 0});
        parts.push_back(estimate(t, level));
    }
    return merge(parts);
}

}  // namespace

TEST_SUITE("rng")
{
    TEST_CASE("Philox4x32-10 known answers")
    {
        using B = Philox4x32::Block;
        CHECK(Philox4x32::apply({0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
        CHECK(Philox4x32::apply({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}) ==
              B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
        CHECK(Philox4x32::apply({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
              B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
    }

    TEST_CASE("streams")
    {
        Stream a(7, 0, 0);
        Stream b(7, 0, 0);
        Stream c(7, 1, 0);
        Stream d(7, 0, 1);
        int same_c = 0;
        int same_d = 0;
        for (int i = 0; i < 100; ++i) {
            const auto x = a.next_u32();
            CHECK(x == b.next_u32());
            same_c += x == c.next_u32();
            same_d += x == d.next_u32();
        }
        CHECK(same_c < 3);
        CHECK(same_d < 3);

        Stream s(123, 4, 5);
        const int n = 200000;
        double m1 = 0.0, m2 = 0.0, n1 = 0.0, n2 = 0.0, n4 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double u = s.uniform();
            REQUIRE(u >= 0.0);
            REQUIRE(u < 1.0);
            m1 += u;
            m2 += u * u;
            const double z = s.normal();
            n1 += z;
            n2 += z * z;
            n4 += z * z * z * z;
        }
        CHECK(m1 / n == doctest::Approx(0.5).epsilon(0.01));
        CHECK(m2 / n == doctest::Approx(1.0 / 3.0).epsilon(0.01));
        CHECK(std::abs(n1 / n) < 0.01);
        CHECK(n2 / n == doctest::Approx(1.0).epsilon(0.01));
        CHECK(n4 / n == doctest::Approx(3.0).epsilon(0.03));
    }
}

TEST_SUITE("traces")
{
    TEST_CASE("configuration checks")
    {
        TraceConfig c;
        CHECK_NOTHROW(mc::validate(c));
        c.oversampling = 8;
        CHECK_THROWS_AS(mc::validate(c), ArgumentError);
        c = {};
        c.n_sinusoids = 8;
        CHECK_THROWS_AS(mc::validate(c), ArgumentError);
        c.n_sinusoids = 33;
        CHECK_THROWS_AS(mc::validate(c), ArgumentError);
        c = {};
        c.n_samples = 0;
        CHECK_THROWS_AS(mc::validate(c), ArgumentError);
        CHECK_THROWS_AS(gen_m2m_rayleigh(1.0, 0.0, 0.0, small_cfg(16)), StaticLinkError);
        CHECK_THROWS_AS(gen_m2m_rayleigh(0.0, 1.0, 0.0, small_cfg(16)), DomainError);
        CHECK_THROWS_AS(gen_m2m_rayleigh(1.0, -1.0, 2.0, small_cfg(16)), DomainError);
    }

    TEST_CASE("sample spacing and determinism")
    {
        const auto c = small_cfg(5000);
        const auto a = gen_m2m_rayleigh(2.0, 1.0, 0.5, c, {3, 1});
        const auto b = gen_m2m_rayleigh(2.0, 1.0, 0.5, c, {3, 1});
        CHECK(a.dt == doctest::Approx(1.0 / (64 * 1.5)));
        CHECK(a.samples == b.samples);
        const auto other = gen_m2m_rayleigh(2.0, 1.0, 0.5, c, {4, 1});
        CHECK(a.samples != other.samples);
        CHECK(std::all_of(a.samples.begin(), a.samples.end(), [](double v) { return v >= 0.0; }));
        CHECK(gen_m2m_rayleigh(2.0, 1.0, 0.5, c, {}, 0.01).dt == 0.01);
    }

    TEST_CASE("recursive rotation matches direct evaluation")
    {
        // The envelope at the start of a refresh block is computed from
        // scratch; the sample just before it comes from 1023 rotations.
        auto c = small_cfg(3 * kRefreshInterval);
        const auto h = gen_m2m_complex(1.0, 1.0, 1.0, c);
        c.n_samples = kRefreshInterval + 1;
        const auto h2 = gen_m2m_complex(1.0, 1.0, 1.0, c);
        CHECK(std::abs(h[kRefreshInterval - 1] - h2[kRefreshInterval - 1]) == 0.0);
        // Smoothness across the refresh boundary: a second difference of a
        // band-limited signal at 64x oversampling is tiny.
        const std::size_t k = 2 * kRefreshInterval;
        const auto dd = h[k + 1] - 2.0 * h[k] + h[k - 1];
        CHECK(std::abs(dd) < 0.01);
    }

    TEST_CASE("mean-square envelope")
    {
        // 4096 realizations x 256 samples = 1,048,576 samples.
        const auto c = small_cfg(256, 4096);
        double sum = 0.0;
        std::uint64_t n = 0;
        for (int r = 0; r < c.n_realizations; ++r) {
            const auto t = gen_m2m_rayleigh(2.5, 1.0, 0.3, c, {static_cast<std::uint32_t>(r), 2});
            for (double v : t.samples) {
                sum += v * v;
                ++n;
            }
        }
        CHECK(sum / n == doctest::Approx(2.5).epsilon(0.01));
    }

    TEST_CASE("envelope distribution: Kolmogorov-Smirnov at 0.01")
    {
        const int n = 1000000;
        const double omega = 1.7;
        auto c = small_cfg(16, n);
        std::vector<double> v(n);
        for (int r = 0; r < n; ++r) {
            v[r] = gen_m2m_rayleigh(omega, 1.0, 1.0, c, {static_cast<std::uint32_t>(r), 0}).samples.back();
        }
        std::sort(v.begin(), v.end());
        double dmax = 0.0;
        for (int i = 0; i < n; ++i) {
            const double f = rayleigh_cdf(v[i], omega);
            dmax = std::max({dmax, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
        }
        CHECK(dmax < 1.6276 / std::sqrt(static_cast<double>(n)));
    }

    TEST_CASE("single-mobile autocorrelation is omega J0")
    {
        const double omega = 1.0;
        const double f = 1.0;
        auto c = small_cfg(8192, 400);
        const std::size_t max_lag = 128;  // 2 / f at 64 samples per 1 / f
        std::vector<double> acc(max_lag + 1, 0.0);
        std::size_t count = 0;
        for (int r = 0; r < c.n_realizations; ++r) {
            const auto h = gen_m2m_complex(omega, f, 0.0, c, {static_cast<std::uint32_t>(r), 0});
            const std::size_t m = h.size() - max_lag;
            for (std::size_t lag = 0; lag <= max_lag; ++lag) {
                std::complex<double> s = 0.0;
                for (std::size_t k = 0; k < m; ++k) {
                    s += h[k + lag] * std::conj(h[k]);
                }
                acc[lag] += s.real() / static_cast<double>(m);
            }
            ++count;
        }
        const double dt = 1.0 / (64 * f);
        double sq = 0.0;
        for (std::size_t lag = 0; lag <= max_lag; ++lag) {
            const double target = omega * std::cyl_bessel_j(0.0, 2 * std::numbers::pi * f * lag * dt);
            const double e = acc[lag] / count - target;
            sq += e * e;
        }
        CHECK(std::sqrt(sq / (max_lag + 1)) / omega < 0.02);
    }

    TEST_CASE("level-crossing rate at sqrt(omega)")
    {
        // 320 x 32768 = 1.05e7 samples.
        const auto c = small_cfg(32768, 320);
        const double omega = 1.0;
        const auto m = pooled_link(omega, 1.0, 0.6, std::sqrt(omega), c);
        const double exact = rayleigh_lcr(1.0, omega, derivative_variance(omega, 1.0, 0.6));
        CHECK(std::abs(m.aor / exact - 1.0) < 0.03);
    }

    TEST_CASE("static fallback")
    {
        const auto t = static_link_trace(2.0, 0.1, small_cfg(100), {5, 2});
        CHECK(t.samples.size() == 100);
        CHECK(std::all_of(t.samples.begin(), t.samples.end(), [&](double v) { return v == t.samples[0]; }));
        const auto m = estimate(t, t.samples[0] * 2);
        CHECK(m.p_out == 1.0);
        CHECK(m.n_down_crossings == 0);
        CHECK_THROWS_AS(static_link_trace(2.0, 0.0, small_cfg(100)), DomainError);
    }
}

TEST_SUITE("gains and estimator")
{
    TEST_CASE("equivalent gains")
    {
        Thresholds t;
        t.c1 = 0.0;
        t.y0 = 0.2;
        CHECK(equivalent_gain(Protocol::AF, 0.7, 0.4, 0.0, t) == doctest::Approx(0.7).epsilon(1e-15));
        CHECK(equivalent_gain(Protocol::AF, 0.0, 1.0, 1.0, t) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
        t.c1 = 1.0;
        CHECK(equivalent_gain(Protocol::AF, 0.0, 1.0, 1.0, t) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-15));
        CHECK(equivalent_gain(Protocol::SR, 1.0, 0.1, 5.0, t) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
        CHECK(equivalent_gain(Protocol::SR, 1.0, 0.3, 1.0, t) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
        CHECK(equivalent_gain(Protocol::DF, 3.0, 0.5, 4.0, t) == 0.5);
        CHECK(equivalent_gain(Protocol::DF, 0.3, 2.0, 0.4, t) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(equivalent_gain(Protocol::Direct, 0.3, 2.0, 0.4, t) == 0.3);
        t.c1 = 0.0;
        CHECK(equivalent_gain(Protocol::AF, 0.5, 0.0, 0.0, t) == 0.5);
    }

    TEST_CASE("constant trace below the threshold")
    {
        const FadingTrace t{0.5, std::vector<double>(10, 0.1)};
        const auto m = estimate(t, 1.0);
        CHECK(m.p_out == 1.0);
        CHECK(m.n_down_crossings == 0);
        CHECK(m.aor == 0.0);
        CHECK_FALSE(m.aod.has_value());
        CHECK(m.window == 5.0);
        CHECK_THROWS_AS(estimate(FadingTrace{0.5, {}}, 1.0), ArgumentError);
        CHECK_THROWS_AS(estimate(t, -1.0), DomainError);
    }

    TEST_CASE("sinusoid with a known number of down-crossings")
    {
        // 1 + 0.5 sin(2 pi 3 t) over [0, 2) crosses 1.2 downward six times.
        const int n = 20000;
        FadingTrace t{2.0 / n, {}};
        for (int k = 0; k < n; ++k) {
            t.samples.push_back(1.0 + 0.5 * std::sin(2 * std::numbers::pi * 3 * k * t.dt));
        }
        const auto m = estimate(t, 1.2);
        CHECK(m.n_down_crossings == 6);
        CHECK(m.aor == doctest::Approx(6.0 / (n * t.dt)).epsilon(1e-15));
        REQUIRE(m.aod.has_value());
        CHECK(*m.aod * m.aor == doctest::Approx(m.p_out).epsilon(1e-15));
        // Touching the level from above is not a crossing.
        const FadingTrace touch{1.0, {2.0, 1.0, 2.0, 1.0}};
        CHECK(estimate(touch, 1.0).n_down_crossings == 0);
    }

    TEST_CASE("single-link outage matches the Rayleigh formulas")
    {
        const auto c = small_cfg(32768, 160);
        const double omega = 1.3;
        const double x0 = 0.4;
        const auto m = pooled_link(omega, 1.0, 1.0, x0, c);
        CHECK(std::abs(m.p_out / rayleigh_cdf(x0, omega) - 1.0) < 0.05);
        CHECK(std::abs(m.aor / rayleigh_lcr(x0, omega, derivative_variance(omega, 1.0, 1.0)) - 1.0) < 0.10);
        CHECK(m.se_p_out > 0.0);
        CHECK(m.se_aor > 0.0);
        CHECK(m.se_aod > 0.0);
    }

    TEST_CASE("merge pools counts")
    {
        EmpiricalMetrics a;
        a.n_samples = 100;
        a.n_below = 10;
        a.n_down_crossings = 2;
        a.window = 1.0;
        EmpiricalMetrics b = a;
        b.n_below = 30;
        b.n_down_crossings = 6;
        a.p_out = 0.1;
        a.aor = 2.0;
        b.p_out = 0.3;
        b.aor = 6.0;
        const EmpiricalMetrics parts[] = {a, b};
        const auto m = merge(parts);
        CHECK(m.n_samples == 200);
        CHECK(m.p_out == 0.2);
        CHECK(m.aor == 4.0);
        CHECK(*m.aod == doctest::Approx(0.05));
        CHECK(m.se_p_out == doctest::Approx(0.1));
        CHECK(m.se_aor == doctest::Approx(2.0));
    }
}

TEST_SUITE("composition")
{
    TEST_CASE("SR trace uses the direct path while the relay is off")
    {
        const auto c = small_cfg(20000);
        Scenario s;
        s.gamma0 = 10.0;
        s.dopplers = {1.0, 1.0, 1.0};
        const auto d = derive(s);
        const double dt = scenario_dt(s, c);
        const auto x = gen_m2m_rayleigh(1.0, 1.0, 1.0, c, {0, 0}, dt);
        const auto y = gen_m2m_rayleigh(1.0, 1.0, 1.0, c, {0, 1}, dt);
        const auto z = gen_m2m_rayleigh(1.0, 1.0, 1.0, c, {0, 2}, dt);
        const auto g = compose(Protocol::SR, x, y, z, d.thresholds);
        for (std::size_t k = 0; k < g.samples.size(); ++k) {
            if (y.samples[k] <= d.thresholds.y0) {
                REQUIRE(g.samples[k] == std::sqrt(2.0) * x.samples[k]);
            } else {
                REQUIRE(g.samples[k] == doctest::Approx(std::hypot(x.samples[k], z.samples[k])).epsilon(1e-15));
            }
        }
        const auto counts = classify_sr_crossings(x, y, z, d.thresholds);
        CHECK(counts.total() == estimate(g, d.thresholds.g0).n_down_crossings);
        CHECK(counts.total() > 0);

        auto shorter = z;
        shorter.samples.pop_back();
        CHECK_THROWS_AS(compose(Protocol::AF, x, y, shorter, d.thresholds), ArgumentError);
    }

    TEST_CASE("validation run is deterministic and self-consistent")
    {
        Scenario s;
        s.gamma0 = 10.0;
        s.dopplers = {1.0, 1.0, 1.0};
        ValidateOptions o;
        o.trace.n_samples = 4096;
        o.trace.n_realizations = 8;
        const auto a = mc::validate(s, kAllProtocols, o);
        const auto b = mc::validate(s, kAllProtocols, o);
        REQUIRE(a.protocols.size() == 4);
        for (std::size_t i = 0; i < 4; ++i) {
            const auto& ea = a.protocols[i].empirical;
            const auto& eb = b.protocols[i].empirical;
            CHECK(ea.n_below == eb.n_below);
            CHECK(ea.n_down_crossings == eb.n_down_crossings);
            CHECK(ea.se_aor == eb.se_aor);
            REQUIRE(ea.aod.has_value());
            // aod * aor reproduces p_out up to rounding of one division.
            CHECK(std::abs(*ea.aod * ea.aor - ea.p_out) <= 2 * std::numeric_limits<double>::epsilon() * ea.p_out);
        }
        const auto& sr = a.protocols[0];
        REQUIRE(sr.protocol == Protocol::SR);
        REQUIRE(sr.sr_counts.has_value());
        CHECK(sr.sr_counts->total() == sr.empirical.n_down_crossings);
        CHECK(a.lcr_u.has_value());

        const Protocol none[] = {Protocol::AF};
        CHECK_THROWS_AS(mc::validate(s, std::span<const Protocol>{}, o), ArgumentError);
        CHECK_NOTHROW(mc::validate(s, none, o));
    }

    TEST_CASE("static network validates outage probability only")
    {
        Scenario s;
        s.gamma0 = 10.0;
        s.dopplers = {0.0, 0.0, 0.0};
        ValidateOptions o;
        o.trace.n_samples = 4;
        o.trace.n_realizations = 20000;
        const Protocol ps[] = {Protocol::DF, Protocol::Direct};
        const auto r = mc::validate(s, ps, o);
        CHECK_FALSE(r.lcr_u.has_value());
        for (const auto& v : r.protocols) {
            CHECK(v.empirical.n_down_crossings == 0);
            CHECK(std::abs(v.dev_p_out) < 0.1);
        }
    }

    TEST_CASE("AF without the noise term")
    {
        Scenario s;
        s.gamma0 = 1.0;
        s.dopplers = {1.0, 1.0, 1.0};
        ValidateOptions o;
        o.trace.n_samples = 8192;
        o.trace.n_realizations = 200;
        o.af_c1_zero = true;
        const Protocol ps[] = {Protocol::AF};
        const auto r = mc::validate(s, ps, o);
        const auto& v = r.protocols[0];
        CHECK(std::abs(v.dev_p_out) < 3 * v.empirical.se_p_out / v.exact.p_out + 0.01);
        // Dropping C1 strictly raises the relayed gain.
        CHECK(v.exact.p_out < exact::op_af(s));
    }
}

TEST_SUITE("trace files")
{
    TEST_CASE("round trip and header layout")
    {
        const auto path = std::filesystem::temp_directory_path() / "coopout_trace_test.bin";
        const FadingTrace t{0.125, {0.0, 1.5, 2.25, 1e-300}};
        write_trace(path, t);
        CHECK(std::filesystem::file_size(path) == 16 + 8 * 4);

        std::ifstream in(path, std::ios::binary);
        unsigned char h[16];
        in.read(reinterpret_cast<char*>(h), 16);
        CHECK(h[0] == 'F');
        CHECK(h[3] == 'C');
        // 0.125 = 0x3FC0000000000000, little endian.
        CHECK(h[10] == 0xC0);
        CHECK(h[11] == 0x3F);
        CHECK(h[12] == 4);
        CHECK(h[13] == 0);
        in.close();

        const auto back = read_trace(path);
        CHECK(back.dt == t.dt);
        CHECK(back.samples == t.samples);

        {
            std::ofstream bad(path, std::ios::binary | std::ios::trunc);
            bad << "XXXXXXXXXXXXXXXXXXXX";
        }
        CHECK_THROWS(read_trace(path));
        std::filesystem::remove(path);
        CHECK_THROWS(read_trace(path));
    }
}
