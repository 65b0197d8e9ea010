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

#include "coopout/mc_sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>

#include "coopout/errors.hpp"
#include "coopout/parallel.hpp"
#include "coopout/rng.hpp"

namespace coopout::mc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum LinkIndex : std::uint32_t { kLinkX = 0, kLinkY = 1, kLinkZ = 2 };

// Calls sink(k, re, im) for k = 0 .. n-1.
template <class Sink>
void synthesize(double omega, double f_tx, double f_rx, const TraceConfig& cfg, StreamId id, double dt, Sink&& sink)
{
    const auto n_rays = static_cast<std::size_t>(cfg.n_sinusoids);
    Stream rs(cfg.seed, id.realization, id.link);

    std::vector<double> w(n_rays), c_re(n_rays), c_im(n_rays);
    std::vector<double> rot_re(n_rays), rot_im(n_rays), p_re(n_rays), p_im(n_rays);
    const double scale = std::sqrt(omega / (2.0 * static_cast<double>(n_rays)));

    // Stratified angles: alpha on an N-point ring, beta on an N/2-point ring
    // (random offsets, random pairing), with ray i + N/2 reusing beta_i while
    // its alpha is rotated by pi. Every angle is still uniform on [0, 2 pi),
    // but each realization now has sum(w) = 0 and a fixed sum(w^2), so its
    // spectrum has no mean shift and its derivative variance is exact.
    const std::size_t half = n_rays / 2;
    const double alpha0 = rs.uniform();
    const double beta0 = rs.uniform();
    std::vector<std::size_t> order(half);
    for (std::size_t k = 0; k < half; ++k) {
        order[k] = k;
    }
    for (std::size_t k = half; k > 1; --k) {
        const auto j = static_cast<std::size_t>(rs.uniform() * static_cast<double>(k));
        std::swap(order[k - 1], order[std::min(j, k - 1)]);
    }
    for (std::size_t i = 0; i < n_rays; ++i) {
        const double alpha = kTwoPi * (static_cast<double>(i) + alpha0) / static_cast<double>(n_rays);
        const double beta = kTwoPi * (static_cast<double>(order[i % half]) + beta0) / static_cast<double>(half);
        const double phi = kTwoPi * rs.uniform();
        const double g_re = scale * rs.normal();
        const double g_im = scale * rs.normal();
        w[i] = kTwoPi * (f_tx * std::cos(alpha) + f_rx * std::cos(beta));
        c_re[i] = g_re * std::cos(phi) - g_im * std::sin(phi);
        c_im[i] = g_re * std::sin(phi) + g_im * std::cos(phi);
        rot_re[i] = std::cos(w[i] * dt);
        rot_im[i] = std::sin(w[i] * dt);
    }

    const std::uint64_t n = cfg.n_samples;
    for (std::uint64_t k0 = 0; k0 < n; k0 += kRefreshInterval) {
        const double t0 = static_cast<double>(k0) * dt;
        for (std::size_t i = 0; i < n_rays; ++i) {
            const double cs = std::cos(w[i] * t0);
            const double sn = std::sin(w[i] * t0);
            p_re[i] = c_re[i] * cs - c_im[i] * sn;
            p_im[i] = c_re[i] * sn + c_im[i] * cs;
        }
        const std::uint64_t k1 = std::min<std::uint64_t>(n, k0 + kRefreshInterval);
        for (std::uint64_t k = k0; k < k1; ++k) {
            double re = 0.0;
            double im = 0.0;
            for (std::size_t i = 0; i < n_rays; ++i) {
                re += p_re[i];
                im += p_im[i];
                const double nr = p_re[i] * rot_re[i] - p_im[i] * rot_im[i];
                p_im[i] = p_re[i] * rot_im[i] + p_im[i] * rot_re[i];
                p_re[i] = nr;
            }
            sink(k, re, im);
        }
    }
}

double link_dt(double f_tx, double f_rx, const TraceConfig& cfg, std::optional<double> dt)
{
    if (dt) {
        if (!(*dt > 0.0)) {
            throw ArgumentError("trace: dt must be positive");
        }
        return *dt;
    }
    return 1.0 / (cfg.oversampling * (f_tx + f_rx));
}

void check_link(double omega, double f_tx, double f_rx)
{
    if (!(omega > 0.0)) {
        throw DomainError("trace: omega must be positive");
    }
    if (!(f_tx >= 0.0) || !(f_rx >= 0.0)) {
        throw DomainError("trace: Doppler frequencies must be nonnegative");
    }
    if (f_tx + f_rx == 0.0) {
        throw StaticLinkError("trace: both ends of the link are static");
    }
}

// Streaming form of estimate() so composed gains need not be stored.
class CrossingCounter {
public:
    explicit CrossingCounter(double g0) : g0_(g0) {}

    // Returns true when a down-crossing ends at this sample.
    bool push(double s) noexcept
    {
        const bool below = s < g0_;
        const bool crossed = n_ > 0 && !prev_below_ && below;
        below_ += below;
        crossings_ += crossed;
        prev_below_ = below;
        ++n_;
        return crossed;
    }

    EmpiricalMetrics finish(double dt) const
    {
        EmpiricalMetrics m;
        m.n_samples = n_;
        m.n_below = below_;
        m.n_down_crossings = crossings_;
        m.window = static_cast<double>(n_) * dt;
        fill_rates(m);
        return m;
    }

    static void fill_rates(EmpiricalMetrics& m)
    {
        m.p_out = m.n_samples ? static_cast<double>(m.n_below) / static_cast<double>(m.n_samples) : 0.0;
        m.aor = m.window > 0.0 ? static_cast<double>(m.n_down_crossings) / m.window : 0.0;
        m.aod.reset();
        if (m.n_down_crossings > 0) {
            m.aod = m.p_out / m.aor;
        }
    }

private:
    double g0_;
    std::uint64_t n_ = 0;
    std::uint64_t below_ = 0;
    std::uint64_t crossings_ = 0;
    bool prev_below_ = false;
};

double u_gain(double x, double z) { return std::sqrt(x * x + z * z); }

double relative_deviation(double empirical, double exact)
{
    if (exact == 0.0) {
        return empirical == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return (empirical - exact) / exact;
}

void put_u32(char* p, std::uint32_t v)
{
    for (int i = 0; i < 4; ++i) {
        p[i] = static_cast<char>((v >> (8 * i)) & 0xFFu);
    }
}

void put_f64(char* p, double v)
{
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
        p[i] = static_cast<char>((bits >> (8 * i)) & 0xFFu);
    }
}

std::uint64_t get_le(const char* p, int bytes)
{
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) {
        v |= std::uint64_t{static_cast<unsigned char>(p[i])} << (8 * i);
    }
    return v;
}

}  // namespace

void validate(const TraceConfig& cfg)
{
    if (cfg.oversampling < 16) {
        throw ArgumentError("trace config: oversampling must be >= 16");
    }
    if (cfg.n_sinusoids < 16 || cfg.n_sinusoids % 2 != 0) {
        throw ArgumentError("trace config: n_sinusoids must be even and >= 16");
    }
    if (cfg.n_samples == 0 || cfg.n_realizations < 1) {
        throw ArgumentError("trace config: n_samples and n_realizations must be positive");
    }
}

std::vector<std::complex<double>> gen_m2m_complex(double omega, double f_tx, double f_rx, const TraceConfig& cfg,
                                                  StreamId id, std::optional<double> dt)
{
    validate(cfg);
    check_link(omega, f_tx, f_rx);
    std::vector<std::complex<double>> out(cfg.n_samples);
    synthesize(omega, f_tx, f_rx, cfg, id, link_dt(f_tx, f_rx, cfg, dt),
               [&](std::uint64_t k, double re, double im) { out[k] = {re, im}; });
    return out;
}

FadingTrace gen_m2m_rayleigh(double omega, double f_tx, double f_rx, const TraceConfig& cfg, StreamId id,
                             std::optional<double> dt)
{
    validate(cfg);
    check_link(omega, f_tx, f_rx);
    FadingTrace t;
    t.dt = link_dt(f_tx, f_rx, cfg, dt);
    t.samples.resize(cfg.n_samples);
    synthesize(omega, f_tx, f_rx, cfg, id, t.dt,
               [&](std::uint64_t k, double re, double im) { t.samples[k] = std::hypot(re, im); });
    return t;
}

FadingTrace static_link_trace(double omega, double dt, const TraceConfig& cfg, StreamId id)
{
    validate(cfg);
    if (!(omega > 0.0) || !(dt > 0.0)) {
        throw DomainError("static trace: omega and dt must be positive");
    }
    Stream rs(cfg.seed, id.realization, id.link);
    const double scale = std::sqrt(omega / 2.0);
    const double level = std::hypot(scale * rs.normal(), scale * rs.normal());
    return FadingTrace{dt, std::vector<double>(cfg.n_samples, level)};
}

double equivalent_gain(Protocol p, double x, double y, double z, const Thresholds& t)
{
    switch (p) {
    case Protocol::Direct:
        return x;
    case Protocol::AF: {
        const double den = y * y + z * z + t.c1;
        const double relayed = den > 0.0 ? y * y * z * z / den : 0.0;
        return std::sqrt(x * x + relayed);
    }
    case Protocol::DF:
        return std::min(y, u_gain(x, z));
    case Protocol::SR:
        return y <= t.y0 ? std::numbers::sqrt2 * x : u_gain(x, z);
    }
    throw ArgumentError("equivalent_gain: unknown protocol");
}

FadingTrace compose(Protocol p, const FadingTrace& x, const FadingTrace& y, const FadingTrace& z,
                    const Thresholds& t)
{
    if (x.samples.size() != y.samples.size() || x.samples.size() != z.samples.size()) {
        throw ArgumentError("compose: traces differ in length");
    }
    if (x.dt != y.dt || x.dt != z.dt) {
        throw ArgumentError("compose: traces differ in sample spacing");
    }
    FadingTrace g{x.dt, std::vector<double>(x.samples.size())};
    for (std::size_t k = 0; k < g.samples.size(); ++k) {
        g.samples[k] = equivalent_gain(p, x.samples[k], y.samples[k], z.samples[k], t);
    }
    return g;
}

EmpiricalMetrics estimate(const FadingTrace& g, double g0)
{
    if (g.samples.empty()) {
        throw ArgumentError("estimate: empty trace");
    }
    if (!(g0 >= 0.0) || !(g.dt > 0.0)) {
        throw DomainError("estimate: need g0 >= 0 and dt > 0");
    }
    CrossingCounter c(g0);
    for (double s : g.samples) {
        c.push(s);
    }
    return c.finish(g.dt);
}

EmpiricalMetrics merge(std::span<const EmpiricalMetrics> parts)
{
    EmpiricalMetrics m;
    for (const auto& p : parts) {
        m.n_samples += p.n_samples;
        m.n_below += p.n_below;
        m.n_down_crossings += p.n_down_crossings;
        m.window += p.window;
    }
    CrossingCounter::fill_rates(m);

    const auto r = static_cast<double>(parts.size());
    if (parts.size() < 2) {
        return m;
    }
    double mp = 0.0, ma = 0.0;
    for (const auto& p : parts) {
        mp += p.p_out;
        ma += p.aor;
    }
    mp /= r;
    ma /= r;
    double vp = 0.0, va = 0.0, cov = 0.0;
    for (const auto& p : parts) {
        vp += (p.p_out - mp) * (p.p_out - mp);
        va += (p.aor - ma) * (p.aor - ma);
        cov += (p.p_out - mp) * (p.aor - ma);
    }
    // Variance of the mean over realizations.
    const double norm = r * (r - 1.0);
    vp /= norm;
    va /= norm;
    cov /= norm;
    m.se_p_out = std::sqrt(vp);
    m.se_aor = std::sqrt(va);
    if (m.aod && m.p_out > 0.0) {
        const double rel = vp / (m.p_out * m.p_out) + va / (m.aor * m.aor) - 2.0 * cov / (m.p_out * m.aor);
        m.se_aod = *m.aod * std::sqrt(std::max(rel, 0.0));
    }
    return m;
}

SrCrossingCounts classify_sr_crossings(const FadingTrace& x, const FadingTrace& y, const FadingTrace& z,
                                       const Thresholds& t)
{
    const auto g = compose(Protocol::SR, x, y, z, t);
    SrCrossingCounts c;
    for (std::size_t k = 0; k + 1 < g.samples.size(); ++k) {
        if (!(g.samples[k] >= t.g0 && g.samples[k + 1] < t.g0)) {
            continue;
        }
        const bool on0 = y.samples[k] > t.y0;
        const bool on1 = y.samples[k + 1] > t.y0;
        if (on0 == on1) {
            ++(on0 ? c.relay_branch : c.direct_branch);
        } else {
            ++(on1 ? c.switch_up : c.switch_down);
        }
    }
    return c;
}

double scenario_dt(const Scenario& s, const TraceConfig& cfg)
{
    const auto& f = s.dopplers;
    const double fastest = std::max({f.source + f.destination, f.source + f.relay, f.relay + f.destination});
    return fastest > 0.0 ? 1.0 / (cfg.oversampling * fastest) : 1.0 / cfg.oversampling;
}

ValidationReport validate(const Scenario& s, std::span<const Protocol> protocols, const ValidateOptions& opt)
{
    coopout::validate(s);
    validate(opt.trace);
    if (protocols.empty()) {
        throw ArgumentError("validate: no protocols given");
    }
    const auto d = derive(s);
    const auto& f = s.dopplers;
    const bool mobile = f.any_mobile();
    const double dt = scenario_dt(s, opt.trace);
    auto th = d.thresholds;
    if (opt.af_c1_zero) {
        th.c1 = 0.0;
    }

    const auto n_real = static_cast<std::size_t>(opt.trace.n_realizations);
    const std::size_t n_prot = protocols.size();
    std::vector<EmpiricalMetrics> parts(n_real * n_prot);
    std::vector<EmpiricalMetrics> u_parts(n_real);
    std::vector<SrCrossingCounts> sr_parts(n_real);

    auto link = [&](double omega, double fa, double fb, std::uint32_t realization, std::uint32_t index) {
        const StreamId id{realization, index};
        if (fa + fb == 0.0) {
            return static_link_trace(omega, dt, opt.trace, id);
        }
        return gen_m2m_rayleigh(omega, fa, fb, opt.trace, id, dt);
    };

    parallel_for(n_real, [&](std::size_t r) {
        const auto ri = static_cast<std::uint32_t>(r);
        const auto x = link(s.gains.omega_x, f.source, f.destination, ri, kLinkX);
        const auto y = link(s.gains.omega_y, f.source, f.relay, ri, kLinkY);
        const auto z = link(s.gains.omega_z, f.relay, f.destination, ri, kLinkZ);
        const std::size_t n = x.samples.size();
        for (std::size_t j = 0; j < n_prot; ++j) {
            const Protocol p = protocols[j];
            const double level = p == Protocol::Direct ? th.x0 : th.g0;
            CrossingCounter c(level);
            for (std::size_t k = 0; k < n; ++k) {
                c.push(equivalent_gain(p, x.samples[k], y.samples[k], z.samples[k], th));
            }
            parts[r * n_prot + j] = c.finish(dt);
            if (p == Protocol::SR) {
                sr_parts[r] = classify_sr_crossings(x, y, z, th);
            }
        }
        CrossingCounter cu(th.g0);
        for (std::size_t k = 0; k < n; ++k) {
            cu.push(u_gain(x.samples[k], z.samples[k]));
        }
        u_parts[r] = cu.finish(dt);
    });

    ValidationReport report;
    report.pass = true;
    for (std::size_t j = 0; j < n_prot; ++j) {
        ProtocolValidation v;
        v.protocol = protocols[j];
        std::vector<EmpiricalMetrics> col(n_real);
        for (std::size_t r = 0; r < n_real; ++r) {
            col[r] = parts[r * n_prot + j];
        }
        v.empirical = merge(col);

        exact::AfOptions af;
        if (opt.af_c1_zero) {
            af.c1 = 0.0;
        }
        const double p_exact = v.protocol == Protocol::AF ? exact::op_af(s, af) : exact::op(s, v.protocol);
        v.dev_p_out = relative_deviation(v.empirical.p_out, p_exact);
        v.pass = std::abs(v.dev_p_out) <= opt.tol.p_out;
        if (mobile) {
            const double n_exact = v.protocol == Protocol::AF ? exact::aor_af(s, af) : exact::aor(s, v.protocol);
            v.exact = make_metrics(p_exact, n_exact);
            v.dev_aor = relative_deviation(v.empirical.aor, n_exact);
            v.pass = v.pass && std::abs(v.dev_aor) <= opt.tol.aor;
            if (v.exact.aod && v.empirical.aod) {
                v.dev_aod = relative_deviation(*v.empirical.aod, *v.exact.aod);
                v.pass = v.pass && std::abs(v.dev_aod) <= opt.tol.aod;
            } else if (v.exact.aod.has_value() != v.empirical.aod.has_value()) {
                v.pass = false;
            }
        } else {
            v.exact = make_metrics(p_exact, 0.0);
        }
        if (v.protocol == Protocol::SR) {
            SrCrossingCounts total;
            for (const auto& c : sr_parts) {
                total.direct_branch += c.direct_branch;
                total.relay_branch += c.relay_branch;
                total.switch_up += c.switch_up;
                total.switch_down += c.switch_down;
            }
            v.sr_counts = total;
            if (mobile) {
                v.sr_terms = exact::aor_sr_terms(s);
            }
        }
        report.pass = report.pass && v.pass;
        report.protocols.push_back(std::move(v));
    }

    if (mobile) {
        LcrValidation l;
        l.empirical = merge(u_parts);
        l.exact = exact::lcr_u(th.g0, s.gains.omega_x, s.gains.omega_z, d.links.sigma2_x, d.links.sigma2_z);
        l.deviation = relative_deviation(l.empirical.aor, l.exact);
        l.pass = std::abs(l.deviation) <= opt.tol.lcr_u;
        report.pass = report.pass && l.pass;
        report.lcr_u = l;
    }
    return report;
}

void write_trace(const std::filesystem::path& path, const FadingTrace& t)
{
    if (t.samples.size() > std::numeric_limits<std::uint32_t>::max()) {
        throw ArgumentError("write_trace: more than 2^32 - 1 samples");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("write_trace: cannot open " + path.string());
    }
    char header[16];
    std::memcpy(header, "FTRC", 4);
    put_f64(header + 4, t.dt);
    put_u32(header + 12, static_cast<std::uint32_t>(t.samples.size()));
    out.write(header, sizeof header);
    std::vector<char> body(8 * t.samples.size());
    for (std::size_t k = 0; k < t.samples.size(); ++k) {
        put_f64(body.data() + 8 * k, t.samples[k]);
    }
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) {
        throw std::runtime_error("write_trace: write failed for " + path.string());
    }
}

FadingTrace read_trace(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("read_trace: cannot open " + path.string());
    }
    char header[16];
    if (!in.read(header, sizeof header) || std::memcmp(header, "FTRC", 4) != 0) {
        throw std::runtime_error("read_trace: bad header in " + path.string());
    }
    FadingTrace t;
    t.dt = std::bit_cast<double>(get_le(header + 4, 8));
    const auto count = static_cast<std::size_t>(get_le(header + 12, 4));
    std::vector<char> body(8 * count);
    if (!in.read(body.data(), static_cast<std::streamsize>(body.size()))) {
        throw std::runtime_error("read_trace: truncated file " + path.string());
    }
    t.samples.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        t.samples[k] = std::bit_cast<double>(get_le(body.data() + 8 * k, 8));
    }
    return t;
}

}  // namespace coopout::mc
