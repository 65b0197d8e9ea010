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

#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <vector>

#include "coopout/errors.hpp"
#include "coopout/mc_sim.hpp"
#include "coopout/parallel.hpp"

namespace coopout::cli {

namespace {

std::string fmt(const char* spec, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string cell(std::optional<double> v, int width = 13)
{
    std::string s = v ? fmt("%.5g", *v) : std::string("-");
    if (static_cast<int>(s.size()) < width) {
        s.insert(0, static_cast<std::size_t>(width) - s.size(), ' ');
    }
    return s;
}

std::optional<double> scaled(std::optional<double> v, double k)
{
    if (!v) {
        return std::nullopt;
    }
    return *v * k;
}

std::string pad(std::string s, std::size_t width)
{
    if (s.size() < width) {
        s.append(width - s.size(), ' ');
    }
    return s;
}

void print_header(const RunConfig& cfg, double db, std::ostream& out)
{
    const auto& o = cfg.omega;
    const auto& f = cfg.doppler;
    out << "Gamma0 = " << fmt("%g", db) << " dB, R0 = " << fmt("%g", cfg.r0) << ", Omega = (" << fmt("%g", o.omega_x)
        << ", " << fmt("%g", o.omega_y) << ", " << fmt("%g", o.omega_z) << "), f_m(S, R, D) = (" << fmt("%g", f.source)
        << ", " << fmt("%g", f.relay) << ", " << fmt("%g", f.destination) << ") Hz";
    if (cfg.y0) {
        out << ", Y0 = " << fmt("%g", *cfg.y0);
    }
    out << '\n';
}

std::string units_line(const Units& u)
{
    return "units: aor " + u.aor_label + ", aod " + u.aod_label + "\n";
}

// Least-squares slope of y on x, with the RMS residual.
std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y)
{
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (my + slope * (x[i] - mx));
        ss += r * r;
    }
    return {slope, std::sqrt(ss / n)};
}

}  // namespace

Units units_for(const RunConfig& cfg)
{
    const double fm = cfg.f_m();
    switch (cfg.normalize) {
    case Normalization::Hz:
        return {1.0, 1.0, "Hz", "s"};
    case Normalization::PerFm:
        return {1.0 / fm, fm, "per 1/f_m (N_I/f_m)", "in 1/f_m (T_I f_m)"};
    case Normalization::PerBlock: {
        const double t = cfg.fm_t / fm;
        return {t, 1.0 / t, "per coding block (N_I T)", "in coding blocks (T_I/T)"};
    }
    }
    return {};
}

PointMetrics evaluate(const Scenario& s, Protocol p)
{
    PointMetrics m;
    m.asym = asym::asym(s, p);
    if (s.dopplers.any_mobile()) {
        const auto e = exact::metrics(s, p);
        m.p_out = e.p_out;
        m.aor = e.aor;
        m.aod = e.aod;
    } else {
        m.p_out = exact::op(s, p);
    }
    return m;
}

std::string format_number(std::optional<double> v)
{
    if (!v || !std::isfinite(*v)) {
        return "nan";
    }
    return fmt("%.9g", *v);
}

int cmd_metrics(const RunConfig& cfg, std::ostream& out)
{
    if (cfg.snr_db.size() != 1) {
        throw ConfigError("metrics: needs a single SNR point (use --snr-db)");
    }
    const double db = cfg.snr_db.front();
    const auto s = cfg.scenario(db);
    const Units u = units_for(cfg);

    print_header(cfg, db, out);
    out << units_line(u);
    out << "protocol        p_out          aor          aod   p_out_asym     aor_asym     aod_asym      1/aor";
    if (cfg.mc) {
        out << "     p_out_mc       aor_mc       aod_mc";
    }
    out << '\n';

    std::vector<mc::ProtocolValidation> sim;
    if (cfg.mc) {
        mc::ValidateOptions opt;
        opt.trace = cfg.trace;
        sim = mc::validate(s, cfg.protocols, opt).protocols;
    }
    for (std::size_t i = 0; i < cfg.protocols.size(); ++i) {
        const Protocol p = cfg.protocols[i];
        const auto m = evaluate(s, p);
        const auto aor = scaled(m.aor, u.aor);
        std::optional<double> between;
        if (aor && *aor > 0.0) {
            between = 1.0 / *aor;
        }
        out << pad(std::string(to_string(p)), 8) << cell(m.p_out) << cell(aor) << cell(scaled(m.aod, u.aod))
            << cell(m.asym.p_out_asym) << cell(m.asym.aor_asym * u.aor) << cell(scaled(m.asym.aod_asym, u.aod))
            << cell(between, 11);
        if (cfg.mc) {
            const auto& e = sim[i].empirical;
            out << cell(e.p_out) << cell(s.dopplers.any_mobile() ? std::optional(e.aor * u.aor) : std::nullopt)
                << cell(scaled(e.aod, u.aod));
        }
        out << '\n';
    }
    return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out)
{
    const Units u = units_for(cfg);
    const std::size_t np = cfg.protocols.size();
    std::vector<PointMetrics> rows(cfg.snr_db.size() * np);
    parallel_for(rows.size(), [&](std::size_t i) {
        rows[i] = evaluate(cfg.scenario(cfg.snr_db[i / np]), cfg.protocols[i % np]);
    });

    out << "snr_db,protocol,p_out_exact,aor_exact,aod_exact,p_out_asym,aor_asym,aod_asym\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& m = rows[i];
        out << format_number(cfg.snr_db[i / np]) << ',' << to_string(cfg.protocols[i % np]) << ','
            << format_number(m.p_out) << ',' << format_number(scaled(m.aor, u.aor)) << ','
            << format_number(scaled(m.aod, u.aod)) << ',' << format_number(m.asym.p_out_asym) << ','
            << format_number(m.asym.aor_asym * u.aor) << ',' << format_number(scaled(m.asym.aod_asym, u.aod))
            << '\n';
    }
    return kExitOk;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out)
{
    const Units u = units_for(cfg);
    mc::ValidateOptions opt;
    opt.trace = cfg.trace;
    bool pass = true;

    for (double db : cfg.snr_db) {
        const auto s = cfg.scenario(db);
        const auto report = mc::validate(s, cfg.protocols, opt);
        print_header(cfg, db, out);
        out << "samples " << cfg.trace.n_samples * static_cast<std::uint64_t>(cfg.trace.n_realizations) << " ("
            << cfg.trace.n_realizations << " x " << cfg.trace.n_samples << "), oversampling "
            << cfg.trace.oversampling << ", seed " << cfg.trace.seed << '\n';
        out << units_line(u);
        out << "protocol  metric        exact           mc       dev     se/exact  result\n";
        for (const auto& v : report.protocols) {
            const auto& e = v.empirical;
            auto line = [&](const char* name, std::optional<double> ex, std::optional<double> mc, double dev,
                            double se, double tol) {
                const bool ok = std::abs(dev) <= tol;
                out << pad(std::string(to_string(v.protocol)), 10) << pad(name, 8) << cell(ex) << cell(mc)
                    << fmt("%+9.4f", dev) << cell(ex && *ex > 0.0 ? std::optional(se / *ex) : std::nullopt)
                    << (ok ? "  ok" : "  FAIL") << '\n';
            };
            line("p_out", v.exact.p_out, e.p_out, v.dev_p_out, e.se_p_out, opt.tol.p_out);
            if (s.dopplers.any_mobile()) {
                line("aor", v.exact.aor * u.aor, e.aor * u.aor, v.dev_aor, e.se_aor * u.aor, opt.tol.aor);
                line("aod", scaled(v.exact.aod, u.aod), scaled(e.aod, u.aod), v.dev_aod, e.se_aod * u.aod,
                     opt.tol.aod);
            }
            if (v.sr_counts && v.sr_terms) {
                const double w = e.window;
                const auto& c = *v.sr_counts;
                const auto& t = *v.sr_terms;
                out << "          sr crossings (mc / exact): direct " << cell(c.direct_branch / w * u.aor, 0)
                    << " / " << cell(t.direct_branch * u.aor, 0) << ", relay " << cell(c.relay_branch / w * u.aor, 0)
                    << " / " << cell(t.relay_branch * u.aor, 0) << ", switch-up "
                    << cell(c.switch_up / w * u.aor, 0) << " / " << cell(t.switch_up * u.aor, 0) << ", switch-down "
                    << cell(c.switch_down / w * u.aor, 0) << " / " << cell(t.switch_down * u.aor, 0) << '\n';
            }
        }
        if (report.lcr_u) {
            const auto& l = *report.lcr_u;
            out << pad("U", 10) << pad("lcr", 8) << cell(l.exact * u.aor) << cell(l.empirical.aor * u.aor)
                << fmt("%+9.4f", l.deviation) << cell(l.empirical.se_aor / l.exact) << (l.pass ? "  ok" : "  FAIL")
                << '\n';
        }
        out << (report.pass ? "PASS" : "FAIL") << '\n';
        pass = pass && report.pass;

        if (cfg.dump_trace && db == cfg.snr_db.front()) {
            // Equivalent gain of the first protocol, realization 0.
            const auto d = derive(s);
            const double dt = mc::scenario_dt(s, cfg.trace);
            const auto& f = s.dopplers;
            auto link = [&](double omega, double fa, double fb, std::uint32_t index) {
                if (fa + fb == 0.0) {
                    return mc::static_link_trace(omega, dt, cfg.trace, {0, index});
                }
                return mc::gen_m2m_rayleigh(omega, fa, fb, cfg.trace, {0, index}, dt);
            };
            const auto x = link(s.gains.omega_x, f.source, f.destination, 0);
            const auto y = link(s.gains.omega_y, f.source, f.relay, 1);
            const auto z = link(s.gains.omega_z, f.relay, f.destination, 2);
            mc::write_trace(*cfg.dump_trace, mc::compose(cfg.protocols.front(), x, y, z, d.thresholds));
            out << "trace written to " << cfg.dump_trace->string() << '\n';
        }
    }
    return pass ? kExitOk : kExitValidationFailed;
}

int cmd_slope(const RunConfig& cfg, std::ostream& out)
{
    if (cfg.snr_db.size() < 2 || cfg.snr_db.back() - cfg.snr_db.front() < 6.0) {
        throw ConfigError("slope: the SNR window must span at least 6 dB (use --snr-db-range)");
    }
    if (!cfg.doppler.any_mobile()) {
        throw ConfigError("slope: outage rate and duration need at least one mobile node");
    }
    std::vector<double> x;
    for (double db : cfg.snr_db) {
        x.push_back(db / 10.0);
    }
    const std::size_t np = cfg.protocols.size();
    const std::size_t nx = x.size();
    std::vector<OutageMetrics> m(np * nx);
    parallel_for(m.size(), [&](std::size_t i) {
        m[i] = exact::metrics(cfg.scenario(cfg.snr_db[i % nx]), cfg.protocols[i / nx]);
    });

    out << "fit of log10(metric) against log10(Gamma0) over " << fmt("%g", cfg.snr_db.front()) << ".."
        << fmt("%g", cfg.snr_db.back()) << " dB (" << nx << " points)\n";
    out << "protocol  metric   exponent   expected   rms_residual\n";
    for (std::size_t j = 0; j < np; ++j) {
        const Protocol p = cfg.protocols[j];
        const int d = diversity_gain(p);
        std::vector<double> yp, ya, yd;
        bool defined = true;
        for (std::size_t i = 0; i < nx; ++i) {
            const auto& v = m[j * nx + i];
            if (!(v.p_out > 0.0) || !v.aod) {
                defined = false;
                break;
            }
            yp.push_back(std::log10(v.p_out));
            ya.push_back(std::log10(v.aor));
            yd.push_back(std::log10(*v.aod));
        }
        if (!defined) {
            throw ConfigError("slope: metrics vanish in the window (is the rate 0?)");
        }
        const std::pair<const char*, std::pair<std::vector<double>*, double>> rows[] = {
            {"p_out", {&yp, -static_cast<double>(d)}},
            {"aor", {&ya, -(d - 0.5)}},
            {"aod", {&yd, -0.5}},
        };
        for (const auto& [name, data] : rows) {
            const auto [slope, rms] = fit_line(x, *data.first);
            out << pad(std::string(to_string(p)), 10) << pad(name, 7) << fmt("%10.4f", slope)
                << fmt("%11.4f", data.second) << fmt("%15.3g", rms) << '\n';
        }
    }
    return kExitOk;
}

int cmd_table1(const RunConfig& cfg, std::ostream& out)
{
    const Units u = units_for(cfg);
    const double fm = cfg.f_m();
    const std::pair<const char*, asym::Table1Row> rows[] = {
        {"direct", asym::Table1Row::Direct}, {"simo1x2", asym::Table1Row::Simo1x2}, {"af", asym::Table1Row::AF},
        {"df", asym::Table1Row::DF},         {"sr", asym::Table1Row::SR},
    };
    out << "symmetric network, Omega = " << fmt("%g", cfg.omega.omega_x) << ", f_m = " << fmt("%g", fm) << " Hz, R0 = "
        << fmt("%g", cfg.r0) << '\n';
    out << units_line(u);
    for (double db : cfg.snr_db) {
        const double gamma_bar = cfg.omega.omega_x * db_to_linear(db);
        out << "Gamma0 = " << fmt("%g", db) << " dB, gamma_bar = " << fmt("%.6g", gamma_bar) << '\n';
        out << "row             p_out          aor          aod\n";
        for (const auto& [name, row] : rows) {
            const auto t = asym::table1_symmetric(gamma_bar, cfg.r0, fm, row);
            out << pad(name, 8) << cell(t.p_out_asym) << cell(t.aor_asym * u.aor) << cell(scaled(t.aod_asym, u.aod))
                << '\n';
        }
    }
    return kExitOk;
}

}  // namespace coopout::cli
