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
 * @file mc_sim.hpp
 * @brief Monte Carlo oracle: sum-of-sinusoids mobile-to-mobile Rayleigh
 * traces, equivalent end-to-end gains, and empirical outage statistics.
 *
 * A link trace is h(t) = sum_n c_n exp(j (2 pi (f_tx cos a_n + f_rx cos b_n) t
 * + phi_n)) with a_n, b_n, phi_n uniform on [0, 2 pi) and c_n circular complex
 * Gaussian of variance omega / N. Given the angles, h(t) is then exactly
 * complex Gaussian with mean square omega at every t, and the ensemble
 * autocorrelation is omega J0(2 pi f_tx tau) J0(2 pi f_rx tau). The angles
 * are stratified (see mc_sim.cpp) so that every realization has the exact
 * derivative variance pi^2 omega (f_tx^2 + f_rx^2) and a zero-mean spectrum.
 *
 * Phasors are advanced by recursive rotation and recomputed from scratch
 * every kRefreshInterval samples to bound drift.
 */

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "coopout/channel.hpp"
#include "coopout/exact_metrics.hpp"
#include "coopout/protocol.hpp"

namespace coopout::mc {

inline constexpr std::size_t kRefreshInterval = 1024;

struct TraceConfig {
    int oversampling = 64;              // samples per 1 / f_max
    std::uint64_t n_samples = 1 << 20;  // per realization
    int n_sinusoids = 32;               // even
    std::uint64_t seed = 1;
    int n_realizations = 16;
};

/// Throws ArgumentError unless oversampling >= 16, n_sinusoids is even and
/// >= 16, and the counts are positive.
void validate(const TraceConfig& cfg);

struct FadingTrace {
    double dt = 0.0;              // seconds per sample
    std::vector<double> samples;  // envelope or equivalent-gain values
};

/// Identifies an independent random stream.
struct StreamId {
    std::uint32_t realization = 0;
    std::uint32_t link = 0;
};

/// Complex gain samples. dt defaults to 1 / (oversampling (f_tx + f_rx)).
std::vector<std::complex<double>> gen_m2m_complex(double omega, double f_tx, double f_rx, const TraceConfig& cfg,
                                                  StreamId id = {}, std::optional<double> dt = {});

/// Envelope |h(t)|. Throws StaticLinkError when f_tx == f_rx == 0.
FadingTrace gen_m2m_rayleigh(double omega, double f_tx, double f_rx, const TraceConfig& cfg, StreamId id = {},
                             std::optional<double> dt = {});

/// Constant envelope drawn from the Rayleigh distribution; for OP-only use
/// with a static link.
FadingTrace static_link_trace(double omega, double dt, const TraceConfig& cfg, StreamId id = {});

/// Direct: x. AF: sqrt(x^2 + y^2 z^2 / (y^2 + z^2 + c1)). DF: min(y, U).
/// SR: sqrt(2) x if y <= y0, else U. U = sqrt(x^2 + z^2).
double equivalent_gain(Protocol p, double x, double y, double z, const Thresholds& t);

FadingTrace compose(Protocol p, const FadingTrace& x, const FadingTrace& y, const FadingTrace& z,
                    const Thresholds& t);

struct EmpiricalMetrics {
    double p_out = 0.0;
    std::uint64_t n_down_crossings = 0;  // L
    std::uint64_t n_below = 0;
    std::uint64_t n_samples = 0;
    double window = 0.0;  // W, seconds
    double aor = 0.0;     // L / W
    std::optional<double> aod;  // p_out / aor, absent when L == 0
    // Standard errors from the spread of per-realization estimates; zero when
    // only one realization was merged.
    double se_p_out = 0.0;
    double se_aor = 0.0;
    double se_aod = 0.0;
};

/// Down-crossing at k when s_k >= g0 and s_{k+1} < g0.
EmpiricalMetrics estimate(const FadingTrace& g, double g0);

/// Pools per-realization estimates (counts are summed) and adds batch-mean
/// standard errors.
EmpiricalMetrics merge(std::span<const EmpiricalMetrics> parts);

/// SR down-crossings split by cause. The four counts sum to the total.
struct SrCrossingCounts {
    std::uint64_t direct_branch = 0;  // relay off on both samples
    std::uint64_t relay_branch = 0;   // relay on on both samples
    std::uint64_t switch_up = 0;      // relay switched on
    std::uint64_t switch_down = 0;    // relay switched off

    std::uint64_t total() const noexcept { return direct_branch + relay_branch + switch_up + switch_down; }
};

SrCrossingCounts classify_sr_crossings(const FadingTrace& x, const FadingTrace& y, const FadingTrace& z,
                                       const Thresholds& t);

// Validation ---------------------------------------------------------------

struct Tolerances {
    double p_out = 0.05;  // relative
    double aor = 0.10;
    double aod = 0.10;
    double lcr_u = 0.05;
};

struct ValidateOptions {
    TraceConfig trace;
    Tolerances tol;
    /// Simulate AF with c1 = 0 (compare against the exact metrics with
    /// 1 / Gamma0 dropped from the relayed term).
    bool af_c1_zero = false;
};

struct ProtocolValidation {
    Protocol protocol{};
    OutageMetrics exact;
    EmpiricalMetrics empirical;
    double dev_p_out = 0.0;  // (empirical - exact) / exact
    double dev_aor = 0.0;
    double dev_aod = 0.0;
    bool pass = false;
    std::optional<SrCrossingCounts> sr_counts;
    std::optional<exact::SrAorTerms> sr_terms;
};

struct LcrValidation {
    double exact = 0.0;
    EmpiricalMetrics empirical;  // of U(t) at level G0
    double deviation = 0.0;
    bool pass = false;
};

struct ValidationReport {
    std::vector<ProtocolValidation> protocols;
    std::optional<LcrValidation> lcr_u;  // present when any node moves
    bool pass = false;
};

/// Generates X, Y, Z once per realization and evaluates every requested
/// protocol on the same traces. Realizations run in parallel; results do not
/// depend on the thread count.
ValidationReport validate(const Scenario& s, std::span<const Protocol> protocols, const ValidateOptions& opt);

/// Common sample spacing for the three links of a scenario.
double scenario_dt(const Scenario& s, const TraceConfig& cfg);

// Trace files --------------------------------------------------------------
//
// 16-byte header: "FTRC", dt (float64 LE), count (uint32 LE); then count
// float64 LE samples.

void write_trace(const std::filesystem::path& path, const FadingTrace& t);
FadingTrace read_trace(const std::filesystem::path& path);

}  // namespace coopout::mc
