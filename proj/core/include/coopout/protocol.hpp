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

#include <array>
#include <optional>
#include <string_view>

namespace coopout {

enum class Protocol {
    Direct,  // S -> D only
    AF,      // variable-gain amplify-and-forward
    DF,      // decode-and-forward, repetition coding
    SR,      // selection DF: relay active only when Y > Y0
};

inline constexpr std::array<Protocol, 4> kAllProtocols = {Protocol::SR, Protocol::AF, Protocol::DF, Protocol::Direct};

/// High-SNR slope of the outage probability.
constexpr int diversity_gain(Protocol p) noexcept
{
    switch (p) {
    case Protocol::AF:
    case Protocol::SR:
        return 2;
    case Protocol::Direct:
    case Protocol::DF:
        return 1;
    }
    return 1;
}

constexpr std::string_view to_string(Protocol p) noexcept
{
    switch (p) {
    case Protocol::Direct:
        return "direct";
    case Protocol::AF:
        return "af";
    case Protocol::DF:
        return "df";
    case Protocol::SR:
        return "sr";
    }
    return "?";
}

/// Case-insensitive; accepts "direct", "af", "df", "sr".
std::optional<Protocol> parse_protocol(std::string_view name);

/// (P_out, N_I, T_I). The duration is absent when the rate is zero, since
/// P_out / N_I is then 0/0.
struct OutageMetrics {
    double p_out = 0.0;
    double aor = 0.0;            // Hz
    std::optional<double> aod;   // seconds
};

inline OutageMetrics make_metrics(double p_out, double aor)
{
    OutageMetrics m{p_out, aor, std::nullopt};
    if (aor > 0.0) {
        m.aod = p_out / aor;
    }
    return m;
}

}  // namespace coopout
