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

#include <stdexcept>
#include <string>

namespace coopout {

// Argument outside the mathematical domain of a function (e.g. K0 at z <= 0).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Malformed call: bad quadrature order, empty interval, invalid scenario.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A quadrature did not reach its tolerance before the order cap.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double last_estimate, double previous_estimate)
        : std::runtime_error(what), last_(last_estimate), previous_(previous_estimate)
    {
    }

    double last_estimate() const noexcept { return last_; }
    double previous_estimate() const noexcept { return previous_; }

private:
    double last_;
    double previous_;
};

// Outage rate requested for a scenario in which no node moves.
class DegenerateMobilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Time-correlated trace requested for a link whose both ends are static.
class StaticLinkError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace coopout
