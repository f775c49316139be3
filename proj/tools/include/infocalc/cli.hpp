// Copyright 2026 The infocalc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "infocalc/algorithms.hpp"

namespace infocalc::cli {

/// Runs one command line (without the program name). Returns 0 on success,
/// 2 when the scheduling problem is infeasible and 1 on errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInfeasible = 2;

/// Published services for the impaired third and fourth paths of the case
/// study: <5e^{-x/5}, (2/3)rt - (8/3)rd> and <6e^{-x/6}, (2/3)rt - (11/3)rd>,
/// with r and d read from the paths' first nodes.
ServiceOverrides<Rational> reference_overrides_exact(const Scenario& scenario);
ServiceOverrides<double> reference_overrides(const Scenario& scenario);

/// Exact services as JSON; rationals are written as "num/den" strings.
nlohmann::json service_to_json(const IssSpec<Rational>& service);
IssSpec<Rational> service_from_json(const nlohmann::json& j);

nlohmann::json outcome_to_json(const SubsetOutcome& outcome);
SubsetOutcome outcome_from_json(const nlohmann::json& j);

/// Curve written in units of a reference rate r and latency d, e.g.
/// "(13/5)rt - (28/5)rd". Empty if the coefficients are not small rationals.
std::string symbolic_curve(const ExactCurve& curve, const Rational& r, const Rational& d);

}  // namespace infocalc::cli
