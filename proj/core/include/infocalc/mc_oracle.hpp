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

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "infocalc/algorithms.hpp"

namespace infocalc {

struct TraceConfig {
  std::size_t runs = 10000;
  std::uint64_t seed = 1;
  double time_step = 1e-3;
  double horizon = 0.5;
  /// Delay used for the backlog-within-delay quantity; <= 0 picks the
  /// median delay quantile of each path.
  double tau = 0.0;
  std::size_t grid_points = 20;
  double p_high = 0.5;
  double p_low = 1e-3;
  /// 0 uses the hardware concurrency.
  unsigned threads = 0;
};

enum class Quantity { kBacklog, kDelay, kBacklogWithinDelay };

std::string to_string(Quantity q);

struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;
};

/// 95% Wilson score interval for k successes in n trials.
WilsonInterval wilson_interval(std::size_t k, std::size_t n, double z = 1.959963984540054);

struct TailPoint {
  double threshold = 0.0;
  double target_p = 0.0;
  std::size_t violations = 0;
  double empirical = 0.0;
  WilsonInterval ci;
  double bound = 1.0;
  bool pass = true;
};

struct TailReport {
  std::string path;
  Quantity quantity = Quantity::kBacklog;
  double tau = 0.0;
  std::size_t runs = 0;
  std::vector<TailPoint> points;
  bool pass = true;
};

/// Cumulative arrivals and departures of one path on the time grid.
struct PathTrace {
  std::string path;
  std::vector<double> arrivals;
  std::vector<double> departures;
};

std::uint64_t splitmix64(std::uint64_t& state);
/// Seed of run `run` derived from the master seed.
std::uint64_t run_seed(std::uint64_t master, std::uint64_t run);

/// Sample from the distribution with tail Prob{W > w} = min(1, f(w)).
double sample_tail(const BoundingFunction& f, double u);

/// One sample path of every path in `schedule`.
std::vector<PathTrace> simulate_once(const Scenario& scenario, const SubsetOutcome& schedule,
                                     const TraceConfig& config, std::uint64_t run);

/// Cumulative impairment process of one endpoint, on the time grid.
std::vector<double> sample_impairment(const Isa& process, const TraceConfig& config,
                                      std::uint64_t run);

/// Empirical tails of backlog, delay and backlog-within-delay against the
/// analytic bounds, one report per path and quantity.
std::vector<TailReport> simulate(const Scenario& scenario, const SubsetOutcome& schedule,
                                 const TraceConfig& config);

std::string to_csv(const std::vector<TailReport>& reports);
nlohmann::json to_json(const std::vector<TailReport>& reports);

}  // namespace infocalc
