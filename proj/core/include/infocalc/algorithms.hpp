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

#include <optional>
#include <string>
#include <vector>

#include "infocalc/scenario.hpp"

namespace infocalc {

constexpr std::size_t kMaxRatecalPaths = 24;

/// Effective stochastic service of one subset of paths used together.
template <class T>
struct AchievableRate {
  std::vector<std::string> subset;
  IssSpec<T> service;
};

/// True when `a` is strictly better than `b`: a.curve(t) > b.curve(t) for
/// all t > 0 (and >= at 0), and a.bounding(x) <= b.bounding(x) for x >= 0.
/// Curves are compared exactly; non-exponential bounding functions are
/// compared on a sampled grid.
template <class T>
bool dominates(const IssSpec<T>& a, const IssSpec<T>& b) {
  // Curves: the difference is piecewise linear, so breakpoints and the
  // tail slope decide.
  std::vector<T> xs = a.curve.breakpoints();
  const auto bb = b.curve.breakpoints();
  xs.insert(xs.end(), bb.begin(), bb.end());
  detail::sort_unique(xs);
  if (a.curve(T(0)) < b.curve(T(0))) return false;
  for (const auto& x : xs) {
    if (x > T(0) && !(a.curve(x) > b.curve(x))) return false;
  }
  if (a.curve.asymptotic_rate() < b.curve.asymptotic_rate()) return false;
  if (xs.size() == 1 && a.curve(T(0)) == b.curve(T(0)) &&
      a.curve.asymptotic_rate() == b.curve.asymptotic_rate()) {
    return false;
  }
  // Bounding functions.
  const auto* ea = a.bounding.exponential_params();
  const auto* eb = b.bounding.exponential_params();
  if (ea && eb && ea->x0 == T(0) && eb->x0 == T(0)) return ea->a <= eb->a && ea->b <= eb->b;
  const auto* za = a.bounding.zero_params();
  if (za && !(za->shift > T(0))) return true;
  const double x_max = std::max(a.bounding.support_end(), b.bounding.support_end()) + 1.0;
  const int n = 20000;
  for (int i = 0; i <= n; ++i) {
    const double x = x_max * i / n;
    if (a.bounding(x) > b.bounding(x) * (1 + 1e-12)) return false;
  }
  return true;
}

/// Effective service of every non-empty path subset, ordered by subset size
/// then path order. With `prune`, subsets dominated by another are removed.
template <class T>
std::vector<AchievableRate<T>> ratecal(const Topology<T>& topo, bool prune = false,
                                       const ServiceOverrides<T>* overrides = nullptr) {
  const std::size_t k = topo.paths.size();
  if (k > kMaxRatecalPaths) {
    throw Error(ErrorKind::kSubsetLimitExceeded,
                std::to_string(k) + " paths exceed the enumeration limit of " +
                    std::to_string(kMaxRatecalPaths));
  }
  std::vector<unsigned long> masks;
  for (unsigned long m = 1; m < (1ul << k); ++m) masks.push_back(m);
  std::stable_sort(masks.begin(), masks.end(), [](unsigned long x, unsigned long y) {
    const int px = __builtin_popcountl(x), py = __builtin_popcountl(y);
    if (px != py) return px < py;
    // Lexicographic on path indices.
    for (unsigned long bit = 1; bit; bit <<= 1) {
      if ((x & bit) != (y & bit)) return (x & bit) != 0;
    }
    return false;
  });
  std::vector<AchievableRate<T>> out;
  for (const auto m : masks) {
    std::vector<std::string> subset;
    for (std::size_t i = 0; i < k; ++i) {
      if (m & (1ul << i)) subset.push_back(topo.paths[i].id);
    }
    std::vector<IssSpec<T>> services;
    for (const auto& id : subset) services.push_back(effective_path_service(topo, subset, id, overrides));
    out.push_back({subset, parallel(services)});
  }
  if (!prune) return out;
  std::vector<AchievableRate<T>> kept;
  for (std::size_t i = 0; i < out.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < out.size() && !dominated; ++j) {
      dominated = j != i && dominates(out[j].service, out[i].service);
    }
    if (!dominated) kept.push_back(out[i]);
  }
  return kept;
}

/// Order in which paths are filled by the scheduler.
enum class PathOrder {
  kNominalRate,    // stand-alone path rate, ties by declaration order
  kEffectiveRate,  // rate within the chosen subset, ties by declaration order
};

enum class Infeasibility { kNone, kRate, kDelay, kBelowDemand };

std::string to_string(Infeasibility reason);

struct BflrOptions {
  bool prune = false;
  PathOrder path_order = PathOrder::kNominalRate;
  const ServiceOverrides<double>* overrides = nullptr;
};

/// Sources placed on one path and the delay guarantee of that placement.
struct PathAssignment {
  std::string path;
  double path_rate = 0.0;
  std::vector<std::string> sources;
  double info_rate = 0.0;
  /// Delay quantile of the accepted set (NaN if nothing was placed).
  double delay_quantile = 0.0;
  /// First source that failed the delay check, if any, and the quantile
  /// the path would have had with it.
  std::optional<std::string> rejected_source;
  double rejected_quantile = 0.0;
};

struct SubsetOutcome {
  std::vector<std::string> subset;
  double rate = 0.0;
  bool feasible = false;
  Infeasibility reason = Infeasibility::kNone;
  std::vector<PathAssignment> assignment;
  std::vector<std::string> unassigned;
  /// Smallest (delay bound - quantile) over accepted placements, or the
  /// most negative rejected margin when infeasible by delay.
  double margin = 0.0;
};

struct BflrResult {
  bool feasible = false;
  std::optional<SubsetOutcome> chosen;
  /// Subsets considered, in the order tried.
  std::vector<SubsetOutcome> evaluated;
};

/// Greedy best-fit placement of all sources on the paths of `subset`.
SubsetOutcome evaluate_subset(const Scenario& scenario, const std::vector<std::string>& subset,
                              double delay, double p, const BflrOptions& options = {});

/// Tries subsets by decreasing rate and returns the first feasible one.
BflrResult bflr(const Scenario& scenario, double delay, double p, const BflrOptions& options = {});

/// Per-subset evaluation over every subset whose rate covers the demand.
std::vector<SubsetOutcome> bflr_all_subsets(const Scenario& scenario, double delay, double p,
                                            const BflrOptions& options = {});

struct RatioOptions {
  const ServiceOverrides<double>* overrides = nullptr;
  PathOrder path_order = PathOrder::kNominalRate;
  GridOptions grid = GridOptions::defaults();
};

struct PathRatioDetail {
  std::string path;
  std::vector<std::string> sources;
  /// inf_v [beta(v) - alpha(v - tau)]; NaN when unbounded below.
  double gap = 0.0;
  /// Bound on the probability that the path misses the delay tau.
  double delay_violation = 1.0;
  /// Level of undelivered information exceeded with probability <= p.
  double quantile = 0.0;
};

struct RatioResult {
  std::vector<std::string> subset;
  double tau = 0.0;
  double p = 0.0;
  double horizon = 0.0;
  double total_information = 0.0;
  double undelivered_quantile = 0.0;
  double ratio = 0.0;
  /// The bound carries no information (undelivered exceeds the total).
  bool vacuous = false;
  std::vector<PathRatioDetail> paths;
  std::vector<std::string> unassigned;
};

/// Lower bound on the fraction of the information produced in [0, horizon]
/// that is delivered within tau, holding with probability >= 1 - p.
RatioResult delivery_ratio(const Scenario& scenario, const std::vector<std::string>& subset,
                           double tau, double p, double horizon, const RatioOptions& options = {});

/// Horizon at which the delivery-ratio bound equals `target`.
double calibrate_horizon(const Scenario& scenario, const std::vector<std::string>& subset,
                         double tau, double p, double target, const RatioOptions& options = {});

}  // namespace infocalc
