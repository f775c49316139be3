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

#include "infocalc/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace infocalc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool contains(const std::vector<std::string>& v, const std::string& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

double delay_quantile_or_inf(const Isa& arrival, const Iss& service, double p) {
  try {
    return delay_bound(arrival, service, p).derived_quantile;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kInfiniteDeviation) return kInf;
    throw;
  }
}

struct PathView {
  std::string id;
  std::size_t declared = 0;
  Iss service;
  double nominal_rate = 0.0;
};

std::vector<PathView> ordered_paths(const Scenario& scenario, const Topology<double>& topo,
                                    const std::vector<std::string>& subset,
                                    const BflrOptions& options) {
  std::vector<PathView> paths;
  for (std::size_t i = 0; i < topo.paths.size(); ++i) {
    const auto& id = topo.paths[i].id;
    if (!contains(subset, id)) continue;
    PathView v;
    v.id = id;
    v.declared = i;
    v.service = effective_path_service(topo, subset, id, options.overrides);
    v.nominal_rate = effective_path_service(topo, {id}, id).asymptotic_rate();
    paths.push_back(std::move(v));
  }
  for (const auto& id : subset) {
    if (std::none_of(paths.begin(), paths.end(), [&](const PathView& v) { return v.id == id; })) {
      throw Error(ErrorKind::kInvalidArgument, "unknown path " + id);
    }
  }
  (void)scenario;
  const bool nominal = options.path_order == PathOrder::kNominalRate;
  std::stable_sort(paths.begin(), paths.end(), [&](const PathView& a, const PathView& b) {
    const double ra = nominal ? a.nominal_rate : a.service.asymptotic_rate();
    const double rb = nominal ? b.nominal_rate : b.service.asymptotic_rate();
    return ra > rb;
  });
  return paths;
}

SubsetOutcome place_sources(const Scenario& scenario, const std::vector<std::string>& subset,
                            double delay, double p, const BflrOptions& options) {
  const auto topo = build_topology(scenario);
  const auto paths = ordered_paths(scenario, topo, subset, options);
  auto sources = scenario.source_models();
  std::stable_sort(sources.begin(), sources.end(), [&](const SourceModel& a, const SourceModel& b) {
    return information_rate(a, scenario.unit) > information_rate(b, scenario.unit);
  });
  const auto rate_of = [&](const std::vector<SourceModel>& set) {
    return set.empty() ? 0.0 : joint_information_rate(set, scenario.spatial, scenario.unit);
  };

  SubsetOutcome out;
  out.subset = subset;
  for (const auto& v : paths) out.rate += v.service.asymptotic_rate();
  std::vector<bool> processed(sources.size(), false);
  double margin = kInf;
  double worst_rejected = kInf;

  for (const auto& path : paths) {
    PathAssignment pa;
    pa.path = path.id;
    pa.path_rate = path.service.asymptotic_rate();
    pa.delay_quantile = std::numeric_limits<double>::quiet_NaN();
    // Best fit: the fastest unplaced source slower than the path.
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < sources.size(); ++i) {
      if (processed[i]) continue;
      if (information_rate(sources[i], scenario.unit) < pa.path_rate) {
        best = i;
        break;
      }
    }
    if (!best) {
      out.assignment.push_back(std::move(pa));
      continue;
    }
    std::vector<SourceModel> placed{sources[*best]};
    double q = delay_quantile_or_inf(group_information(placed, scenario.spatial, scenario.unit),
                                     path.service, p);
    if (!std::isfinite(q) || q > delay) {
      pa.rejected_source = sources[*best].id;
      pa.rejected_quantile = q;
      worst_rejected = std::min(worst_rejected, delay - q);
      out.assignment.push_back(std::move(pa));
      continue;
    }
    processed[*best] = true;
    pa.delay_quantile = q;
    // Grow the set with the most redundant unplaced source while the
    // delay guarantee holds.
    while (true) {
      std::optional<std::size_t> pick;
      double best_red = -kInf;
      const double base = rate_of(placed);
      for (std::size_t i = 0; i < sources.size(); ++i) {
        if (processed[i]) continue;
        auto trial = placed;
        trial.push_back(sources[i]);
        const double red = base + information_rate(sources[i], scenario.unit) - rate_of(trial);
        if (!pick || red > best_red + 1e-9 * (1.0 + std::fabs(best_red))) {
          pick = i;
          best_red = red;
        }
      }
      if (!pick) break;
      auto trial = placed;
      trial.push_back(sources[*pick]);
      const double tq = delay_quantile_or_inf(
          group_information(trial, scenario.spatial, scenario.unit), path.service, p);
      if (!std::isfinite(tq) || tq > delay) {
        pa.rejected_source = sources[*pick].id;
        pa.rejected_quantile = tq;
        worst_rejected = std::min(worst_rejected, delay - tq);
        break;
      }
      processed[*pick] = true;
      placed = std::move(trial);
      pa.delay_quantile = tq;
    }
    for (const auto& s : placed) pa.sources.push_back(s.id);
    pa.info_rate = rate_of(placed);
    margin = std::min(margin, delay - pa.delay_quantile);
    out.assignment.push_back(std::move(pa));
  }
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (!processed[i]) out.unassigned.push_back(sources[i].id);
  }
  out.feasible = out.unassigned.empty();
  out.margin = out.feasible ? margin : worst_rejected;
  return out;
}

}  // namespace

std::string to_string(Infeasibility reason) {
  switch (reason) {
    case Infeasibility::kNone: return "none";
    case Infeasibility::kRate: return "rate";
    case Infeasibility::kDelay: return "delay";
    case Infeasibility::kBelowDemand: return "below_demand";
  }
  return "unknown";
}

SubsetOutcome evaluate_subset(const Scenario& scenario, const std::vector<std::string>& subset,
                              double delay, double p, const BflrOptions& options) {
  auto out = place_sources(scenario, subset, delay, p, options);
  if (!out.feasible) {
    if (std::isinf(delay)) {
      out.reason = Infeasibility::kRate;
    } else {
      const auto relaxed = place_sources(scenario, subset, kInf, p, options);
      out.reason = relaxed.feasible ? Infeasibility::kDelay : Infeasibility::kRate;
    }
  }
  return out;
}

namespace {

double demand_rate(const Scenario& scenario) {
  const auto models = scenario.source_models();
  return models.empty() ? 0.0 : joint_information_rate(models, scenario.spatial, scenario.unit);
}

bool covers_demand(double rate, double demand) { return rate >= demand * (1 - 1e-12); }

}  // namespace

BflrResult bflr(const Scenario& scenario, double delay, double p, const BflrOptions& options) {
  const auto topo = build_topology(scenario);
  auto rates = ratecal(topo, options.prune, options.overrides);
  const double demand = demand_rate(scenario);
  std::erase_if(rates, [&](const AchievableRate<double>& r) {
    return !covers_demand(r.service.asymptotic_rate(), demand);
  });
  std::stable_sort(rates.begin(), rates.end(), [](const auto& a, const auto& b) {
    return a.service.asymptotic_rate() > b.service.asymptotic_rate();
  });
  BflrResult result;
  for (const auto& r : rates) {
    auto outcome = evaluate_subset(scenario, r.subset, delay, p, options);
    result.evaluated.push_back(outcome);
    if (outcome.feasible) {
      result.feasible = true;
      result.chosen = std::move(outcome);
      break;
    }
  }
  return result;
}

std::vector<SubsetOutcome> bflr_all_subsets(const Scenario& scenario, double delay, double p,
                                            const BflrOptions& options) {
  const auto topo = build_topology(scenario);
  const auto rates = ratecal(topo, false, options.overrides);
  const double demand = demand_rate(scenario);
  std::vector<SubsetOutcome> out;
  for (const auto& r : rates) {
    if (!covers_demand(r.service.asymptotic_rate(), demand)) {
      SubsetOutcome o;
      o.subset = r.subset;
      o.rate = r.service.asymptotic_rate();
      o.reason = Infeasibility::kBelowDemand;
      out.push_back(std::move(o));
      continue;
    }
    out.push_back(evaluate_subset(scenario, r.subset, delay, p, options));
  }
  return out;
}

namespace {

struct UndeliveredModel {
  std::vector<PathRatioDetail> paths;
  std::vector<std::string> unassigned;
  double quantile = 0.0;  // undelivered information on the assigned paths
};

UndeliveredModel undelivered(const Scenario& scenario, const std::vector<std::string>& subset,
                             double tau, double p, const RatioOptions& options) {
  if (!(p > 0 && p < 1)) throw Error(ErrorKind::kInvalidArgument, "violation probability must be in (0, 1)");
  if (!(tau >= 0)) throw Error(ErrorKind::kInvalidArgument, "delay bound must be non-negative");
  BflrOptions bo;
  bo.overrides = options.overrides;
  bo.path_order = options.path_order;
  const auto placement = evaluate_subset(scenario, subset, kInf, p, bo);
  const auto topo = build_topology(scenario);

  struct Term {
    BoundingFunction fg;
    std::optional<double> gap;
    double cap = 1.0;
  };
  UndeliveredModel out;
  out.unassigned = placement.unassigned;
  std::vector<Term> terms;
  for (const auto& pa : placement.assignment) {
    if (pa.sources.empty()) continue;
    std::vector<SourceModel> members;
    for (const auto& id : pa.sources) members.push_back(scenario.source(id));
    const auto arrival = group_information(members, scenario.spatial, scenario.unit);
    const auto service = effective_path_service(topo, subset, pa.path, options.overrides);
    Term t;
    t.fg = bf_convolve(arrival.bounding, service.bounding);
    t.gap = shifted_gap_infimum(service.curve, arrival.curve, tau);
    try {
      t.cap = delay_violation(arrival, service, tau).bound_value;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kInfiniteDeviation) throw;
      t.cap = 1.0;
    }
    PathRatioDetail d;
    d.path = pa.path;
    d.sources = pa.sources;
    d.gap = t.gap ? *t.gap : std::numeric_limits<double>::quiet_NaN();
    d.delay_violation = t.cap;
    out.paths.push_back(d);
    terms.push_back(std::move(t));
  }
  const auto level = [](const Term& t, double q) {
    if (t.cap <= q) return 0.0;
    if (!t.gap) return kInf;
    return std::max(0.0, bf_invert(t.fg, q) - *t.gap);
  };
  for (std::size_t i = 0; i < terms.size(); ++i) out.paths[i].quantile = level(terms[i], p);
  if (terms.empty()) return out;
  if (terms.size() == 1) {
    out.quantile = out.paths.front().quantile;
    return out;
  }
  // Sum of the per-path excesses: convolve the capped bounds.
  double x_max = 0.0;
  for (const auto& t : terms) x_max += level(t, p / static_cast<double>(terms.size()));
  if (std::isinf(x_max)) {
    out.quantile = kInf;
    return out;
  }
  if (x_max <= 0) return out;
  GridOptions grid = options.grid;
  grid.x_max = x_max;
  const std::size_t n = std::max<std::size_t>(grid.max_points, 2);
  const double step = std::max(grid.step, x_max / static_cast<double>(n - 1));
  std::optional<BoundingFunction> combined;
  for (const auto& t : terms) {
    const std::size_t m = static_cast<std::size_t>(std::ceil(x_max / step)) + 1;
    std::vector<double> values(m);
    for (std::size_t j = 0; j < m; ++j) {
      const double x = static_cast<double>(j) * step;
      values[j] = std::min(t.gap ? t.fg(x + *t.gap) : 1.0, t.cap);
    }
    auto g = BoundingFunction::numeric(0.0, step, std::move(values));
    combined = combined ? numeric_convolve(*combined, g, grid) : g;
  }
  try {
    out.quantile = bf_invert(*combined, p);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kUnreachableProbability) throw;
    out.quantile = x_max;
  }
  out.quantile = std::min(out.quantile, x_max);
  return out;
}

double information_at(const Scenario& scenario, const std::vector<std::string>& ids, double t) {
  if (ids.empty()) return 0.0;
  std::vector<SourceModel> members;
  for (const auto& id : ids) members.push_back(scenario.source(id));
  return group_information(members, scenario.spatial, scenario.unit).curve(t);
}

std::vector<std::string> all_source_ids(const Scenario& scenario) {
  std::vector<std::string> out;
  for (const auto& s : scenario.sources) out.push_back(s.model.id);
  return out;
}

double ratio_from(double total, double lost) {
  if (lost <= 0) return 1.0;
  return (total - lost) / total;
}

}  // namespace

RatioResult delivery_ratio(const Scenario& scenario, const std::vector<std::string>& subset,
                           double tau, double p, double horizon, const RatioOptions& options) {
  if (!(horizon > 0)) throw Error(ErrorKind::kInvalidArgument, "horizon must be positive");
  if (scenario.sources.empty()) throw Error(ErrorKind::kInvalidArgument, "scenario has no sources");
  const auto model = undelivered(scenario, subset, tau, p, options);
  RatioResult r;
  r.subset = subset;
  r.tau = tau;
  r.p = p;
  r.horizon = horizon;
  r.paths = model.paths;
  r.unassigned = model.unassigned;
  r.total_information = information_at(scenario, all_source_ids(scenario), horizon);
  r.undelivered_quantile = model.quantile + information_at(scenario, model.unassigned, horizon);
  r.ratio = ratio_from(r.total_information, r.undelivered_quantile);
  if (!(r.ratio >= 0)) {
    r.ratio = 0.0;
    r.vacuous = true;
  }
  return r;
}

double calibrate_horizon(const Scenario& scenario, const std::vector<std::string>& subset,
                         double tau, double p, double target, const RatioOptions& options) {
  if (!(target > 0 && target < 1)) throw Error(ErrorKind::kInvalidArgument, "target ratio must be in (0, 1)");
  if (scenario.sources.empty()) throw Error(ErrorKind::kInvalidArgument, "scenario has no sources");
  const auto model = undelivered(scenario, subset, tau, p, options);
  if (std::isinf(model.quantile)) {
    throw Error(ErrorKind::kInvalidArgument, "undelivered information is unbounded for this subset");
  }
  const auto ids = all_source_ids(scenario);
  const auto ratio_at = [&](double h) {
    const double total = information_at(scenario, ids, h);
    return ratio_from(total, model.quantile + information_at(scenario, model.unassigned, h));
  };
  double lo = 0.0;
  double hi = 1.0;
  while (ratio_at(hi) < target) {
    hi *= 2;
    if (hi > 1e12) throw Error(ErrorKind::kInvalidArgument, "target ratio is not reachable");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (ratio_at(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace infocalc
