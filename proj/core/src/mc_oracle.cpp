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

#include "infocalc/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

namespace infocalc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SimNode {
  Curve beta;
  BoundingFunction deficit;
  std::vector<Isa> impairments;
};

struct SimPath {
  std::string id;
  Isa arrival;
  Iss service;
  std::vector<SimNode> nodes;
  double max_rate = 0.0;
};

std::vector<SimPath> build_paths(const Scenario& scenario, const SubsetOutcome& schedule) {
  const auto topo = build_topology(scenario);
  const auto& active = schedule.subset;
  const auto is_active = [&](const std::string& id) {
    return std::find(active.begin(), active.end(), id) != active.end();
  };
  std::vector<SimPath> out;
  for (const auto& pa : schedule.assignment) {
    SimPath sp;
    sp.id = pa.path;
    if (pa.sources.empty()) {
      sp.arrival = Isa{BoundingFunction::zero(), Curve::zero()};
    } else {
      std::vector<SourceModel> members;
      for (const auto& id : pa.sources) members.push_back(scenario.source(id));
      sp.arrival = group_information(members, scenario.spatial, scenario.unit);
    }
    sp.service = effective_path_service(topo, active, pa.path);
    const auto& path = topo.path(pa.path);
    for (std::size_t k = 0; k < path.nodes.size(); ++k) {
      SimNode node;
      node.beta = path.nodes[k].service.curve;
      node.deficit = path.nodes[k].service.bounding;
      for (const auto& link : topo.impairments) {
        if (!is_active(link.a.path) || !is_active(link.b.path)) continue;
        if (link.a.path == pa.path && link.a.node == k) node.impairments.push_back(link.process_a);
        if (link.b.path == pa.path && link.b.node == k) node.impairments.push_back(link.process_b);
      }
      sp.max_rate = std::max(sp.max_rate, node.beta.asymptotic_rate());
      sp.nodes.push_back(std::move(node));
    }
    out.push_back(std::move(sp));
  }
  return out;
}

class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : rng_(seed) {}
  // Uniform on (0, 1).
  double operator()() { return (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53; }

 private:
  std::mt19937_64 rng_;
};

std::size_t steps(const TraceConfig& c) {
  if (!(c.time_step > 0) || !(c.horizon >= c.time_step)) {
    throw Error(ErrorKind::kConfigError, "simulation needs 0 < time_step < horizon");
  }
  return static_cast<std::size_t>(std::ceil(c.horizon / c.time_step));
}

std::vector<double> cumulative_process(const Curve& curve, double jump, std::size_t n, double dt,
                                       bool positive_part) {
  std::vector<double> v(n + 1, 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    const double x = curve(static_cast<double>(k) * dt) + jump;
    v[k] = positive_part ? std::max(0.0, x) : x;
  }
  return v;
}

std::vector<PathTrace> run_paths(const std::vector<SimPath>& paths, const TraceConfig& config,
                                 std::uint64_t run) {
  const std::size_t n = steps(config);
  const double dt = config.time_step;
  Uniform u(run_seed(config.seed, run));
  std::vector<PathTrace> out;
  for (const auto& sp : paths) {
    PathTrace tr;
    tr.path = sp.id;
    const double w = sample_tail(sp.arrival.bounding, u());
    tr.arrivals = cumulative_process(sp.arrival.curve, w, n, dt, false);
    tr.arrivals[0] = 0.0;
    std::vector<double> input = tr.arrivals;
    for (const auto& node : sp.nodes) {
      const double x = sample_tail(node.deficit, u());
      // Cumulative capacity max(0, beta+(t) - X).
      std::vector<double> cap(n + 1, 0.0);
      for (std::size_t k = 1; k <= n; ++k) {
        cap[k] = std::max(0.0, std::max(0.0, node.beta(static_cast<double>(k) * dt)) - x);
      }
      std::vector<std::vector<double>> imp;
      for (const auto& proc : node.impairments) {
        imp.push_back(cumulative_process(proc.curve, sample_tail(proc.bounding, u()), n, dt, true));
      }
      std::vector<double> output(n + 1, 0.0);
      double imp_backlog = 0.0;
      for (std::size_t k = 1; k <= n; ++k) {
        double budget = cap[k] - cap[k - 1];
        for (const auto& i : imp) imp_backlog += i[k] - i[k - 1];
        const double served_imp = std::min(imp_backlog, budget);
        imp_backlog -= served_imp;
        budget -= served_imp;
        output[k] = std::min(input[k], output[k - 1] + budget);
      }
      input = std::move(output);
    }
    tr.departures = std::move(input);
    out.push_back(std::move(tr));
  }
  return out;
}

struct RunStats {
  double backlog = 0.0;
  double delay = 0.0;
  double bwd = 0.0;
};

RunStats measure(const PathTrace& tr, double dt, std::size_t delay_eval, std::size_t tau_steps) {
  RunStats s;
  const std::size_t n = tr.arrivals.size() - 1;
  for (std::size_t k = 0; k <= n; ++k) s.backlog = std::max(s.backlog, tr.arrivals[k] - tr.departures[k]);
  std::size_t j = 0;
  for (std::size_t k = 1; k <= delay_eval; ++k) {
    const double target = tr.arrivals[k] - 1e-9 * (1.0 + std::fabs(tr.arrivals[k]));
    j = std::max(j, k);
    while (j <= n && tr.departures[j] < target) ++j;
    const double d = static_cast<double>(j - k) * dt;
    s.delay = std::max(s.delay, d);
  }
  s.bwd = -kInf;
  for (std::size_t k = 0; k + tau_steps <= n; ++k) {
    s.bwd = std::max(s.bwd, tr.arrivals[k] - tr.departures[k + tau_steps]);
  }
  return s;
}

struct Grid {
  std::vector<double> p;
  std::vector<double> threshold;
  std::vector<double> bound;
};

std::vector<double> probability_grid(const TraceConfig& c) {
  const double lo = std::max(c.p_low, 10.0 / static_cast<double>(std::max<std::size_t>(c.runs, 1)));
  const double hi = c.p_high;
  if (!(lo > 0 && lo < hi && hi < 1)) throw Error(ErrorKind::kInvalidArgument, "invalid probability grid");
  std::vector<double> p(c.grid_points);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double t = p.size() == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(p.size() - 1);
    p[i] = std::exp(std::log(hi) + t * (std::log(lo) - std::log(hi)));
  }
  return p;
}

template <class Quantile>
Grid make_grid(const std::vector<double>& ps, double slack, Quantile quantile) {
  Grid g;
  for (double p : ps) {
    g.p.push_back(p);
    double q = kInf, b = 1.0;
    try {
      const auto r = quantile(p);
      q = r.derived_quantile;
      b = r.bound_value;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kInfiniteDeviation && e.kind() != ErrorKind::kUnboundedDeconvolution &&
          e.kind() != ErrorKind::kUnreachableProbability) {
        throw;
      }
    }
    g.threshold.push_back(q + slack);
    g.bound.push_back(std::isfinite(q) ? b : 1.0);
  }
  return g;
}

}  // namespace

std::string to_string(Quantity q) {
  switch (q) {
    case Quantity::kBacklog: return "backlog";
    case Quantity::kDelay: return "delay";
    case Quantity::kBacklogWithinDelay: return "backlog_within_delay";
  }
  return "unknown";
}

WilsonInterval wilson_interval(std::size_t k, std::size_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double ph = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1 + z2 / nn;
  const double centre = (ph + z2 / (2 * nn)) / denom;
  const double half = z * std::sqrt(ph * (1 - ph) / nn + z2 / (4 * nn * nn)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t run_seed(std::uint64_t master, std::uint64_t run) {
  std::uint64_t state = master ^ (run * 0xD1B54A32D192ED03ull);
  splitmix64(state);
  return splitmix64(state);
}

double sample_tail(const BoundingFunction& f, double u) {
  if (const auto* z = f.zero_params()) return std::max(0.0, z->shift);
  if (f(0.0) <= u) return 0.0;
  return bf_invert(f, u);
}

std::vector<PathTrace> simulate_once(const Scenario& scenario, const SubsetOutcome& schedule,
                                     const TraceConfig& config, std::uint64_t run) {
  return run_paths(build_paths(scenario, schedule), config, run);
}

std::vector<double> sample_impairment(const Isa& process, const TraceConfig& config,
                                      std::uint64_t run) {
  Uniform u(run_seed(config.seed, run));
  return cumulative_process(process.curve, sample_tail(process.bounding, u()), steps(config),
                            config.time_step, true);
}

std::vector<TailReport> simulate(const Scenario& scenario, const SubsetOutcome& schedule,
                                 const TraceConfig& config) {
  if (config.runs == 0) throw Error(ErrorKind::kConfigError, "at least one run is required");
  const auto paths = build_paths(scenario, schedule);
  const std::size_t n = steps(config);
  const double dt = config.time_step;
  const auto ps = probability_grid(config);

  struct PathPlan {
    double tau = 0.0;
    std::size_t tau_steps = 0;
    std::size_t delay_eval = 0;
    Grid backlog, delay, bwd;
  };
  std::vector<PathPlan> plans;
  for (const auto& sp : paths) {
    PathPlan plan;
    const double slack_b = sp.max_rate * dt;
    plan.tau = config.tau;
    if (!(plan.tau > 0)) {
      try {
        plan.tau = delay_bound(sp.arrival, sp.service, 0.5).derived_quantile;
      } catch (const Error&) {
        plan.tau = 0.0;
      }
    }
    plan.tau_steps = static_cast<std::size_t>(std::floor(plan.tau / dt + 1e-9));
    plan.backlog = make_grid(ps, slack_b, [&](double p) { return backlog_quantile(sp.arrival, sp.service, p); });
    plan.delay = make_grid(ps, dt, [&](double p) { return delay_bound(sp.arrival, sp.service, p); });
    plan.bwd = make_grid(ps, slack_b, [&](double p) {
      return backlog_within_delay_quantile(sp.arrival, sp.service, plan.tau, p);
    });
    double max_delay = 0.0;
    for (double t : plan.delay.threshold) {
      if (std::isfinite(t)) max_delay = std::max(max_delay, t);
    }
    const auto reserve = static_cast<std::size_t>(std::ceil(max_delay / dt)) + 1;
    plan.delay_eval = reserve < n ? n - reserve : 0;
    plans.push_back(std::move(plan));
  }

  const std::size_t np = paths.size();
  std::vector<RunStats> stats(config.runs * np);
  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, config.runs));
  const auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      const auto traces = run_paths(paths, config, r);
      for (std::size_t i = 0; i < np; ++i) {
        stats[r * np + i] = measure(traces[i], dt, plans[i].delay_eval, plans[i].tau_steps);
      }
    }
  };
  if (threads <= 1) {
    worker(0, config.runs);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (config.runs + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t b = t * chunk;
      const std::size_t e = std::min(config.runs, b + chunk);
      if (b < e) pool.emplace_back(worker, b, e);
    }
    for (auto& th : pool) th.join();
  }

  std::vector<TailReport> reports;
  for (std::size_t i = 0; i < np; ++i) {
    const auto add_report = [&](Quantity q, const Grid& grid, double RunStats::*field) {
      TailReport rep;
      rep.path = paths[i].id;
      rep.quantity = q;
      rep.tau = plans[i].tau;
      rep.runs = config.runs;
      for (std::size_t j = 0; j < grid.p.size(); ++j) {
        TailPoint pt;
        pt.threshold = grid.threshold[j];
        pt.target_p = grid.p[j];
        pt.bound = grid.bound[j];
        for (std::size_t r = 0; r < config.runs; ++r) {
          if (stats[r * np + i].*field > pt.threshold) ++pt.violations;
        }
        pt.empirical = static_cast<double>(pt.violations) / static_cast<double>(config.runs);
        pt.ci = wilson_interval(pt.violations, config.runs);
        if (pt.bound >= 1.0) {
          pt.pass = true;
        } else if (pt.bound <= 0.0) {
          pt.pass = pt.violations == 0;
        } else {
          pt.pass = pt.ci.high <= pt.bound;
        }
        rep.pass = rep.pass && pt.pass;
        rep.points.push_back(pt);
      }
      reports.push_back(std::move(rep));
    };
    add_report(Quantity::kBacklog, plans[i].backlog, &RunStats::backlog);
    add_report(Quantity::kDelay, plans[i].delay, &RunStats::delay);
    add_report(Quantity::kBacklogWithinDelay, plans[i].bwd, &RunStats::bwd);
  }
  return reports;
}

std::string to_csv(const std::vector<TailReport>& reports) {
  std::ostringstream os;
  os.precision(10);
  os << "path,quantity,tau_s,threshold,target_p,violations,runs,empirical,wilson_low,wilson_high,"
        "bound,pass\n";
  for (const auto& r : reports) {
    for (const auto& p : r.points) {
      os << r.path << ',' << to_string(r.quantity) << ',' << r.tau << ',' << p.threshold << ','
         << p.target_p << ',' << p.violations << ',' << r.runs << ',' << p.empirical << ','
         << p.ci.low << ',' << p.ci.high << ',' << p.bound << ',' << (p.pass ? "true" : "false")
         << '\n';
    }
  }
  return os.str();
}

nlohmann::json to_json(const std::vector<TailReport>& reports) {
  auto out = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : r.points) {
      pts.push_back({{"threshold", p.threshold},
                     {"target_p", p.target_p},
                     {"violations", p.violations},
                     {"empirical", p.empirical},
                     {"wilson_low", p.ci.low},
                     {"wilson_high", p.ci.high},
                     {"bound", p.bound},
                     {"pass", p.pass}});
    }
    out.push_back({{"path", r.path},
                   {"quantity", to_string(r.quantity)},
                   {"tau_s", r.tau},
                   {"runs", r.runs},
                   {"pass", r.pass},
                   {"points", pts}});
  }
  return out;
}

}  // namespace infocalc
