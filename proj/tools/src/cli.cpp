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

#include "infocalc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "infocalc/mc_oracle.hpp"

namespace infocalc::cli {
namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------------------
// Formatting helpers.

std::string fixed(double v, int digits) {
  if (std::isnan(v)) return "n/a";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::string general(double v) {
  if (std::isnan(v)) return "n/a";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double number_or_nan(const json& j) { return j.is_null() ? kNaN : j.get<double>(); }

class Table {
 public:
  explicit Table(std::vector<std::string> header) : rows_{std::move(header)} {}
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  void print(std::ostream& os) const {
    std::vector<std::size_t> width;
    for (const auto& r : rows_) {
      width.resize(std::max(width.size(), r.size()), 0);
      for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    }
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      std::string line;
      for (std::size_t i = 0; i < rows_[k].size(); ++i) {
        line += rows_[k][i];
        if (i + 1 < rows_[k].size()) line += std::string(width[i] - rows_[k][i].size() + 2, ' ');
      }
      line.erase(line.find_last_not_of(' ') + 1);
      os << line << '\n';
      if (k == 0) {
        std::size_t total = 0;
        for (std::size_t i = 0; i < width.size(); ++i) total += width[i] + (i + 1 < width.size() ? 2 : 0);
        os << std::string(total, '-') << '\n';
      }
    }
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

std::string coefficient(const Rational& k) {
  if (k == Rational(1)) return "";
  if (k.den() == 1) return k.str();
  return "(" + k.str() + ")";
}

std::string symbolic_bounding(const ExactBoundingFunction& f) {
  if (const auto* z = f.zero_params()) {
    return z->shift == Rational(0) ? "0" : "1{x < " + z->shift.str() + "}";
  }
  if (const auto* e = f.exponential_params()) {
    const std::string a = e->a == Rational(1) ? "" : coefficient(e->a);
    const std::string arg = e->x0 == Rational(0) ? "x" : "(x - " + e->x0.str() + ")";
    const std::string b = e->b == Rational(1) ? "" : "/" + (e->b.den() == 1 ? e->b.str() : "(" + e->b.str() + ")");
    return a + "e^{-" + arg + b + "}";
  }
  return describe(f);
}

std::string subset_label(const std::vector<std::string>& subset) { return join(subset, "+"); }

// ---------------------------------------------------------------------------
// Shared option state.

struct Common {
  std::string scenario;
  std::string format = "table";
  bool published = false;
  bool clamp = false;
  bool prune = false;
  std::string out_file;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("scenario", c.scenario, "Scenario JSON document")->required();
  app->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  app->add_flag("--paper-table1", c.published,
                "Use the published services for the impaired third and fourth paths");
  app->add_flag("--clamp", c.clamp, "Clamp printed bound values to 1");
  app->add_flag("--prune,!--no-prune", c.prune, "Prune dominated subsets");
  app->add_option("--out", c.out_file, "Write the artifact to this file instead of stdout");
}

void emit(const Common& c, const std::string& text, std::ostream& out) {
  if (c.out_file.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out_file);
  if (!f) throw Error(ErrorKind::kConfigError, "cannot write " + c.out_file);
  f << text;
}

struct Reference {
  Rational rate;
  Rational latency;
};

// Common node rate and latency, if every node shares them.
std::optional<Reference> reference_of(const Scenario& s) {
  std::optional<Reference> ref;
  for (const auto& p : s.paths) {
    for (const auto& n : p.nodes) {
      try {
        const Reference r{Rational::from_double(n.rate), Rational::from_double(n.latency)};
        if (!ref) {
          ref = r;
        } else if (!(ref->rate == r.rate) || !(ref->latency == r.latency)) {
          return std::nullopt;
        }
      } catch (const Error&) {
        return std::nullopt;
      }
    }
  }
  return ref;
}

std::string service_text(const IssSpec<Rational>& s, const std::optional<Reference>& ref) {
  std::string curve;
  if (ref) curve = symbolic_curve(s.curve, ref->rate, ref->latency);
  if (curve.empty()) curve = describe(s.curve);
  return "<" + symbolic_bounding(s.bounding) + ", " + curve + ">";
}

double demand_of(const Scenario& s) {
  if (s.sources.empty()) return 0.0;
  return joint_information_rate(s.source_models(), s.spatial, s.unit);
}

// ---------------------------------------------------------------------------
// ratecal

int cmd_ratecal(const Common& c, std::ostream& out) {
  const auto s = load_scenario(c.scenario);
  const auto topo = build_exact_topology(s);
  std::optional<ServiceOverrides<Rational>> overrides;
  if (c.published) overrides = reference_overrides_exact(s);
  const auto* ov = overrides ? &*overrides : nullptr;
  const auto rates = ratecal(topo, c.prune, ov);
  const auto ref = reference_of(s);
  const double demand = demand_of(s);
  const std::string unit = to_string(s.unit);
  const auto ids = s.path_ids();

  std::ostringstream os;
  if (c.format == "json") {
    json doc;
    doc["command"] = "ratecal";
    doc["unit"] = unit;
    doc["time_unit"] = "seconds";
    doc["demand_rate"] = demand;
    doc["reference"] = ref ? json{{"rate", ref->rate.str()}, {"latency_s", ref->latency.str()}} : json(nullptr);
    doc["paths"] = json::array();
    for (const auto& id : ids) {
      doc["paths"].push_back({{"path", id},
                              {"standalone", service_to_json(effective_path_service(topo, {id}, id))},
                              {"impaired", service_to_json(effective_path_service(topo, ids, id, ov))}});
    }
    doc["achievable"] = json::array();
    for (const auto& r : rates) {
      const double rate = to_double(r.service.asymptotic_rate());
      doc["achievable"].push_back({{"subset", r.subset},
                                   {"service", service_to_json(r.service)},
                                   {"rate", rate},
                                   {"above_demand", rate >= demand}});
    }
    os << doc.dump(2) << '\n';
  } else if (c.format == "csv") {
    os << "subset,bounding,service,rate_" << unit << "_per_s,offset_" << unit << ",above_demand\n";
    for (const auto& r : rates) {
      const double rate = to_double(r.service.asymptotic_rate());
      os << subset_label(r.subset) << ',' << symbolic_bounding(r.service.bounding) << ','
         << '"' << service_text(r.service, ref) << '"' << ',' << general(rate) << ','
         << general(to_double(r.service.curve.value_at_zero())) << ',' << (rate >= demand ? "true" : "false")
         << '\n';
    }
  } else {
    os << "Units: " << unit << ", seconds";
    if (ref) os << "; r = " << general(to_double(ref->rate)) << " " << unit << "/s, d = " << general(to_double(ref->latency)) << " s";
    os << "\n\nPath services\n";
    Table t({"path", "w/o impairment", "w/ impairment"});
    for (const auto& id : ids) {
      t.add({id, service_text(effective_path_service(topo, {id}, id), ref),
             service_text(effective_path_service(topo, ids, id, ov), ref)});
    }
    t.print(os);
    os << "\nAchievable rates (" << rates.size() << " subsets";
    if (c.prune) os << ", dominated subsets pruned";
    os << "; demand " << fixed(demand, 1) << " " << unit << "/s, * marks subsets above it)\n";
    Table a({"subset", "service", "rate (" + unit + "/s)", "curve (" + unit + ")", ""});
    for (const auto& r : rates) {
      const double rate = to_double(r.service.asymptotic_rate());
      a.add({subset_label(r.subset), service_text(r.service, ref), general(rate), describe(to_double(r.service.curve)),
             rate >= demand && demand > 0 ? "*" : ""});
    }
    a.print(os);
  }
  emit(c, os.str(), out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// bflr

std::string assignment_text(const SubsetOutcome& o) {
  std::vector<std::string> parts;
  for (const auto& a : o.assignment) {
    std::string p = a.path + ": " + (a.sources.empty() ? "-" : join(a.sources, ","));
    if (!a.sources.empty()) p += " (q = " + fixed(a.delay_quantile, 4) + " s)";
    if (a.rejected_source) {
      p += " rejects " + *a.rejected_source +
           (std::isfinite(a.rejected_quantile) ? " (q = " + fixed(a.rejected_quantile, 4) + " s)" : " (rate)");
    }
    parts.push_back(p);
  }
  if (!o.unassigned.empty()) parts.push_back("unassigned: " + join(o.unassigned, ","));
  return join(parts, "; ");
}

struct BflrArgs {
  double delay_ms = 0.0;
  double violation = 0.0;
  bool all_subsets = false;
};

int cmd_bflr(const Common& c, const BflrArgs& b, std::ostream& out) {
  const auto s = load_scenario(c.scenario);
  std::optional<ServiceOverrides<double>> overrides;
  if (c.published) overrides = reference_overrides(s);
  BflrOptions opt;
  opt.prune = c.prune;
  opt.overrides = overrides ? &*overrides : nullptr;
  const double delay = b.delay_ms / 1000.0;
  const auto result = bflr(s, delay, b.violation, opt);
  const auto outcomes = b.all_subsets ? bflr_all_subsets(s, delay, b.violation, opt) : result.evaluated;
  const std::string unit = to_string(s.unit);

  std::ostringstream os;
  if (c.format == "json") {
    json doc;
    doc["command"] = "bflr";
    doc["unit"] = unit;
    doc["delay_s"] = delay;
    doc["violation"] = b.violation;
    doc["demand_rate"] = demand_of(s);
    doc["feasible"] = result.feasible;
    doc["chosen"] = result.chosen ? outcome_to_json(*result.chosen) : json(nullptr);
    doc["evaluated"] = json::array();
    for (const auto& o : outcomes) doc["evaluated"].push_back(outcome_to_json(o));
    os << doc.dump(2) << '\n';
  } else if (c.format == "csv") {
    os << "subset,rate_" << unit << "_per_s,feasible,reason,margin_s,path,sources,delay_quantile_s\n";
    for (const auto& o : outcomes) {
      for (const auto& a : o.assignment) {
        os << subset_label(o.subset) << ',' << general(o.rate) << ',' << (o.feasible ? "true" : "false") << ','
           << to_string(o.reason) << ',' << general(o.margin) << ',' << a.path << ',' << join(a.sources, ";")
           << ',' << general(a.delay_quantile) << '\n';
      }
      if (o.assignment.empty()) {
        os << subset_label(o.subset) << ',' << general(o.rate) << ',' << (o.feasible ? "true" : "false") << ','
           << to_string(o.reason) << ',' << general(o.margin) << ",,,\n";
      }
    }
  } else {
    os << "Delay bound " << general(delay) << " s, violation probability " << general(b.violation)
       << ", demand " << fixed(demand_of(s), 1) << " " << unit << "/s\n\n";
    Table t({"subset", "rate (" + unit + "/s)", "verdict", "margin (s)", "assignment"});
    for (const auto& o : outcomes) {
      t.add({subset_label(o.subset), fixed(o.rate, 1), o.feasible ? "feasible" : "X (" + to_string(o.reason) + ")",
             fixed(o.margin, 4), assignment_text(o)});
    }
    t.print(os);
    os << '\n'
       << (result.feasible ? "Chosen subset: " + subset_label(result.chosen->subset) : std::string("Infeasible"))
       << '\n';
  }
  emit(c, os.str(), out);
  return result.feasible ? kExitOk : kExitInfeasible;
}

// ---------------------------------------------------------------------------
// ratio

struct RatioArgs {
  std::vector<std::string> subsets;
  std::vector<double> delays_ms;
  std::vector<double> violations;
  double horizon_ms = 0.0;
  double calibrate_target = 0.0;
  std::string calibrate_subset;
  double calibrate_delay_ms = 0.0;
  double calibrate_violation = 0.0;
};

int cmd_ratio(const Common& c, const RatioArgs& r, std::ostream& out) {
  const auto s = load_scenario(c.scenario);
  std::optional<ServiceOverrides<double>> overrides;
  if (c.published) overrides = reference_overrides(s);
  RatioOptions opt;
  opt.overrides = overrides ? &*overrides : nullptr;
  std::vector<std::vector<std::string>> subsets;
  for (const auto& text : r.subsets) subsets.push_back(split(text, ','));

  json calibration = nullptr;
  double horizon = r.horizon_ms / 1000.0;
  if (r.calibrate_target > 0) {
    const auto sub = r.calibrate_subset.empty() ? subsets.front() : split(r.calibrate_subset, ',');
    const double tau = (r.calibrate_delay_ms > 0 ? r.calibrate_delay_ms : r.delays_ms.front()) / 1000.0;
    const double p = r.calibrate_violation > 0 ? r.calibrate_violation : r.violations.front();
    horizon = calibrate_horizon(s, sub, tau, p, r.calibrate_target, opt);
    calibration = {{"subset", sub}, {"tau_s", tau}, {"violation", p}, {"target", r.calibrate_target}};
  }
  if (!(horizon > 0)) throw Error(ErrorKind::kConfigError, "ratio needs --horizon-ms or --calibrate-target");

  std::vector<RatioResult> cells;
  for (const auto& sub : subsets) {
    for (double p : r.violations) {
      for (double tau_ms : r.delays_ms) cells.push_back(delivery_ratio(s, sub, tau_ms / 1000.0, p, horizon, opt));
    }
  }
  const std::string unit = to_string(s.unit);
  std::ostringstream os;
  if (c.format == "json") {
    json doc;
    doc["command"] = "ratio";
    doc["unit"] = unit;
    doc["horizon_s"] = horizon;
    doc["calibration"] = calibration;
    doc["cells"] = json::array();
    for (const auto& cell : cells) {
      json paths = json::array();
      for (const auto& p : cell.paths) {
        paths.push_back({{"path", p.path},
                         {"sources", p.sources},
                         {"gap", finite_or_null(p.gap)},
                         {"delay_violation", p.delay_violation},
                         {"quantile", finite_or_null(p.quantile)}});
      }
      doc["cells"].push_back({{"subset", cell.subset},
                              {"tau_s", cell.tau},
                              {"violation", cell.p},
                              {"ratio", cell.ratio},
                              {"vacuous", cell.vacuous},
                              {"total_information", cell.total_information},
                              {"undelivered_quantile", finite_or_null(cell.undelivered_quantile)},
                              {"unassigned", cell.unassigned},
                              {"paths", paths}});
    }
    os << doc.dump(2) << '\n';
  } else if (c.format == "csv") {
    os << "subset,tau_s,violation,horizon_s,ratio,vacuous,total_" << unit << ",undelivered_" << unit << '\n';
    for (const auto& cell : cells) {
      os << subset_label(cell.subset) << ',' << general(cell.tau) << ',' << general(cell.p) << ','
         << general(horizon) << ',' << general(cell.ratio) << ',' << (cell.vacuous ? "true" : "false") << ','
         << general(cell.total_information) << ',' << general(cell.undelivered_quantile) << '\n';
    }
  } else {
    os << "Information delivery ratio lower bounds, horizon " << fixed(horizon * 1000.0, 3) << " ms";
    if (!calibration.is_null()) {
      os << " (calibrated: " << subset_label(calibration["subset"].get<std::vector<std::string>>()) << " at tau = "
         << general(calibration["tau_s"].get<double>() * 1000.0) << " ms, p = " << general(calibration["violation"].get<double>())
         << " gives " << fixed(100.0 * r.calibrate_target, 1) << " %)";
    }
    os << "\n\n";
    std::vector<std::string> header{"subset"};
    for (double p : r.violations) {
      for (double tau_ms : r.delays_ms) header.push_back("p = " + general(p) + ", tau = " + general(tau_ms) + " ms");
    }
    Table t(header);
    std::size_t k = 0;
    for (const auto& sub : subsets) {
      std::vector<std::string> row{subset_label(sub)};
      for (std::size_t i = 0; i < r.violations.size() * r.delays_ms.size(); ++i, ++k) {
        row.push_back(fixed(100.0 * cells[k].ratio, 1) + " %" + (cells[k].vacuous ? " (vacuous)" : ""));
      }
      t.add(row);
    }
    t.print(os);
  }
  emit(c, os.str(), out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

struct SimArgs {
  std::string subset;
  std::vector<std::string> assign;
  double delay_ms = 35.0;
  double violation = 1e-3;
  std::size_t runs = 10000;
  std::uint64_t seed = 1;
  double horizon_ms = 500.0;
  double step_ms = 1.0;
  double tau_ms = 0.0;
  unsigned threads = 0;
};

int cmd_simulate(const Common& c, const SimArgs& a, std::ostream& out, std::ostream& err) {
  const auto s = load_scenario(c.scenario);
  SubsetOutcome schedule;
  if (!a.assign.empty()) {
    schedule.feasible = true;
    for (const auto& spec : a.assign) {
      const auto eq = spec.find('=');
      if (eq == std::string::npos) throw Error(ErrorKind::kConfigError, "--assign expects PATH=SRC,SRC");
      PathAssignment pa;
      pa.path = spec.substr(0, eq);
      pa.sources = split(spec.substr(eq + 1), ',');
      for (const auto& id : pa.sources) (void)s.source(id);
      schedule.assignment.push_back(pa);
      schedule.subset.push_back(pa.path);
    }
    if (!a.subset.empty()) schedule.subset = split(a.subset, ',');
  } else {
    BflrOptions opt;
    opt.prune = c.prune;
    if (a.subset.empty()) {
      const auto r = bflr(s, a.delay_ms / 1000.0, a.violation, opt);
      if (!r.feasible) {
        err << "no feasible schedule to simulate\n";
        return kExitInfeasible;
      }
      schedule = *r.chosen;
    } else {
      schedule = evaluate_subset(s, split(a.subset, ','), a.delay_ms / 1000.0, a.violation, opt);
      if (!schedule.feasible) {
        err << "subset " << a.subset << " is infeasible (" << to_string(schedule.reason) << ")\n";
        return kExitInfeasible;
      }
    }
  }
  TraceConfig cfg;
  cfg.runs = a.runs;
  cfg.seed = a.seed;
  cfg.horizon = a.horizon_ms / 1000.0;
  cfg.time_step = a.step_ms / 1000.0;
  cfg.tau = a.tau_ms / 1000.0;
  cfg.threads = a.threads;
  auto reports = simulate(s, schedule, cfg);
  if (c.clamp) {
    for (auto& r : reports) {
      for (auto& p : r.points) p.bound = std::min(1.0, p.bound);
    }
  }
  bool pass = true;
  for (const auto& r : reports) pass = pass && r.pass;

  std::ostringstream os;
  if (c.format == "json") {
    json doc;
    doc["command"] = "simulate";
    doc["unit"] = to_string(s.unit);
    doc["runs"] = cfg.runs;
    doc["seed"] = cfg.seed;
    doc["time_step_s"] = cfg.time_step;
    doc["horizon_s"] = cfg.horizon;
    doc["schedule"] = outcome_to_json(schedule);
    doc["pass"] = pass;
    doc["reports"] = to_json(reports);
    os << doc.dump(2) << '\n';
  } else if (c.format == "csv") {
    os << to_csv(reports);
  } else {
    os << cfg.runs << " runs, seed " << cfg.seed << ", step " << general(cfg.time_step) << " s, horizon "
       << general(cfg.horizon) << " s\n\n";
    Table t({"path", "quantity", "tau (s)", "points passed", "max violations", "verdict"});
    for (const auto& r : reports) {
      std::size_t ok = 0, worst = 0;
      for (const auto& p : r.points) {
        ok += p.pass ? 1 : 0;
        worst = std::max(worst, p.violations);
      }
      t.add({r.path, to_string(r.quantity), fixed(r.tau, 4), std::to_string(ok) + "/" + std::to_string(r.points.size()),
             std::to_string(worst), r.pass ? "PASS" : "FAIL"});
    }
    t.print(os);
  }
  emit(c, os.str(), out);
  if (!pass) {
    err << "empirical violation frequency exceeded an analytic bound\n";
    return kExitError;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// curve

struct CurveArgs {
  std::string name;
  bool bounding = false;
  double t_max_ms = 100.0;
  double x_max = 50.0;
  std::size_t points = 101;
};

Isa named_process(const Scenario& s, const std::string& name, const ServiceOverrides<double>* ov) {
  const auto colon = name.find(':');
  if (colon == std::string::npos) throw Error(ErrorKind::kInvalidArgument, "curve names look like kind:id, got " + name);
  const std::string kind = name.substr(0, colon);
  const std::string id = name.substr(colon + 1);
  if (kind == "source") return gaussian_arrival_curve(s.source(id), s.unit);
  if (kind == "group") {
    std::vector<SourceModel> members;
    for (const auto& m : s.source_models()) {
      if (m.group == id) members.push_back(m);
    }
    if (members.empty()) throw Error(ErrorKind::kInvalidArgument, "unknown group " + id);
    return group_information(members, s.spatial, s.unit);
  }
  const auto topo = build_topology(s);
  if (kind == "path") {
    const auto at = id.find('@');
    const std::string path = id.substr(0, at);
    const auto active = at == std::string::npos ? std::vector<std::string>{path} : split(id.substr(at + 1), ',');
    const auto svc = effective_path_service(topo, active, path, ov);
    return {svc.bounding, svc.curve};
  }
  if (kind == "subset") {
    const auto subset = split(id, ',');
    std::vector<Iss> services;
    for (const auto& p : subset) services.push_back(effective_path_service(topo, subset, p, ov));
    const auto svc = parallel(services);
    return {svc.bounding, svc.curve};
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown curve kind " + kind + " (source, group, path, subset)");
}

int cmd_curve(const Common& c, const CurveArgs& a, std::ostream& out) {
  const auto s = load_scenario(c.scenario);
  std::optional<ServiceOverrides<double>> overrides;
  if (c.published) overrides = reference_overrides(s);
  const auto proc = named_process(s, a.name, overrides ? &*overrides : nullptr);
  if (a.points < 2) throw Error(ErrorKind::kConfigError, "--points must be at least 2");
  const std::string unit = to_string(s.unit);
  const double hi = a.bounding ? a.x_max : a.t_max_ms / 1000.0;
  const std::string x_name = a.bounding ? "x_" + unit : "t_s";
  const std::string y_name = a.bounding ? "probability_bound" : "value_" + unit;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < a.points; ++i) {
    const double x = hi * static_cast<double>(i) / static_cast<double>(a.points - 1);
    double y = a.bounding ? proc.bounding(x) : proc.curve(x);
    if (a.bounding && c.clamp) y = std::min(1.0, y);
    pts.emplace_back(x, y);
  }
  std::ostringstream os;
  if (c.format == "json") {
    json doc;
    doc["command"] = "curve";
    doc["name"] = a.name;
    doc["kind"] = a.bounding ? "bounding" : "curve";
    doc["x"] = x_name;
    doc["y"] = y_name;
    doc["description"] = a.bounding ? describe(proc.bounding) : describe(proc.curve);
    doc["points"] = json::array();
    for (const auto& [x, y] : pts) doc["points"].push_back({x, y});
    os << doc.dump(2) << '\n';
  } else if (c.format == "csv") {
    os << x_name << ',' << y_name << '\n';
    for (const auto& [x, y] : pts) os << general(x) << ',' << general(y) << '\n';
  } else {
    os << a.name << ": " << (a.bounding ? describe(proc.bounding) : describe(proc.curve)) << "\n\n";
    Table t({x_name, y_name});
    for (const auto& [x, y] : pts) t.add({general(x), general(y)});
    t.print(os);
  }
  emit(c, os.str(), out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// JSON helpers for exact values.

std::string rational_text(const Rational& r) { return r.str(); }

Rational rational_from(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number()) return Rational::from_double(j.get<double>());
  const auto text = j.get<std::string>();
  const auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(std::stoll(text));
  return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
}

}  // namespace

ServiceOverrides<Rational> reference_overrides_exact(const Scenario& scenario) {
  const auto node = [&](const std::string& id) -> const NodeConfig& {
    for (const auto& p : scenario.paths) {
      if (p.id == id && !p.nodes.empty()) return p.nodes.front();
    }
    throw Error(ErrorKind::kValidationError, "--paper-table1 needs paths L3 and L4");
  };
  const auto make = [&](const std::string& id, int a, Rational k, Rational m) {
    const auto& n = node(id);
    const Rational r = Rational::from_double(n.rate);
    const Rational d = Rational::from_double(n.latency);
    return IssSpec<Rational>{ExactBoundingFunction::exponential(Rational(a), Rational(a)),
                             ExactCurve::affine(k * r, -m * r * d)};
  };
  return {{"L3", make("L3", 5, Rational(2, 3), Rational(8, 3))},
          {"L4", make("L4", 6, Rational(2, 3), Rational(11, 3))}};
}

ServiceOverrides<double> reference_overrides(const Scenario& scenario) {
  ServiceOverrides<double> out;
  for (const auto& [id, svc] : reference_overrides_exact(scenario)) out[id] = to_double(svc);
  return out;
}

json service_to_json(const IssSpec<Rational>& service) {
  json b;
  if (const auto* z = service.bounding.zero_params()) {
    b = {{"kind", "zero"}, {"shift", rational_text(z->shift)}};
  } else if (const auto* e = service.bounding.exponential_params()) {
    b = {{"kind", "exponential"}, {"a", rational_text(e->a)}, {"b", rational_text(e->b)}, {"x0", rational_text(e->x0)}};
  } else {
    const auto* n = service.bounding.numeric_samples();
    b = {{"kind", "numeric"}, {"origin", n->origin}, {"step", n->step}, {"values", n->values}};
  }
  json segs = json::array();
  for (const auto& s : service.curve.segments()) {
    segs.push_back({{"start", rational_text(s.start)}, {"slope", rational_text(s.slope)}, {"value", rational_text(s.value)}});
  }
  return {{"bounding", b}, {"curve", {{"segments", segs}}}};
}

IssSpec<Rational> service_from_json(const json& j) {
  const auto& b = j.at("bounding");
  const auto kind = b.at("kind").get<std::string>();
  ExactBoundingFunction f;
  if (kind == "zero") {
    f = ExactBoundingFunction::zero(rational_from(b.at("shift")));
  } else if (kind == "exponential") {
    f = ExactBoundingFunction::exponential(rational_from(b.at("a")), rational_from(b.at("b")), rational_from(b.at("x0")));
  } else if (kind == "numeric") {
    f = ExactBoundingFunction::numeric(b.at("origin").get<double>(), b.at("step").get<double>(),
                                       b.at("values").get<std::vector<double>>());
  } else {
    throw Error(ErrorKind::kSchemaError, "unknown bounding kind " + kind);
  }
  std::vector<ExactCurve::Segment> segs;
  for (const auto& s : j.at("curve").at("segments")) {
    segs.push_back({rational_from(s.at("start")), rational_from(s.at("slope")), rational_from(s.at("value"))});
  }
  return {f, ExactCurve(std::move(segs))};
}

json outcome_to_json(const SubsetOutcome& o) {
  json assignment = json::array();
  for (const auto& a : o.assignment) {
    assignment.push_back({{"path", a.path},
                          {"path_rate", a.path_rate},
                          {"sources", a.sources},
                          {"info_rate", a.info_rate},
                          {"delay_quantile_s", finite_or_null(a.delay_quantile)},
                          {"rejected_source", a.rejected_source ? json(*a.rejected_source) : json(nullptr)},
                          {"rejected_quantile_s", finite_or_null(a.rejected_quantile)}});
  }
  return {{"subset", o.subset},
          {"rate", o.rate},
          {"feasible", o.feasible},
          {"reason", to_string(o.reason)},
          {"margin_s", finite_or_null(o.margin)},
          {"assignment", assignment},
          {"unassigned", o.unassigned}};
}

SubsetOutcome outcome_from_json(const json& j) {
  SubsetOutcome o;
  o.subset = j.at("subset").get<std::vector<std::string>>();
  o.rate = j.at("rate").get<double>();
  o.feasible = j.at("feasible").get<bool>();
  const auto reason = j.at("reason").get<std::string>();
  bool known = false;
  for (const auto r : {Infeasibility::kNone, Infeasibility::kRate, Infeasibility::kDelay, Infeasibility::kBelowDemand}) {
    if (to_string(r) == reason) {
      o.reason = r;
      known = true;
    }
  }
  if (!known) throw Error(ErrorKind::kSchemaError, "unknown infeasibility reason " + reason);
  o.margin = number_or_nan(j.at("margin_s"));
  for (const auto& a : j.at("assignment")) {
    PathAssignment pa;
    pa.path = a.at("path").get<std::string>();
    pa.path_rate = a.at("path_rate").get<double>();
    pa.sources = a.at("sources").get<std::vector<std::string>>();
    pa.info_rate = a.at("info_rate").get<double>();
    pa.delay_quantile = number_or_nan(a.at("delay_quantile_s"));
    if (!a.at("rejected_source").is_null()) pa.rejected_source = a.at("rejected_source").get<std::string>();
    pa.rejected_quantile = number_or_nan(a.at("rejected_quantile_s"));
    o.assignment.push_back(std::move(pa));
  }
  o.unassigned = j.at("unassigned").get<std::vector<std::string>>();
  return o;
}

std::string symbolic_curve(const ExactCurve& curve, const Rational& r, const Rational& d) {
  if (curve.segments().size() != 1 || r == Rational(0)) return "";
  const Rational k = curve.asymptotic_rate() / r;
  std::string out = k == Rational(0) ? "0" : coefficient(k) + "rt";
  if (d == Rational(0)) {
    const Rational v = curve.value_at_zero();
    if (v == Rational(0)) return out;
    return out + (v < Rational(0) ? " - " + (-v).str() : " + " + v.str());
  }
  const Rational m = -curve.value_at_zero() / (r * d);
  if (m == Rational(0)) return out;
  return out + (m > Rational(0) ? " - " + coefficient(m) : " + " + coefficient(-m)) + "rd";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Information-driven stochastic network calculus", "infocalc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "infocalc 0.1.0");

  Common common;
  BflrArgs bflr_args;
  RatioArgs ratio_args;
  SimArgs sim_args;
  CurveArgs curve_args;

  auto* ratecal_cmd = app.add_subcommand("ratecal", "Achievable information service of every path subset");
  add_common(ratecal_cmd, common);

  auto* bflr_cmd = app.add_subcommand("bflr", "Best-fit source placement under a delay bound");
  add_common(bflr_cmd, common);
  bflr_cmd->add_option("--delay-ms", bflr_args.delay_ms, "Delay bound in milliseconds")->required()->check(CLI::PositiveNumber);
  bflr_cmd->add_option("--violation", bflr_args.violation, "Violation probability in (0, 1]")
      ->required()
      ->check(CLI::Range(0.0, 1.0) & CLI::PositiveNumber);
  bflr_cmd->add_flag("--all-subsets", bflr_args.all_subsets, "Report every subset instead of stopping at the first feasible one");

  auto* ratio_cmd = app.add_subcommand("ratio", "Lower bound on the information delivery ratio");
  add_common(ratio_cmd, common);
  ratio_cmd->add_option("--subset", ratio_args.subsets, "Comma-separated path subset (repeatable)")->required();
  ratio_cmd->add_option("--delay-ms", ratio_args.delays_ms, "Delivery delay bound in milliseconds (repeatable)")
      ->required()
      ->check(CLI::PositiveNumber);
  ratio_cmd->add_option("--violation", ratio_args.violations, "Violation probability (repeatable)")
      ->required()
      ->check(CLI::Range(0.0, 1.0) & CLI::PositiveNumber);
  ratio_cmd->add_option("--horizon-ms", ratio_args.horizon_ms, "Evaluation horizon in milliseconds")->check(CLI::PositiveNumber);
  ratio_cmd->add_option("--calibrate-target", ratio_args.calibrate_target,
                        "Fit the horizon so that one cell reaches this ratio")
      ->check(CLI::Range(0.0, 1.0));
  ratio_cmd->add_option("--calibrate-subset", ratio_args.calibrate_subset, "Subset of the calibration cell (default: first)");
  ratio_cmd->add_option("--calibrate-delay-ms", ratio_args.calibrate_delay_ms, "Delay of the calibration cell (default: first)");
  ratio_cmd->add_option("--calibrate-violation", ratio_args.calibrate_violation, "Probability of the calibration cell (default: first)");

  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo check of the analytic tail bounds");
  add_common(sim_cmd, common);
  sim_cmd->add_option("--subset", sim_args.subset, "Comma-separated path subset to schedule");
  sim_cmd->add_option("--assign", sim_args.assign, "Explicit placement PATH=SRC,SRC (repeatable)");
  sim_cmd->add_option("--delay-ms", sim_args.delay_ms, "Delay bound used to build the schedule")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--violation", sim_args.violation, "Violation probability used to build the schedule")
      ->check(CLI::Range(0.0, 1.0) & CLI::PositiveNumber);
  sim_cmd->add_option("--runs", sim_args.runs, "Number of runs")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", sim_args.seed, "Master seed");
  sim_cmd->add_option("--horizon-ms", sim_args.horizon_ms, "Simulated horizon in milliseconds")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--time-step-ms", sim_args.step_ms, "Time step in milliseconds")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--tau-ms", sim_args.tau_ms, "Delay for the backlog-within-delay quantity (default: median delay)");
  sim_cmd->add_option("--threads", sim_args.threads, "Worker threads (0: hardware concurrency)");

  auto* curve_cmd = app.add_subcommand("curve", "Evaluate a named curve or bounding function");
  add_common(curve_cmd, common);
  curve_cmd->add_option("--name", curve_args.name, "source:ID, group:ID, path:ID[@P1,P2], subset:P1,P2")->required();
  curve_cmd->add_flag("--bounding", curve_args.bounding, "Evaluate the bounding function instead of the curve");
  curve_cmd->add_option("--t-max-ms", curve_args.t_max_ms, "Upper end of the time axis in milliseconds")->check(CLI::PositiveNumber);
  curve_cmd->add_option("--x-max", curve_args.x_max, "Upper end of the slack axis in information units")->check(CLI::PositiveNumber);
  curve_cmd->add_option("--points", curve_args.points, "Number of samples");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*ratecal_cmd) return cmd_ratecal(common, out);
    if (*bflr_cmd) return cmd_bflr(common, bflr_args, out);
    if (*ratio_cmd) return cmd_ratio(common, ratio_args, out);
    if (*sim_cmd) return cmd_simulate(common, sim_args, out, err);
    if (*curve_cmd) return cmd_curve(common, curve_args, out);
  } catch (const Error& e) {
    err << "error: " << common.scenario << ": " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace infocalc::cli
