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

#include "infocalc/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace infocalc {
namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::kSchemaError, where + ": " + what);
}

[[noreturn]] void validation_error(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::kValidationError, where + ": " + what);
}

void expect_object(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) schema_error(where, "expected an object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) schema_error(where + "." + key, "unknown field");
  }
}

const json& field(const json& j, const std::string& where, const std::string& key) {
  const auto it = j.find(key);
  if (it == j.end()) schema_error(where + "." + key, "missing field");
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) schema_error(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) validation_error(where, "must be finite");
  return v;
}

double number_field(const json& j, const std::string& where, const std::string& key) {
  return number(field(j, where, key), where + "." + key);
}

std::string string_field(const json& j, const std::string& where, const std::string& key) {
  const auto& v = field(j, where, key);
  if (!v.is_string()) schema_error(where + "." + key, "expected a string");
  const auto s = v.get<std::string>();
  if (s.empty()) validation_error(where + "." + key, "must not be empty");
  return s;
}

// Accepts strings or integers for identifiers such as groups.
std::string id_field(const json& j, const std::string& where, const std::string& key) {
  const auto& v = field(j, where, key);
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  return string_field(j, where, key);
}

double positive(double v, const std::string& where) {
  if (!(v > 0)) validation_error(where, "must be positive");
  return v;
}

double non_negative(double v, const std::string& where) {
  if (v < 0) validation_error(where, "must be non-negative");
  return v;
}

std::pair<double, double> parse_bound(const json& j, const std::string& where) {
  expect_object(j, where, {"a", "b"});
  const double a = non_negative(number_field(j, where, "a"), where + ".a");
  double b = 1.0;
  if (j.contains("b")) {
    b = positive(number_field(j, where, "b"), where + ".b");
  } else if (a > 0) {
    schema_error(where + ".b", "missing field");
  }
  return {a, b};
}

InfoUnit parse_units(const json& j, const std::string& where) {
  expect_object(j, where, {"time", "information"});
  if (j.contains("time")) {
    const auto t = string_field(j, where, "time");
    if (t != "seconds" && t != "s") validation_error(where + ".time", "only seconds are supported");
  }
  if (!j.contains("information")) return InfoUnit::kBits;
  const auto u = string_field(j, where, "information");
  if (u == "bits") return InfoUnit::kBits;
  if (u == "nats") return InfoUnit::kNats;
  validation_error(where + ".information", "expected \"bits\" or \"nats\"");
}

SourceConfig parse_source(const json& j, const std::string& where, InfoUnit unit) {
  expect_object(j, where, {"id", "group", "sigma2", "target_rate_bps", "eta", "delta_s"});
  SourceConfig out;
  out.model.id = string_field(j, where, "id");
  out.model.group = id_field(j, where, "group");
  out.model.eta = positive(number_field(j, where, "eta"), where + ".eta");
  out.model.delta = positive(number_field(j, where, "delta_s"), where + ".delta_s");
  const bool has_sigma = j.contains("sigma2");
  const bool has_rate = j.contains("target_rate_bps");
  if (has_sigma == has_rate) {
    schema_error(where, "exactly one of sigma2 and target_rate_bps is required");
  }
  if (has_sigma) {
    out.model.sigma2 = positive(number_field(j, where, "sigma2"), where + ".sigma2");
  } else {
    out.target_rate = positive(number_field(j, where, "target_rate_bps"), where + ".target_rate_bps");
    out.model.sigma2 = calibrate_sigma2(*out.target_rate, out.model.delta, out.model.eta, unit);
  }
  try {
    gaussian_arrival_curve(out.model, unit);
  } catch (const Error& e) {
    validation_error(where, e.what());
  }
  return out;
}

int spatial_size(const std::string& key, const std::string& where) {
  if (key == "pair") return 2;
  if (key == "triple") return 3;
  std::size_t pos = 0;
  int k = 0;
  try {
    k = std::stoi(key, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != key.size() || k < 2) schema_error(where + "." + key, "expected a group size >= 2");
  return k;
}

NodeConfig parse_node(const json& j, const std::string& where) {
  expect_object(j, where, {"id", "bounding", "beta"});
  NodeConfig n;
  n.id = string_field(j, where, "id");
  std::tie(n.bound_a, n.bound_b) = parse_bound(field(j, where, "bounding"), where + ".bounding");
  const auto& beta = field(j, where, "beta");
  const std::string bw = where + ".beta";
  expect_object(beta, bw, {"rate_bps", "latency_s"});
  n.rate = positive(number_field(beta, bw, "rate_bps"), bw + ".rate_bps");
  n.latency = non_negative(number_field(beta, bw, "latency_s"), bw + ".latency_s");
  return n;
}

NodeRef parse_ref(const json& j, const std::string& where, const std::vector<PathConfig>& paths) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_number_integer()) {
    schema_error(where, "expected [path-id, node-index]");
  }
  NodeRef r;
  r.path = j[0].get<std::string>();
  const auto idx = j[1].get<long long>();
  const PathConfig* path = nullptr;
  for (const auto& p : paths) {
    if (p.id == r.path) path = &p;
  }
  if (!path) validation_error(where + "[0]", "unknown path " + r.path);
  if (idx < 0 || static_cast<std::size_t>(idx) >= path->nodes.size()) {
    validation_error(where + "[1]", "node index out of range for path " + r.path);
  }
  r.node = static_cast<std::size_t>(idx);
  return r;
}

ImpairmentConfig parse_impairment(const json& j, const std::string& where,
                                  const std::vector<PathConfig>& paths) {
  expect_object(j, where, {"a", "b", "process"});
  ImpairmentConfig out;
  out.a = parse_ref(field(j, where, "a"), where + ".a", paths);
  out.b = parse_ref(field(j, where, "b"), where + ".b", paths);
  if (out.a.path == out.b.path) validation_error(where, "endpoints must be on different paths");
  const std::string pw = where + ".process";
  const auto& proc = field(j, where, "process");
  expect_object(proc, pw, {"bounding", "alpha"});
  std::tie(out.bound_a, out.bound_b) = parse_bound(field(proc, pw, "bounding"), pw + ".bounding");
  const std::string aw = pw + ".alpha";
  const auto& alpha = field(proc, pw, "alpha");
  expect_object(alpha, aw, {"rate_bps", "rate_fraction_of_node", "latency_s"});
  const bool has_rate = alpha.contains("rate_bps");
  const bool has_frac = alpha.contains("rate_fraction_of_node");
  if (has_rate == has_frac) {
    schema_error(aw, "exactly one of rate_bps and rate_fraction_of_node is required");
  }
  if (has_rate) out.rate = non_negative(number_field(alpha, aw, "rate_bps"), aw + ".rate_bps");
  if (has_frac) {
    const double f = number_field(alpha, aw, "rate_fraction_of_node");
    if (!(f >= 0 && f <= 1)) validation_error(aw + ".rate_fraction_of_node", "must lie in [0, 1]");
    out.rate_fraction = f;
  }
  out.latency = non_negative(number_field(alpha, aw, "latency_s"), aw + ".latency_s");
  return out;
}

std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

std::vector<SourceModel> Scenario::source_models() const {
  std::vector<SourceModel> out;
  out.reserve(sources.size());
  for (const auto& s : sources) out.push_back(s.model);
  return out;
}

std::vector<std::string> Scenario::path_ids() const {
  std::vector<std::string> out;
  for (const auto& p : paths) out.push_back(p.id);
  return out;
}

const SourceModel& Scenario::source(const std::string& id) const {
  for (const auto& s : sources) {
    if (s.model.id == id) return s.model;
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown source " + id);
}

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kSchemaError, "invalid JSON at " + line_column(text, e.byte) + ": " + e.what());
  }
  const std::string root = "$";
  expect_object(doc, root, {"units", "sources", "spatial", "paths", "impairments"});
  Scenario s;
  if (doc.contains("units")) s.unit = parse_units(doc["units"], root + ".units");

  std::set<std::string> seen;
  if (doc.contains("sources")) {
    const auto& arr = doc["sources"];
    if (!arr.is_array()) schema_error(root + ".sources", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string w = root + ".sources[" + std::to_string(i) + "]";
      auto src = parse_source(arr[i], w, s.unit);
      if (!seen.insert(src.model.id).second) validation_error(w + ".id", "duplicate source id");
      s.sources.push_back(std::move(src));
    }
  }

  if (doc.contains("spatial")) {
    const auto& sp = doc["spatial"];
    if (!sp.is_object()) schema_error(root + ".spatial", "expected an object");
    for (const auto& [group, table] : sp.items()) {
      const std::string w = root + ".spatial." + group;
      if (!table.is_object()) schema_error(w, "expected an object");
      for (const auto& [key, value] : table.items()) {
        s.spatial.set(group, spatial_size(key, w), number(value, w + "." + key));
      }
    }
    try {
      s.spatial.validate();
    } catch (const Error& e) {
      validation_error(root + ".spatial", e.what());
    }
  }
  std::map<std::string, int> group_sizes;
  for (const auto& src : s.sources) ++group_sizes[src.model.group];
  for (const auto& [group, n] : group_sizes) {
    for (int k = 2; k <= n; ++k) {
      try {
        s.spatial.coefficient(group, k);
      } catch (const Error&) {
        validation_error(root + ".spatial", "group " + group + " needs a coefficient for " +
                                                std::to_string(k) + " sources");
      }
    }
    std::vector<SourceModel> members;
    for (const auto& src : s.sources) {
      if (src.model.group == group) members.push_back(src.model);
    }
    try {
      group_information(members, s.spatial, s.unit);
    } catch (const Error& e) {
      validation_error(root + ".sources", e.what());
    }
  }

  const auto& paths = field(doc, root, "paths");
  if (!paths.is_array()) schema_error(root + ".paths", "expected an array");
  if (paths.empty()) validation_error(root + ".paths", "at least one path is required");
  seen.clear();
  std::set<std::string> node_ids;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const std::string w = root + ".paths[" + std::to_string(i) + "]";
    expect_object(paths[i], w, {"id", "nodes"});
    PathConfig p;
    p.id = string_field(paths[i], w, "id");
    if (!seen.insert(p.id).second) validation_error(w + ".id", "duplicate path id");
    const auto& nodes = field(paths[i], w, "nodes");
    if (!nodes.is_array()) schema_error(w + ".nodes", "expected an array");
    if (nodes.empty()) validation_error(w + ".nodes", "a path needs at least one node");
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const std::string nw = w + ".nodes[" + std::to_string(k) + "]";
      p.nodes.push_back(parse_node(nodes[k], nw));
      if (!node_ids.insert(p.nodes.back().id).second) {
        validation_error(nw + ".id", "duplicate node id " + p.nodes.back().id + " (paths must be node-disjoint)");
      }
    }
    s.paths.push_back(std::move(p));
  }

  if (doc.contains("impairments")) {
    const auto& arr = doc["impairments"];
    if (!arr.is_array()) schema_error(root + ".impairments", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      s.impairments.push_back(
          parse_impairment(arr[i], root + ".impairments[" + std::to_string(i) + "]", s.paths));
    }
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::kSchemaError, "cannot open " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

nlohmann::json to_json(const Scenario& s) {
  json doc;
  doc["units"] = {{"time", "seconds"}, {"information", to_string(s.unit)}};
  doc["sources"] = json::array();
  for (const auto& src : s.sources) {
    json j{{"id", src.model.id}, {"group", src.model.group}, {"eta", src.model.eta},
           {"delta_s", src.model.delta}};
    if (src.target_rate) {
      j["target_rate_bps"] = *src.target_rate;
    } else {
      j["sigma2"] = src.model.sigma2;
    }
    doc["sources"].push_back(j);
  }
  doc["spatial"] = json::object();
  for (const auto& [group, table] : s.spatial.table()) {
    for (const auto& [k, c] : table) {
      const std::string key = k == 2 ? "pair" : k == 3 ? "triple" : std::to_string(k);
      doc["spatial"][group][key] = c;
    }
  }
  const auto bound = [](double a, double b) {
    return a > 0 ? json{{"a", a}, {"b", b}} : json{{"a", 0.0}};
  };
  doc["paths"] = json::array();
  for (const auto& p : s.paths) {
    json nodes = json::array();
    for (const auto& n : p.nodes) {
      nodes.push_back({{"id", n.id},
                       {"bounding", bound(n.bound_a, n.bound_b)},
                       {"beta", {{"rate_bps", n.rate}, {"latency_s", n.latency}}}});
    }
    doc["paths"].push_back({{"id", p.id}, {"nodes", nodes}});
  }
  doc["impairments"] = json::array();
  for (const auto& imp : s.impairments) {
    json alpha{{"latency_s", imp.latency}};
    if (imp.rate) alpha["rate_bps"] = *imp.rate;
    if (imp.rate_fraction) alpha["rate_fraction_of_node"] = *imp.rate_fraction;
    doc["impairments"].push_back(
        {{"a", json::array({imp.a.path, imp.a.node})},
         {"b", json::array({imp.b.path, imp.b.node})},
         {"process", {{"bounding", bound(imp.bound_a, imp.bound_b)}, {"alpha", alpha}}}});
  }
  return doc;
}

std::string serialize_scenario(const Scenario& s) { return to_json(s).dump(2) + "\n"; }

namespace {

template <class T, class Conv>
Topology<T> build(const Scenario& s, Conv conv) {
  const auto bound = [&](double a, double b) {
    if (a == 0) return BasicBoundingFunction<T>::zero();
    return BasicBoundingFunction<T>::exponential(conv(a), conv(b));
  };
  Topology<T> topo;
  for (const auto& p : s.paths) {
    PathTopology<T> path{p.id, {}};
    for (const auto& n : p.nodes) {
      const T rate = conv(n.rate);
      const T latency = conv(n.latency);
      path.nodes.push_back(
          {n.id, IssSpec<T>{bound(n.bound_a, n.bound_b), BasicCurve<T>::affine(rate, -(rate * latency))}});
    }
    topo.paths.push_back(std::move(path));
  }
  const auto node_rate = [&](const NodeRef& r) -> T {
    for (const auto& p : s.paths) {
      if (p.id == r.path) return conv(p.nodes[r.node].rate);
    }
    return T(0);
  };
  for (const auto& imp : s.impairments) {
    const auto process = [&](const NodeRef& r) {
      const T rho = imp.rate ? conv(*imp.rate) : conv(*imp.rate_fraction) * node_rate(r);
      const T latency = conv(imp.latency);
      return IsaSpec<T>{bound(imp.bound_a, imp.bound_b), BasicCurve<T>::affine(rho, -(rho * latency))};
    };
    topo.impairments.push_back({imp.a, imp.b, process(imp.a), process(imp.b)});
  }
  return topo;
}

}  // namespace

Topology<double> build_topology(const Scenario& scenario) {
  return build<double>(scenario, [](double v) { return v; });
}

Topology<Rational> build_exact_topology(const Scenario& scenario) {
  return build<Rational>(scenario, [](double v) { return Rational::from_double(v); });
}

}  // namespace infocalc
