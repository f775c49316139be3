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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "infocalc/calculus.hpp"
#include "infocalc/info_model.hpp"

namespace infocalc {

struct NodeConfig {
  std::string id;
  double bound_a = 0.0;  // 0 means a deterministic node
  double bound_b = 1.0;
  double rate = 0.0;     // information units per second
  double latency = 0.0;  // seconds
};

struct PathConfig {
  std::string id;
  std::vector<NodeConfig> nodes;
};

struct NodeRef {
  std::string path;
  std::size_t node = 0;
};

/// Cross traffic shared by two nodes. The rate is either absolute or a
/// fraction of each endpoint node's own rate.
struct ImpairmentConfig {
  NodeRef a;
  NodeRef b;
  double bound_a = 0.0;
  double bound_b = 1.0;
  std::optional<double> rate;
  std::optional<double> rate_fraction;
  double latency = 0.0;
};

struct SourceConfig {
  SourceModel model;
  /// Set when the variance was derived from a target rate.
  std::optional<double> target_rate;
};

struct Scenario {
  InfoUnit unit = InfoUnit::kBits;
  std::vector<SourceConfig> sources;
  SpatialModel spatial;
  std::vector<PathConfig> paths;
  std::vector<ImpairmentConfig> impairments;

  std::vector<SourceModel> source_models() const;
  std::vector<std::string> path_ids() const;
  const SourceModel& source(const std::string& id) const;
};

/// Parses and validates a scenario document. Throws Error(kSchemaError) for
/// malformed JSON, missing or unknown fields and wrong types, and
/// Error(kValidationError) for out-of-range values; messages carry the
/// field path (and line/column for syntax errors).
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& file);
nlohmann::json to_json(const Scenario& scenario);
std::string serialize_scenario(const Scenario& scenario);

template <class T>
struct NodeService {
  std::string id;
  IssSpec<T> service;
};

template <class T>
struct PathTopology {
  std::string id;
  std::vector<NodeService<T>> nodes;
};

template <class T>
struct ImpairmentLink {
  NodeRef a;
  NodeRef b;
  IsaSpec<T> process_a;
  IsaSpec<T> process_b;
};

template <class T>
struct Topology {
  std::vector<PathTopology<T>> paths;
  std::vector<ImpairmentLink<T>> impairments;

  const PathTopology<T>& path(const std::string& id) const {
    for (const auto& p : paths) {
      if (p.id == id) return p;
    }
    throw Error(ErrorKind::kInvalidArgument, "unknown path " + id);
  }
};

/// Replacement effective services for impaired paths, keyed by path id.
template <class T>
using ServiceOverrides = std::map<std::string, IssSpec<T>>;

Topology<double> build_topology(const Scenario& scenario);
/// Same topology with every parameter recovered as an exact rational.
Topology<Rational> build_exact_topology(const Scenario& scenario);

/// Service of `path` when the paths in `active` are in use: every node
/// shared with an active path loses the impairment process, then nodes are
/// concatenated. An override replaces the result whenever the path is
/// impaired.
template <class T>
IssSpec<T> effective_path_service(const Topology<T>& topo, const std::vector<std::string>& active,
                                  const std::string& path_id,
                                  const ServiceOverrides<T>* overrides = nullptr) {
  const auto is_active = [&](const std::string& id) {
    for (const auto& a : active) {
      if (a == id) return true;
    }
    return false;
  };
  const auto& path = topo.path(path_id);
  std::vector<IssSpec<T>> nodes;
  nodes.reserve(path.nodes.size());
  for (const auto& n : path.nodes) nodes.push_back(n.service);
  bool impaired = false;
  for (const auto& link : topo.impairments) {
    if (!is_active(link.a.path) || !is_active(link.b.path)) continue;
    if (link.a.path == path_id) {
      nodes[link.a.node] = impair(nodes[link.a.node], link.process_a);
      impaired = true;
    }
    if (link.b.path == path_id) {
      nodes[link.b.node] = impair(nodes[link.b.node], link.process_b);
      impaired = true;
    }
  }
  if (impaired && overrides) {
    const auto it = overrides->find(path_id);
    if (it != overrides->end()) return it->second;
  }
  return concatenate(nodes);
}

}  // namespace infocalc
