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

// Random scenario documents for property tests.

#pragma once

#include <random>
#include <string>

#include <nlohmann/json.hpp>

namespace infocalc::oracle {

template <class Rng>
nlohmann::json random_scenario_json(Rng& rng, int max_paths = 4) {
  using nlohmann::json;
  std::uniform_int_distribution<int> n_paths(1, max_paths), n_nodes(1, 3), n_groups(1, 3), n_members(1, 3);
  std::uniform_int_distribution<int> bound_a(0, 3), rate(2, 10), latency(1, 10), src_rate(5, 30);
  std::uniform_int_distribution<int> n_imp(0, 2), fraction(1, 3);
  json doc;
  doc["units"] = {{"time", "seconds"}, {"information", "bits"}};
  doc["sources"] = json::array();
  doc["spatial"] = json::object();
  const int groups = n_groups(rng);
  for (int g = 1; g <= groups; ++g) {
    const std::string gid = "g" + std::to_string(g);
    const int members = n_members(rng);
    const double r = 100.0 * src_rate(rng);
    for (int k = 1; k <= members; ++k) {
      doc["sources"].push_back({{"id", gid + "." + std::to_string(k)},
                                {"group", gid},
                                {"target_rate_bps", r},
                                {"eta", 100},
                                {"delta_s", 0.1}});
    }
    doc["spatial"][gid] = {{"pair", 1.8}, {"triple", 2.4}};
  }
  const int paths = n_paths(rng);
  doc["paths"] = json::array();
  std::vector<int> sizes;
  for (int p = 1; p <= paths; ++p) {
    const std::string pid = "P" + std::to_string(p);
    json nodes = json::array();
    const int count = n_nodes(rng);
    sizes.push_back(count);
    for (int k = 1; k <= count; ++k) {
      const int a = bound_a(rng);
      nodes.push_back({{"id", pid + "n" + std::to_string(k)},
                       {"bounding", {{"a", a}, {"b", a == 0 ? 1 : a}}},
                       {"beta", {{"rate_bps", 1000.0 * rate(rng)}, {"latency_s", 0.001 * latency(rng)}}}});
    }
    doc["paths"].push_back({{"id", pid}, {"nodes", nodes}});
  }
  doc["impairments"] = json::array();
  if (paths >= 2) {
    const int count = n_imp(rng);
    std::uniform_int_distribution<int> pick(0, paths - 1);
    for (int i = 0; i < count; ++i) {
      const int a = pick(rng);
      int b = pick(rng);
      if (a == b) b = (a + 1) % paths;
      std::uniform_int_distribution<int> na(0, sizes[a] - 1), nb(0, sizes[b] - 1);
      doc["impairments"].push_back(
          {{"a", json::array({"P" + std::to_string(a + 1), na(rng)})},
           {"b", json::array({"P" + std::to_string(b + 1), nb(rng)})},
           {"process",
            {{"bounding", {{"a", 2}, {"b", 2}}},
             {"alpha", {{"rate_fraction_of_node", 0.1 * fraction(rng)}, {"latency_s", 0.005}}}}}});
    }
  }
  return doc;
}

}  // namespace infocalc::oracle
