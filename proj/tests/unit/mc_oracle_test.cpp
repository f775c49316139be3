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

#include <cmath>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "infocalc/mc_oracle.hpp"

namespace infocalc {
namespace {

using nlohmann::json;

json deterministic_doc() {
  json doc;
  doc["sources"] = json::array({{{"id", "s1"}, {"group", "g"}, {"target_rate_bps", 2000}, {"eta", 100}, {"delta_s", 0.1}},
                                {{"id", "s2"}, {"group", "g"}, {"target_rate_bps", 2000}, {"eta", 100}, {"delta_s", 0.1}}});
  doc["spatial"] = {{"g", {{"pair", 1.8}}}};
  doc["paths"] = json::array({{{"id", "P"},
                               {"nodes", json::array({{{"id", "n1"}, {"bounding", {{"a", 0}, {"b", 1}}},
                                                       {"beta", {{"rate_bps", 5000}, {"latency_s", 0.01}}}},
                                                      {{"id", "n2"}, {"bounding", {{"a", 0}, {"b", 1}}},
                                                       {"beta", {{"rate_bps", 6000}, {"latency_s", 0.004}}}}})}}});
  return doc;
}

SubsetOutcome schedule_for(const Scenario& s, const std::vector<std::string>& subset) {
  auto o = evaluate_subset(s, subset, 10.0, 0.5);
  if (!o.feasible) throw std::runtime_error("schedule not feasible");
  return o;
}

// L1 carries group 1 and L2 carries group 2.
SubsetOutcome pair_schedule() {
  SubsetOutcome o;
  o.subset = {"L1", "L2"};
  o.feasible = true;
  PathAssignment l1, l2;
  l1.path = "L1";
  l1.sources = {"A1.1", "A1.2", "A1.3"};
  l2.path = "L2";
  l2.sources = {"A2.1", "A2.2", "A2.3"};
  o.assignment = {l1, l2};
  return o;
}

TraceConfig small_config(std::size_t runs) {
  TraceConfig c;
  c.runs = runs;
  c.seed = 42;
  c.horizon = 0.3;
  c.threads = 2;
  return c;
}

TEST(Wilson, Interval) {
  const auto z = wilson_interval(0, 10000);
  EXPECT_EQ(z.low, 0.0);
  EXPECT_NEAR(z.high, 3.8415 / (10000 + 3.8415), 1e-6);
  const auto h = wilson_interval(50, 100);
  EXPECT_NEAR(h.low + h.high, 1.0, 1e-12);
  EXPECT_LT(h.low, 0.5);
  EXPECT_GT(h.high, 0.5);
}

TEST(Seeds, SplitmixIsDeterministicAndDistinct) {
  EXPECT_EQ(run_seed(1, 0), run_seed(1, 0));
  EXPECT_NE(run_seed(1, 0), run_seed(1, 1));
  EXPECT_NE(run_seed(1, 0), run_seed(2, 0));
  std::uint64_t a = 0, b = 0;
  EXPECT_EQ(splitmix64(a), splitmix64(b));
}

TEST(SampleTail, InvertsTheBound) {
  const auto f = BoundingFunction::exponential(4, 4);
  EXPECT_NEAR(sample_tail(f, 0.9), 4 * std::log(4 / 0.9), 1e-9);
  EXPECT_EQ(sample_tail(BoundingFunction::exponential(0.5, 1), 0.9), 0.0);
  EXPECT_NEAR(sample_tail(f, 0.01), 4 * std::log(400.0), 1e-9);
  EXPECT_EQ(sample_tail(BoundingFunction::zero(), 0.5), 0.0);
}

TEST(Simulate, DeterministicScenarioNeverViolates) {
  const auto s = parse_scenario(deterministic_doc().dump());
  const auto reports = simulate(s, schedule_for(s, {"P"}), small_config(500));
  ASSERT_EQ(reports.size(), 3u);
  for (const auto& r : reports) {
    EXPECT_TRUE(r.pass) << to_string(r.quantity);
    for (const auto& p : r.points) EXPECT_EQ(p.violations, 0u) << to_string(r.quantity);
  }
}

TEST(Simulate, ReproducibleAcrossThreadCounts) {
  const auto s = load_scenario(INFOCALC_DATA_DIR "/case_study.json");
  const auto sched = pair_schedule();
  auto c = small_config(400);
  const auto a = to_json(simulate(s, sched, c)).dump();
  EXPECT_EQ(to_json(simulate(s, sched, c)).dump(), a);
  c.threads = 1;
  EXPECT_EQ(to_json(simulate(s, sched, c)).dump(), a);
  c.threads = 5;
  EXPECT_EQ(to_json(simulate(s, sched, c)).dump(), a);
  c.seed = 43;
  EXPECT_NE(to_json(simulate(s, sched, c)).dump(), a);
}

TEST(Simulate, ConservationInEveryRun) {
  const auto s = load_scenario(INFOCALC_DATA_DIR "/case_study.json");
  const auto sched = schedule_for(s, {"L1", "L2", "L3"});
  const auto c = small_config(1);
  for (std::uint64_t run = 0; run < 50; ++run) {
    for (const auto& tr : simulate_once(s, sched, c, run)) {
      ASSERT_EQ(tr.arrivals.size(), tr.departures.size());
      for (std::size_t k = 0; k < tr.arrivals.size(); ++k) {
        EXPECT_LE(tr.departures[k], tr.arrivals[k] + 1e-9);
        if (k > 0) {
          EXPECT_GE(tr.departures[k], tr.departures[k - 1]);
        }
      }
    }
  }
}

TEST(Simulate, ZeroSourceScenario) {
  const auto s = load_scenario(INFOCALC_DATA_DIR "/three_path_example.json");
  SubsetOutcome sched;
  sched.subset = s.path_ids();
  sched.feasible = true;
  for (const auto& id : sched.subset) {
    PathAssignment a;
    a.path = id;
    sched.assignment.push_back(a);
  }
  for (const auto& tr : simulate_once(s, sched, small_config(1), 0)) {
    for (std::size_t k = 0; k < tr.arrivals.size(); ++k) {
      EXPECT_EQ(tr.arrivals[k], 0.0);
      EXPECT_EQ(tr.arrivals[k] - tr.departures[k], 0.0);
    }
  }
}

TEST(Simulate, CaseStudyPairPasses) {
  const auto s = load_scenario(INFOCALC_DATA_DIR "/case_study.json");
  const auto reports = simulate(s, pair_schedule(), small_config(2000));
  EXPECT_EQ(reports.size(), 6u);
  for (const auto& r : reports) EXPECT_TRUE(r.pass) << r.path << " " << to_string(r.quantity);
}

TEST(Simulate, ConfigErrors) {
  const auto s = parse_scenario(deterministic_doc().dump());
  const auto sched = schedule_for(s, {"P"});
  auto c = small_config(10);
  c.horizon = 0.0;
  try {
    (void)simulate(s, sched, c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfigError);
  }
  c = small_config(0);
  EXPECT_THROW((void)simulate(s, sched, c), Error);
}

// Empirical check of the impairment sampler against its own bound. With a
// latency the envelope is compared from the origin after clipping at zero;
// the zero-latency process is also checked over every window.
double violation_rate(const Isa& process, double x, bool sup_window) {
  TraceConfig c;
  c.horizon = 0.05;
  c.seed = 7;
  const std::size_t runs = 10000;
  std::size_t hits = 0;
  for (std::size_t run = 0; run < runs; ++run) {
    const auto v = sample_impairment(process, c, run);
    double excess = -1e300;
    for (std::size_t t = 0; t < v.size(); ++t) {
      const double tt = static_cast<double>(t) * c.time_step;
      if (!sup_window) {
        excess = std::max(excess, v[t] - std::max(0.0, process.curve(tt)));
        continue;
      }
      for (std::size_t u = 0; u <= t; ++u) {
        excess = std::max(excess, v[t] - v[u] - process.curve(static_cast<double>(t - u) * c.time_step));
      }
    }
    if (excess > x) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(runs);
}

TEST(SampleImpairment, SatisfiesItsOwnBound) {
  const auto f = BoundingFunction::exponential(4, 4);
  const Isa zero_latency{f, Curve::affine(1600, 0)};
  const Isa delayed{f, Curve::affine(1600, -12)};
  for (double x : {6.0, 10.0, 15.0, 20.0}) {
    const double allowed = wilson_interval(static_cast<std::size_t>(f(x) * 10000), 10000).high;
    EXPECT_LE(violation_rate(zero_latency, x, true), std::max(f(x), allowed)) << x;
    EXPECT_LE(violation_rate(delayed, x, false), std::max(f(x), allowed)) << x;
  }
}

}  // namespace
}  // namespace infocalc
