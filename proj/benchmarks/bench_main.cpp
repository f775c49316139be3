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

#include <benchmark/benchmark.h>

#include "infocalc/infocalc.hpp"

namespace infocalc {
namespace {

Curve staircase(int pieces, double rate_step) {
  std::vector<Curve::Segment> segs;
  double value = 0.0;
  for (int i = 0; i < pieces; ++i) {
    const double slope = rate_step * (pieces - i);
    segs.push_back({static_cast<double>(i), slope, value});
    value += slope;
  }
  return Curve(std::move(segs));
}

void BM_Convolve(benchmark::State& state) {
  const auto a = staircase(static_cast<int>(state.range(0)), 3.0);
  const auto b = staircase(static_cast<int>(state.range(0)), 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(convolve(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Convolve)->RangeMultiplier(2)->Range(2, 64)->Complexity();

void BM_RatecalExact(benchmark::State& state) {
  const auto topo = build_exact_topology(load_scenario(INFOCALC_DATA_DIR "/case_study.json"));
  for (auto _ : state) benchmark::DoNotOptimize(ratecal(topo));
}
BENCHMARK(BM_RatecalExact);

void BM_Bflr(benchmark::State& state) {
  const auto s = load_scenario(INFOCALC_DATA_DIR "/case_study.json");
  for (auto _ : state) benchmark::DoNotOptimize(bflr(s, 0.035, 1e-3));
}
BENCHMARK(BM_Bflr);

void BM_Simulate(benchmark::State& state) {
  const auto s = load_scenario(INFOCALC_DATA_DIR "/case_study.json");
  const auto schedule = *bflr(s, 0.035, 1e-3).chosen;
  TraceConfig cfg;
  cfg.runs = static_cast<std::size_t>(state.range(0));
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(s, schedule, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace infocalc

BENCHMARK_MAIN();
