// Copyright 2026 The dpswarm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "dpswarm/data.hpp"
#include "dpswarm/objective.hpp"
#include "dpswarm/privacy.hpp"
#include "dpswarm/protocol.hpp"
#include "dpswarm/swarm.hpp"

namespace dpswarm {
namespace {

Dataset bench_data(std::size_t n, std::size_t d) {
  RngStream rng = fork_stream(1, "data");
  PositionVector w(d);
  for (double& c : w) c = rng.uniform(-1, 1) / static_cast<double>(d);
  return synth_linear(n, d, w, 0.05, rng);
}

std::vector<PositionVector> bench_population(std::size_t m, std::size_t d,
                                             std::uint64_t seed) {
  RngStream rng = fork_stream(seed, "dynamics");
  return init_swarm(m, d, BehaviorKind::kGWO, Bounds(1.0), rng).positions;
}

void BM_MseObjective(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Dataset data = bench_data(n, 8);
  const PositionVector w = bench_population(1, 8, 2)[0];
  for (auto _ : state) benchmark::DoNotOptimize(mse_objective(data, w));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_MseObjective)->Arg(100)->Arg(1000)->Arg(10000);

void BM_DpUpdatePbest(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const Dataset data = bench_data(1000, 8);
  const auto population = bench_population(m, 8, 3);
  const auto pbest = bench_population(m, 8, 4);
  RngStream rng = fork_stream(5, "mechanism");
  for (auto _ : state) {
    BudgetLedger ledger(1.0, 1, static_cast<int>(m));
    benchmark::DoNotOptimize(
        dp_update_pbest(data, population, pbest, 1.0, rng, ledger, 0));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(m));
}
BENCHMARK(BM_DpUpdatePbest)->Arg(10)->Arg(100);

void BM_BehaviorStep(benchmark::State& state) {
  const auto kind = static_cast<BehaviorKind>(state.range(0));
  RngStream rng = fork_stream(6, "dynamics");
  SwarmState s = init_swarm(100, 8, kind, Bounds(1.0), rng);
  s.pbest_fitness.assign(100, 0.0);
  for (std::size_t i = 0; i < 100; ++i) s.pbest_fitness[i] = static_cast<double>(i);
  s.gbest = s.pbest[0];
  s.iteration = 10;
  const BehaviorSpec spec = BehaviorSpec::defaults(kind);
  for (auto _ : state) {
    benchmark::DoNotOptimize(behavior_step(s, spec, rng, Bounds(1.0), 100));
  }
  state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_BehaviorStep)->DenseRange(0, 5);

void BM_WireRoundTrip(benchmark::State& state) {
  EvaluationReply reply;
  reply.pbest = bench_population(100, 8, 7);
  reply.fitness.assign(100, 0.25);
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_message(serialize_message(reply)));
  }
}
BENCHMARK(BM_WireRoundTrip);

void BM_FullRun(benchmark::State& state) {
  const Dataset data = bench_data(1000, 4);
  RunConfig cfg;
  cfg.iterations = 100;
  cfg.population_size = 100;
  cfg.is_private = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(run(cfg, data));
  state.SetLabel(cfg.is_private ? "private PSO" : "non-private PSO");
}
BENCHMARK(BM_FullRun)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace dpswarm

BENCHMARK_MAIN();
