// Copyright 2026 The iesuc Authors
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

#include <filesystem>
#include <random>

#include "iesuc/hedging.h"
#include "iesuc/solver.h"
#include "support/mip_oracle.h"

namespace iesuc {
namespace {

const std::filesystem::path kData(IESUC_DATA_DIR);

struct WindTail {
  IesNetwork net = LoadNetwork(kData / "wind_tail.json");
  ScenarioSet scenarios = LoadScenarios(kData / "wind_tail.scenarios.json");
};

void BM_GenerateScenarios(benchmark::State& state) {
  const WindTail f;
  ScenarioGenOptions o;
  o.arma = {0.8, 0.1, 0.6, 1};
  o.paths = static_cast<int>(state.range(0));
  o.k = 4;
  for (auto _ : state) benchmark::DoNotOptimize(GenerateScenarios(f.net, o));
  state.SetItemsProcessed(state.iterations() * o.paths);
}
BENCHMARK(BM_GenerateScenarios)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_BuildExtensiveModel(benchmark::State& state) {
  const WindTail f;
  const FlowDirectionMap dirs = DetermineFlowDirections(f.net, f.scenarios, ModelOptions{});
  for (auto _ : state) {
    benchmark::DoNotOptimize(BuildExtensiveModel(f.net, f.scenarios, dirs, ModelOptions{}));
  }
}
BENCHMARK(BM_BuildExtensiveModel)->Unit(benchmark::kMillisecond);

void BM_FlowDirections(benchmark::State& state) {
  const WindTail f;
  for (auto _ : state) {
    benchmark::DoNotOptimize(DetermineFlowDirections(f.net, f.scenarios, ModelOptions{}));
  }
}
BENCHMARK(BM_FlowDirections)->Unit(benchmark::kMillisecond);

void BM_BranchAndBoundRandom(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::vector<solver::ConicProgram> programs;
  for (int k = 0; k < 20; ++k) {
    programs.push_back(
        testing::RandomMixedBinaryProgram(rng, static_cast<int>(state.range(0)), k % 2 == 0));
  }
  solver::SolverOptions o;
  for (auto _ : state) {
    for (const auto& p : programs) benchmark::DoNotOptimize(solver::BranchAndBound(p, o));
  }
  state.SetItemsProcessed(state.iterations() * programs.size());
}
BENCHMARK(BM_BranchAndBoundRandom)->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
  const WindTail f;
  solver::SolverOptions so;
  so.mip_gap = 1e-6;
  const Problem problem = MakeProblem(f.net, f.scenarios, ModelOptions{}, so);
  const Method method = static_cast<Method>(state.range(0));
  PhOptions ph;
  ph.epsilon = method == Method::kMph ? 2 : 0;
  for (auto _ : state) {
    switch (method) {
      case Method::kExtensive:
        benchmark::DoNotOptimize(SolveExtensive(problem, 1));
        break;
      case Method::kDeterministic:
        benchmark::DoNotOptimize(SolveDeterministic(problem, 1));
        break;
      default:
        benchmark::DoNotOptimize(SolveProgressiveHedging(problem, ph));
    }
  }
  state.SetLabel(MethodName(method));
}
BENCHMARK(BM_Solve)->DenseRange(0, 3)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace
}  // namespace iesuc

BENCHMARK_MAIN();
