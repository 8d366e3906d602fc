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

#include "iesuc/hedging.h"

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "iesuc/solver.h"

namespace iesuc {
namespace {

const std::filesystem::path kData(IESUC_DATA_DIR);

solver::SolverOptions ExactOptions() {
  solver::SolverOptions o;
  o.mip_gap = 1e-6;
  return o;
}

// Network, scenarios and per-scenario models of a fixture; the problem keeps
// pointers into the first two.
struct Fixture {
  IesNetwork net;
  ScenarioSet scenarios;
  Problem problem;

  explicit Fixture(const std::string& name)
      : net(LoadNetwork(kData / (name + ".json"))),
        scenarios(LoadScenarios(kData / (name + ".scenarios.json"))) {
    problem = MakeProblem(net, scenarios, ModelOptions{}, ExactOptions());
  }
  Fixture(const Fixture&) = delete;
};

double RelativeGap(double a, double b) { return std::abs(a - b) / std::abs(b); }

TEST(PenaltyTest, LinearizedCoefficients) {
  const PenaltyTerms p = PenalizedObjective({0.0}, {0.25}, {2.0});
  EXPECT_DOUBLE_EQ(p.linear[0], 0.5);
  EXPECT_DOUBLE_EQ(p.constant, 0.0625);
}

TEST(PenaltyTest, MatchesQuadraticOnBinaries) {
  const std::vector<double> rho = {0.3, -0.2, 0.0};
  const std::vector<double> cbar = {0.25, 0.9, 0.5};
  const std::vector<double> kappa = {2.0, 0.7, 1.5};
  const PenaltyTerms p = PenalizedObjective(rho, cbar, kappa);
  for (size_t j = 0; j < rho.size(); ++j) {
    for (double c : {0.0, 1.0}) {
      const double quadratic = rho[j] * c + 0.5 * kappa[j] * (c - cbar[j]) * (c - cbar[j]);
      const double linear = p.linear[j] * c + 0.5 * kappa[j] * cbar[j] * cbar[j];
      EXPECT_NEAR(linear, quadratic, 1e-15);
    }
  }
}

TEST(PenaltyTest, PushesTowardsBinaryAverage) {
  const PenaltyTerms p = PenalizedObjective({0.0, 0.0}, {0.0, 1.0}, {1.0, 1.0});
  EXPECT_GT(p.linear[0], 0.0);
  EXPECT_LT(p.linear[1], 0.0);
}

TEST(InconsistencyTest, CountsEntriesAwayFromBinary) {
  EXPECT_EQ(CountInconsistent({1.0, 0.37, 0.0}, 1e-4), 1);
  EXPECT_EQ(CountInconsistent({0.99995, 5e-5}, 1e-4), 0);
  EXPECT_EQ(CountInconsistent({0.5, 0.5, 0.9998}, 1e-4), 3);
}

TEST(TerminationTest, Cases) {
  PhOptions o;
  PhState s;
  s.ind = 0;
  EXPECT_EQ(CheckTermination(s, o), PhControl::kConverged);
  o.epsilon = 2;
  s.ind = 2;
  EXPECT_EQ(CheckTermination(s, o), PhControl::kConverged);
  s.ind = 3;
  s.iteration = 5;
  EXPECT_EQ(CheckTermination(s, o), PhControl::kContinue);
  s.iteration = o.max_iterations;
  EXPECT_EQ(CheckTermination(s, o), PhControl::kIterationLimit);
}

TEST(OptionsTest, Validation) {
  PhOptions o;
  EXPECT_NO_THROW(o.Validate());
  o.epsilon = 3;
  EXPECT_THROW(o.Validate(), DataError);
  o = PhOptions{};
  o.kappa_coeff = 0.0;
  EXPECT_THROW(o.Validate(), DataError);
  o = PhOptions{};
  o.binary_tolerance = 0.5;
  EXPECT_THROW(o.Validate(), DataError);
  o = PhOptions{};
  o.workers = 0;
  EXPECT_THROW(o.Validate(), DataError);
}

TEST(OptionsTest, MethodNames) {
  for (Method m : {Method::kExtensive, Method::kDeterministic, Method::kTph, Method::kMph}) {
    EXPECT_EQ(MethodFromName(MethodName(m)), m);
  }
  EXPECT_THROW(MethodFromName("cplex"), DataError);
}

TEST(ParallelForTest, VisitsEveryIndexOnce) {
  for (int workers : {1, 2, 4}) {
    std::vector<int> hits(37, 0);
    ParallelFor(37, workers, [&](int k) { ++hits[k]; });
    for (int h : hits) EXPECT_EQ(h, 1);
  }
}

TEST(ParallelForTest, RethrowsLowestFailingIndex) {
  for (int workers : {1, 3}) {
    try {
      ParallelFor(10, workers, [](int k) {
        if (k == 4 || k == 7) throw std::runtime_error("index " + std::to_string(k));
      });
      FAIL() << "expected an exception";
    } catch (const std::runtime_error& e) {
      EXPECT_STREQ(e.what(), "index 4");
    }
  }
}

TEST(HedgingTest, SingleScenarioConvergesAtStart) {
  const IesNetwork net = LoadNetwork(kData / "minimal.json");
  const ScenarioSet set = ForecastScenario(net);
  const Problem problem = MakeProblem(net, set, ModelOptions{}, ExactOptions());
  const PhOptions options;
  const PhState state = PhInitialize(problem, options);
  EXPECT_EQ(state.ind, 0);
  EXPECT_EQ(state.cbar, state.c[0]);
  for (double r : state.rho[0]) EXPECT_EQ(r, 0.0);
  EXPECT_EQ(CheckTermination(state, options), PhControl::kConverged);

  const HedgingResult ph = SolveProgressiveHedging(problem, options);
  EXPECT_EQ(ph.iterations, 0);
  EXPECT_EQ(ph.enumeration_cases, 1);
  const HedgingResult ext = SolveExtensive(problem, 1);
  const HedgingResult det = SolveDeterministic(problem, 1);
  EXPECT_EQ(ph.commitment, ext.commitment);
  EXPECT_EQ(det.commitment, ext.commitment);
  EXPECT_NEAR(ph.Objective(), ext.Objective(), 1e-9);
}

TEST(HedgingTest, AgreeingScenariosAreAFixpoint) {
  const IesNetwork net = LoadNetwork(kData / "minimal.json");
  ScenarioSet set;
  set.scenarios = {{0.5, {}}, {0.5, {}}};
  const Problem problem = MakeProblem(net, set, ModelOptions{}, ExactOptions());
  PhOptions options;
  PhState state = PhInitialize(problem, options);
  for (const auto& r : state.rho) {
    for (double v : r) EXPECT_EQ(v, 0.0);
  }
  const PhState before = state;
  PhIteration(problem, options, state);
  EXPECT_EQ(state.c, before.c);
  EXPECT_EQ(state.rho, before.rho);
  EXPECT_EQ(state.ind, before.ind);
  EXPECT_EQ(state.iteration, 1);
}

TEST(HedgingTest, DuplicatedScenarioMatchesSingle) {
  const IesNetwork net = LoadNetwork(kData / "minimal.json");
  const ScenarioSet one = ForecastScenario(net);
  ScenarioSet two;
  two.scenarios = {{0.5, {}}, {0.5, {}}};
  const Problem p1 = MakeProblem(net, one, ModelOptions{}, ExactOptions());
  const Problem p2 = MakeProblem(net, two, ModelOptions{}, ExactOptions());
  const HedgingResult a = SolveExtensive(p1, 1);
  const HedgingResult b = SolveExtensive(p2, 1);
  EXPECT_EQ(a.commitment, b.commitment);
  EXPECT_NEAR(a.Objective(), b.Objective(), 1e-9);
}

TEST(HedgingTest, InitialMultipliersFollowDisagreement) {
  Fixture f("twin_units");
  PhOptions options;
  // kappa = 2 on every entry: the two units share C_PD and P_min.
  const Generator& g = f.net.generators[0];
  options.kappa_coeff = 2.0 / (g.cost * g.p_min);
  const PhState state = PhInitialize(f.problem, options);
  ASSERT_EQ(state.c.size(), 2u);
  int disagreements = 0;
  for (size_t j = 0; j < state.cbar.size(); ++j) {
    EXPECT_NEAR(state.kappa[j], 2.0, 1e-12);
    if (state.c[0][j] == state.c[1][j]) {
      EXPECT_NEAR(state.rho[0][j], 0.0, 1e-12);
      continue;
    }
    ++disagreements;
    EXPECT_DOUBLE_EQ(state.cbar[j], 0.5);
    EXPECT_NEAR(state.rho[0][j], state.c[0][j] == 1.0 ? 1.0 : -1.0, 1e-12);
    EXPECT_NEAR(state.rho[1][j], -state.rho[0][j], 1e-12);
  }
  EXPECT_GT(disagreements, 0);
}

TEST(HedgingTest, ZeroInconsistencyEnumeratesOneCase) {
  Fixture f("wind_tail");
  const HedgingResult ext = SolveExtensive(f.problem, 1);
  PhState state;
  state.cbar = ext.commitment;
  PhOptions options;
  options.epsilon = 2;
  const HedgingResult r = MphEnumerate(f.problem, state, options);
  EXPECT_EQ(r.enumeration_cases, 1);
  EXPECT_EQ(r.commitment, ext.commitment);
  EXPECT_EQ(r.Objective(), ext.Objective());
}

TEST(HedgingTest, TwoOpenEntriesEnumerateFourCases) {
  Fixture f("wind_tail");
  const HedgingResult ext = SolveExtensive(f.problem, 1);
  PhState state;
  state.cbar = ext.commitment;
  // Open two entries of the extensive schedule: one on, one off if possible.
  std::vector<int> open;
  for (size_t j = 0; j < state.cbar.size() && open.size() < 2; ++j) {
    if (open.empty() || state.cbar[j] != state.cbar[open[0]]) open.push_back(static_cast<int>(j));
  }
  ASSERT_EQ(open.size(), 2u);
  for (int j : open) state.cbar[j] = 0.5;
  PhOptions options;
  options.epsilon = 2;
  const HedgingResult r = MphEnumerate(f.problem, state, options);
  EXPECT_EQ(r.enumeration_cases, 4);
  EXPECT_EQ(r.final_ind, 2);
  EXPECT_LE(r.Objective(), ext.Objective() + 1e-12);
}

TEST(HedgingTest, FixedExtensiveScheduleReproducesItsObjective) {
  Fixture f("wind_tail");
  const ModelInstance joint =
      BuildExtensiveModel(f.net, f.scenarios, f.problem.dirs, ModelOptions{});
  const solver::SolveResult r = solver::Solve(joint.program, ExactOptions());
  ASSERT_EQ(r.status, solver::SolveStatus::kOptimal);
  std::vector<double> c(joint.catalog.num_commit());
  for (size_t j = 0; j < c.size(); ++j) c[j] = std::round(r.values[j]);
  const FixedUcEvaluation eval = EvaluateFixedUc(f.problem, c, 1);
  EXPECT_LE(RelativeGap(eval.expected.Objective(), r.objective), 1e-6);
}

TEST(HedgingTest, AllOnServesEverything) {
  const IesNetwork net = LoadNetwork(kData / "minimal.json");
  const ScenarioSet set = ForecastScenario(net);
  const Problem problem = MakeProblem(net, set, ModelOptions{}, ExactOptions());
  const FixedUcEvaluation on =
      EvaluateFixedUc(problem, std::vector<double>(problem.num_commit(), 1.0), 1);
  const ModelInstance& m = problem.scenario_models[0];
  for (int t = 0; t < net.horizon; ++t) {
    for (size_t l = 0; l < net.buses.size(); ++l) {
      EXPECT_NEAR(on.dispatch[0].values[m.catalog.Col(Family::kNp, l, t, 0)], 0.0, 1e-9);
    }
    for (size_t n = 0; n < net.gas_nodes.size(); ++n) {
      EXPECT_NEAR(on.dispatch[0].values[m.catalog.Col(Family::kNg, n, t, 0)], 0.0, 1e-9);
    }
  }
  EXPECT_NEAR(on.expected.unserved, 0.0, 1e-9);
}

TEST(HedgingTest, AllOffShedsTheWholeLoadWithoutWind) {
  const IesNetwork net = LoadNetwork(kData / "minimal.json");
  const ScenarioSet set = ForecastScenario(net);
  const Problem problem = MakeProblem(net, set, ModelOptions{}, ExactOptions());
  const FixedUcEvaluation off =
      EvaluateFixedUc(problem, std::vector<double>(problem.num_commit(), 0.0), 1);
  const ModelInstance& m = problem.scenario_models[0];
  // Both buses share C_NP, so only the hourly total of np is determined.
  double expected = 0.0;
  for (int t = 0; t < net.horizon; ++t) {
    double shed = 0.0, demand = 0.0;
    for (size_t l = 0; l < net.buses.size(); ++l) {
      shed += off.dispatch[0].values[m.catalog.Col(Family::kNp, l, t, 0)];
      demand += net.buses[l].demand[t];
      expected += net.buses[l].unserved_cost * net.buses[l].demand[t];
    }
    EXPECT_NEAR(shed, demand, 1e-9);
  }
  EXPECT_NEAR(off.expected.unserved, expected, 1e-9);
}

TEST(HedgingTest, ProgressiveHedgingMatchesExtensive) {
  Fixture f("wind_tail");
  const HedgingResult ext = SolveExtensive(f.problem, 1);
  PhOptions options;
  const HedgingResult tph = SolveProgressiveHedging(f.problem, options);
  EXPECT_EQ(tph.status, solver::SolveStatus::kOptimal) << tph.message;
  EXPECT_EQ(tph.final_ind, 0);
  EXPECT_LE(tph.iterations, 20);
  EXPECT_LE(RelativeGap(tph.ExpectedCost(), ext.ExpectedCost()), 1e-4);
  options.epsilon = 2;
  const HedgingResult mph = SolveProgressiveHedging(f.problem, options);
  EXPECT_EQ(mph.method, Method::kMph);
  EXPECT_LE(mph.enumeration_cases, 4);
  EXPECT_LE(mph.iterations, tph.iterations);
  EXPECT_LE(RelativeGap(mph.ExpectedCost(), ext.ExpectedCost()), 1e-4);
  for (const PhTraceRow& row : tph.trace) EXPECT_LE(std::abs(row.conservation_error), 1e-12);
}

TEST(HedgingTest, PostAverageUpdateKeepsMultipliersBalanced) {
  Fixture f("wind_tail");
  PhOptions options;
  options.post_average_update = true;
  PhState state = PhInitialize(f.problem, options);
  for (int k = 0; k < 3 && CheckTermination(state, options) == PhControl::kContinue; ++k) {
    PhIteration(f.problem, options, state);
  }
  for (size_t j = 0; j < state.cbar.size(); ++j) {
    double sum = 0.0;
    for (size_t sc = 0; sc < state.rho.size(); ++sc)
      sum += state.probabilities[sc] * state.rho[sc][j];
    EXPECT_NEAR(sum, 0.0, 1e-12);
  }
}

TEST(HedgingTest, DeterministicScheduleIsNoBetter) {
  Fixture f("wind_tail");
  const HedgingResult ext = SolveExtensive(f.problem, 1);
  const HedgingResult det = SolveDeterministic(f.problem, 1);
  EXPECT_EQ(det.status, solver::SolveStatus::kOptimal);
  EXPECT_GE(det.ExpectedCost(), ext.ExpectedCost() * (1 - 1e-9));
}

TEST(HedgingTest, IdenticalAcrossWorkerCounts) {
  Fixture f("wind_tail");
  PhOptions options;
  options.workers = 1;
  const HedgingResult base = SolveProgressiveHedging(f.problem, options);
  for (int workers : {2, 4}) {
    options.workers = workers;
    const HedgingResult r = SolveProgressiveHedging(f.problem, options);
    EXPECT_EQ(r.commitment, base.commitment);
    EXPECT_EQ(r.Objective(), base.Objective());
    EXPECT_EQ(r.iterations, base.iterations);
    ASSERT_EQ(r.trace.size(), base.trace.size());
    for (size_t k = 0; k < r.trace.size(); ++k) {
      EXPECT_EQ(r.trace[k].ind, base.trace[k].ind);
      EXPECT_EQ(r.trace[k].cbar, base.trace[k].cbar);
      EXPECT_EQ(r.trace[k].scenario_objective, base.trace[k].scenario_objective);
      EXPECT_EQ(r.trace[k].conservation_error, base.trace[k].conservation_error);
    }
    for (size_t sc = 0; sc < r.evaluation.dispatch.size(); ++sc) {
      EXPECT_EQ(r.evaluation.dispatch[sc].values, base.evaluation.dispatch[sc].values);
    }
  }
}

}  // namespace
}  // namespace iesuc
