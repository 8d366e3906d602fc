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

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "iesuc/solver.h"
#include "support/mip_oracle.h"

namespace iesuc::solver {
namespace {

ConeRow ThreeDimCone() {
  // ||(x0, x1)|| <= x2
  ConeRow cone;
  AffineExpr a, b, v;
  a.Add(0, 1.0);
  b.Add(1, 1.0);
  v.Add(2, 1.0);
  cone.members = {a, b};
  cone.bound = v;
  return cone;
}

TEST(SeparateConeTest, CutAtThreeFourFivePoint) {
  const ConeRow cone = ThreeDimCone();
  const std::vector<double> x = {3.0, 4.0, 4.0};
  const auto cuts = SeparateCone(cone, x, 1e-9);
  ASSERT_EQ(cuts.size(), 1u);
  const LinearRow& cut = cuts[0];
  std::map<int, double> coef;
  for (size_t k = 0; k < cut.cols.size(); ++k) coef[cut.cols[k]] += cut.coefs[k];
  EXPECT_NEAR(coef[0], 0.6, 1e-12);
  EXPECT_NEAR(coef[1], 0.8, 1e-12);
  EXPECT_NEAR(coef[2], -1.0, 1e-12);
  EXPECT_NEAR(cut.upper, 0.0, 1e-12);
  // The separated point violates the cut by one unit.
  EXPECT_NEAR(cut.Activity(x) - cut.upper, 1.0, 1e-12);

  // Every sampled point of the cone satisfies the cut.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-10.0, 10.0);
  std::uniform_real_distribution<double> slack(0.0, 5.0);
  for (int s = 0; s < 1000; ++s) {
    const double u0 = d(rng);
    const double u1 = d(rng);
    const std::vector<double> p = {u0, u1, std::hypot(u0, u1) + (s % 2 ? slack(rng) : 0.0)};
    EXPECT_LE(cut.Activity(p), cut.upper + 1e-9);
  }
}

TEST(SeparateConeTest, SatisfiedPointsGiveNoCut) {
  const ConeRow cone = ThreeDimCone();
  EXPECT_TRUE(SeparateCone(cone, std::vector<double>{3.0, 4.0, 5.0}, 1e-9).empty());
  EXPECT_TRUE(SeparateCone(cone, std::vector<double>{1.0, 1.0, 5.0}, 1e-9).empty());
  EXPECT_TRUE(SeparateCone(cone, std::vector<double>{0.0, 0.0, 0.0}, 1e-9).empty());
}

TEST(SeparateConeTest, ZeroMemberViolationGivesComponentwiseCuts) {
  const ConeRow cone = ThreeDimCone();
  const std::vector<double> x = {0.0, 0.0, -1.0};
  const auto cuts = SeparateCone(cone, x, 1e-9);
  ASSERT_FALSE(cuts.empty());
  bool some_cut_violated = false;
  for (const LinearRow& cut : cuts) {
    if (cut.Activity(x) > cut.upper + 1e-9) some_cut_violated = true;
    // Still valid on the cone.
    EXPECT_LE(cut.Activity(std::vector<double>{3.0, -4.0, 5.0}), cut.upper + 1e-9);
  }
  EXPECT_TRUE(some_cut_violated);
}

TEST(SeparateConeTest, AffineConstantsFoldIntoRowBound) {
  // ||(x0 - 1, 4)|| <= x1 + 1 at x = (4, 2): u = (3, 4), v = 3.
  ConeRow cone;
  AffineExpr a, b, v;
  a.Add(0, 1.0);
  a.constant = -1.0;
  b.constant = 4.0;
  v.Add(1, 1.0);
  v.constant = 1.0;
  cone.members = {a, b};
  cone.bound = v;
  const auto cuts = SeparateCone(cone, std::vector<double>{4.0, 2.0}, 1e-9);
  ASSERT_EQ(cuts.size(), 1u);
  // 0.6 (x0 - 1) + 0.8 * 4 <= x1 + 1   <=>   0.6 x0 - x1 <= -1.6
  EXPECT_NEAR(cuts[0].upper, -1.6, 1e-12);
  // Tight where the cone boundary touches the same direction: x = (4, 4).
  EXPECT_NEAR(cuts[0].Activity(std::vector<double>{4.0, 4.0}), cuts[0].upper, 1e-12);
}

TEST(BranchAndBoundTest, RoundsUpSingleInteger) {
  ConicProgram p;
  p.AddColumn(0.0, 10.0, 1.0, true, "x");
  LinearRow row;
  row.Add(0, 1.0);
  row.lower = 0.5;
  p.AddRow(row);
  const SolveResult r = BranchAndBound(p, {});
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(r.values[0], 1.0, 1e-9);
  EXPECT_NEAR(r.objective, 1.0, 1e-9);
}

TEST(BranchAndBoundTest, KnapsackMatchesEnumeration) {
  const std::vector<double> value = {10, 13, 7, 8, 9, 4, 11, 6};
  const std::vector<double> weight = {5, 7, 4, 5, 6, 2, 6, 3};
  const double capacity = 19.0;
  ConicProgram p;
  LinearRow row;
  for (int j = 0; j < 8; ++j) {
    p.AddColumn(0.0, 1.0, -value[j], true);
    row.Add(j, weight[j]);
  }
  row.upper = capacity;
  p.AddRow(row);

  double best = 0.0;
  for (int mask = 0; mask < 256; ++mask) {
    double w = 0.0, v = 0.0;
    for (int j = 0; j < 8; ++j) {
      if (mask >> j & 1) {
        w += weight[j];
        v += value[j];
      }
    }
    if (w <= capacity) best = std::max(best, v);
  }
  SolverOptions options;
  options.mip_gap = 1e-9;
  const SolveResult r = BranchAndBound(p, options);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(r.objective, -best, 1e-7);
  EXPECT_LE(r.best_bound, r.objective + 1e-9);
}

TEST(BranchAndBoundTest, InfeasibleIntegerProgram) {
  ConicProgram p;
  p.AddColumn(0.0, 1.0, 1.0, true);
  LinearRow row;
  row.Add(0, 2.0);
  row.lower = 0.5;
  row.upper = 1.5;
  p.AddRow(row);
  EXPECT_EQ(BranchAndBound(p, {}).status, SolveStatus::kInfeasible);
}

TEST(BranchAndBoundTest, RandomConicProgramsMatchEnumeration) {
  std::mt19937_64 rng(20261019);
  SolverOptions options;
  options.mip_gap = 1e-9;
  options.oa_tolerance = 1e-9;
  int feasible = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const ConicProgram p = testing::RandomMixedBinaryProgram(rng, 2 + trial % 7, trial % 3 != 0);
    const auto expected = testing::EnumerateBinaries(p);
    const SolveResult r = BranchAndBound(p, options);
    if (!expected) {
      EXPECT_EQ(r.status, SolveStatus::kInfeasible) << "trial " << trial;
      continue;
    }
    ++feasible;
    ASSERT_EQ(r.status, SolveStatus::kOptimal) << "trial " << trial;
    EXPECT_NEAR(r.objective, *expected, 1e-6 * std::max(1.0, std::abs(*expected)))
        << "trial " << trial;
    EXPECT_LE(r.max_cone_violation, 1e-6);
    EXPECT_NEAR(p.ObjectiveValue(r.values), r.objective, 1e-7);
    for (int j = 0; j < p.num_cols(); ++j) {
      if (p.is_integer[j]) {
        EXPECT_NEAR(r.values[j], std::round(r.values[j]), 1e-6);
      }
    }
  }
  EXPECT_GT(feasible, 10);
}

TEST(BranchAndBoundTest, DeterministicTrace) {
  std::mt19937_64 rng(99);
  const ConicProgram p = testing::RandomMixedBinaryProgram(rng, 8, true);
  SolverOptions options;
  options.record_trace = true;
  const SolveResult a = BranchAndBound(p, options);
  const SolveResult b = BranchAndBound(p, options);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (size_t k = 0; k < a.trace.size(); ++k) {
    EXPECT_EQ(a.trace[k].node, b.trace[k].node);
    EXPECT_EQ(a.trace[k].node_bound, b.trace[k].node_bound);
    EXPECT_EQ(a.trace[k].incumbent, b.trace[k].incumbent);
  }
  EXPECT_EQ(a.values, b.values);
  // Weak duality along the trace.
  for (const NodeEvent& e : a.trace) {
    EXPECT_LE(e.best_bound, e.incumbent + 1e-9);
  }
}

TEST(OuterApproximationTest, BoundHistoryIsMonotone) {
  // min -x0 - x1  s.t. ||(x0, x1)|| <= 1  (x2 fixed at 1)
  ConicProgram p;
  p.AddColumn(-2.0, 2.0, -1.0, false);
  p.AddColumn(-2.0, 2.0, -1.0, false);
  p.AddColumn(1.0, 1.0, 0.0, false);
  p.AddCone(ThreeDimCone());
  SimplexSolver lp(p);
  SolverOptions options;
  options.oa_tolerance = 1e-9;
  const OaOutcome oa = SolveWithOuterApproximation(lp, p.cones, 0.0, options);
  ASSERT_EQ(oa.status, LpStatus::kOptimal);
  EXPECT_NEAR(oa.objective, -std::sqrt(2.0), 1e-7);
  for (size_t k = 1; k < oa.bound_history.size(); ++k) {
    EXPECT_GE(oa.bound_history[k], oa.bound_history[k - 1] - 1e-9);
  }
}

TEST(BackendTest, UnknownBackendNamesAvailableOnes) {
  ConicProgram p;
  p.AddColumn(0.0, 1.0, 1.0, false);
  try {
    Solve(p, {}, "gurobi");
    FAIL() << "expected SolverError";
  } catch (const SolverError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("embedded"), std::string::npos);
    EXPECT_NE(what.find("external"), std::string::npos);
  }
}

TEST(BackendTest, EmbeddedDispatchMatchesDirectCall) {
  std::mt19937_64 rng(5);
  const ConicProgram p = testing::RandomMixedBinaryProgram(rng, 5, true);
  const SolveResult direct = BranchAndBound(p, {});
  const SolveResult dispatched = Solve(p, {}, "embedded");
  EXPECT_EQ(direct.status, dispatched.status);
  EXPECT_EQ(direct.values, dispatched.values);
}

TEST(BackendTest, ExternalBackendWithoutCommandFails) {
  ConicProgram p;
  p.AddColumn(0.0, 1.0, 1.0, false);
  EXPECT_THROW(Solve(p, {}, "external"), SolverError);
}

TEST(BackendTest, ExternalAdapterMatchesEmbedded) {
  std::mt19937_64 rng(11);
  const ConicProgram p = testing::RandomMixedBinaryProgram(rng, 6, true);
  SolverOptions options;
  options.external_command = IESUC_EXTERNAL_ADAPTER;
  const SolveResult embedded = Solve(p, options, "embedded");
  const SolveResult external = Solve(p, options, "external");
  ASSERT_EQ(external.status, embedded.status);
  EXPECT_EQ(external.values, embedded.values);
  EXPECT_EQ(external.objective, embedded.objective);
}

TEST(ProgramFormatTest, RoundTrip) {
  std::mt19937_64 rng(3);
  ConicProgram p = testing::RandomMixedBinaryProgram(rng, 4, true);
  p.objective_offset = 1.0 / 3.0;
  p.rows[0].tag = "capacity";
  std::stringstream s;
  WriteProgram(p, s);
  const ConicProgram q = ReadProgram(s);
  ASSERT_EQ(q.num_cols(), p.num_cols());
  ASSERT_EQ(q.num_rows(), p.num_rows());
  ASSERT_EQ(q.cones.size(), p.cones.size());
  EXPECT_EQ(q.objective, p.objective);
  EXPECT_EQ(q.col_lower, p.col_lower);
  EXPECT_EQ(q.col_upper, p.col_upper);
  EXPECT_EQ(q.is_integer, p.is_integer);
  EXPECT_EQ(q.objective_offset, p.objective_offset);
  EXPECT_EQ(q.rows[0].tag, "capacity");
  for (int i = 0; i < p.num_rows(); ++i) {
    EXPECT_EQ(q.rows[i].coefs, p.rows[i].coefs);
    EXPECT_EQ(q.rows[i].lower, p.rows[i].lower);
    EXPECT_EQ(q.rows[i].upper, p.rows[i].upper);
  }
  const SolveResult a = BranchAndBound(p, {});
  const SolveResult b = BranchAndBound(q, {});
  EXPECT_EQ(a.values, b.values);

  std::stringstream sol;
  WriteSolution(a, sol);
  const SolveResult c = ReadSolution(sol);
  EXPECT_EQ(c.status, a.status);
  EXPECT_EQ(c.values, a.values);
  EXPECT_EQ(c.objective, a.objective);
}

}  // namespace
}  // namespace iesuc::solver
