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

// Progressive hedging over wind scenarios, with the joint-model and
// deterministic baselines.
//
// Each scenario model is solved on its own with the commitment penalized by
// rho_sc' c + kappa/2 ||c - cbar||^2, where c^2 is replaced by c (exact for
// binaries), so subproblems stay linear in c. The traditional variant stops
// once every averaged commitment is binary; the modified one stops at
// Ind <= epsilon inconsistent entries and picks the best of the 2^Ind
// completions by fixed-commitment evaluation.

#ifndef IESUC_HEDGING_H_
#define IESUC_HEDGING_H_

#include <functional>
#include <string>
#include <vector>

#include "iesuc/conic_program.h"
#include "iesuc/network.h"
#include "iesuc/scenarios.h"
#include "iesuc/uc_model.h"

namespace iesuc {

enum class Method { kExtensive, kDeterministic, kTph, kMph };

const char* MethodName(Method m);
Method MethodFromName(const std::string& name);

struct PhOptions {
  // kappa_{i,t} = kappa_coeff * C_PD_i * P_min_i.
  double kappa_coeff = 1.0;
  // Ind threshold: 0 for the traditional variant, 1 or 2 for the modified.
  int epsilon = 0;
  int max_iterations = 150;
  // An averaged commitment counts as binary within this distance of 0 or 1.
  double binary_tolerance = 1e-4;
  int workers = 1;
  // Update rho with the freshly averaged commitment instead of the previous
  // one; then sum_sc P_sc rho_sc stays exactly 0.
  bool post_average_update = false;

  void Validate() const;
};

// Runs fn(0..count-1) on up to `workers` threads. Results must be written to
// per-index slots; fn must not touch shared mutable state.
void ParallelFor(int count, int workers, const std::function<void(int)>& fn);

// Number of entries with min(cbar, 1 - cbar) > tolerance.
int CountInconsistent(const std::vector<double>& cbar, double tolerance);

// Linear coefficient added to each commitment column and the constant term:
// rho + kappa (1/2 - cbar) and sum kappa cbar^2 / 2.
struct PenaltyTerms {
  std::vector<double> linear;
  double constant = 0.0;
};
PenaltyTerms PenalizedObjective(const std::vector<double>& rho, const std::vector<double>& cbar,
                                const std::vector<double>& kappa);

struct PhTraceRow {
  int iteration = 0;
  int ind = 0;
  // Unpenalized objective of each scenario's solution.
  std::vector<double> scenario_objective;
  std::vector<double> cbar;
  // sum_sc P_sc rho_sc minus its expected value (see PhState); ~0.
  double conservation_error = 0.0;
  double wall_seconds = 0.0;  // not part of any deterministic output
};

struct PhState {
  int iteration = 0;
  std::vector<double> probabilities;
  std::vector<double> kappa;             // per commitment entry
  std::vector<std::vector<double>> rho;  // [sc][entry]
  std::vector<std::vector<double>> c;    // [sc][entry]
  std::vector<double> cbar;
  std::vector<double> cbar_initial;
  int ind = 0;
  std::vector<PhTraceRow> trace;
  solver::SolveStatus status = solver::SolveStatus::kOptimal;
};

// Per-scenario models plus what every method needs to evaluate schedules.
struct Problem {
  const IesNetwork* net = nullptr;
  const ScenarioSet* scenarios = nullptr;
  FlowDirectionMap dirs;
  ModelOptions model_options;
  solver::SolverOptions solver_options;
  std::string backend = "embedded";
  // One weight-1 model per scenario, sharing the commitment layout.
  std::vector<ModelInstance> scenario_models;

  int num_commit() const { return scenario_models.front().catalog.num_commit(); }
};

// Determines flow directions (unless `dirs` is given) and builds the
// per-scenario models.
Problem MakeProblem(const IesNetwork& net, const ScenarioSet& scenarios,
                    const ModelOptions& model_options, const solver::SolverOptions& solver_options,
                    const FlowDirectionMap* dirs = nullptr);

struct ScenarioDispatch {
  std::vector<double> values;  // columns of the scenario model
  CostBreakdown cost;          // unweighted
};

struct FixedUcEvaluation {
  solver::SolveStatus status = solver::SolveStatus::kOptimal;
  std::vector<ScenarioDispatch> dispatch;
  CostBreakdown expected;  // probability-weighted
};

// Solves every scenario with the commitment fixed to `c`. Throws SolverError
// if a scenario is infeasible, which the slack variables rule out.
FixedUcEvaluation EvaluateFixedUc(const Problem& problem, const std::vector<double>& c,
                                  int workers);

PhState PhInitialize(const Problem& problem, const PhOptions& options);
void PhIteration(const Problem& problem, const PhOptions& options, PhState& state);

enum class PhControl { kContinue, kConverged, kIterationLimit };
PhControl CheckTermination(const PhState& state, const PhOptions& options);

struct HedgingResult {
  Method method = Method::kExtensive;
  solver::SolveStatus status = solver::SolveStatus::kOptimal;
  std::string message;
  std::vector<double> commitment;  // [gen * T + t], binary
  FixedUcEvaluation evaluation;
  std::vector<PhTraceRow> trace;
  int iterations = 0;
  int final_ind = 0;
  int enumeration_cases = 0;
  bool iteration_limit = false;
  // Joint-model statistics (extensive and deterministic reference solve).
  int64_t nodes = 0;
  double best_bound = 0.0;

  double ExpectedCost() const { return evaluation.expected.Cost(); }
  double Objective() const { return evaluation.expected.Objective(); }
};

// Locates the inconsistent entries of cbar, fixes the rest at their rounded
// value, and evaluates all 2^Ind completions; ties go to the
// lexicographically smallest assignment.
HedgingResult MphEnumerate(const Problem& problem, const PhState& state, const PhOptions& options);

HedgingResult SolveProgressiveHedging(const Problem& problem, const PhOptions& options);
HedgingResult SolveExtensive(const Problem& problem, int workers);
// Commitment from the probability-weighted mean wind scenario, evaluated on
// every scenario.
HedgingResult SolveDeterministic(const Problem& problem, int workers);

}  // namespace iesuc

#endif  // IESUC_HEDGING_H_
