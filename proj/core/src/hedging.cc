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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <thread>

#include "iesuc/solver.h"

namespace iesuc {
namespace {

using solver::SolverError;
using solver::SolveResult;
using solver::SolveStatus;

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

std::vector<double> CommitValues(const ModelInstance& model, const std::vector<double>& values) {
  std::vector<double> c(model.catalog.num_commit());
  for (size_t j = 0; j < c.size(); ++j) c[j] = std::round(values[j]) + 0.0;
  return c;
}

double BaseObjective(const ModelInstance& model, const std::vector<double>& values) {
  return model.program.ObjectiveValue(values);
}

struct PenalizedSolve {
  SolveResult result;
  std::vector<double> c;
  double base_objective = 0.0;
};

PenalizedSolve SolveScenario(const Problem& problem, int sc, const PenaltyTerms* penalty) {
  const ModelInstance& model = problem.scenario_models[sc];
  PenalizedSolve out;
  if (penalty == nullptr) {
    out.result = solver::Solve(model.program, problem.solver_options, problem.backend);
  } else {
    solver::ConicProgram program = model.program;
    for (size_t j = 0; j < penalty->linear.size(); ++j) program.objective[j] += penalty->linear[j];
    program.objective_offset += penalty->constant;
    out.result = solver::Solve(program, problem.solver_options, problem.backend);
  }
  if (out.result.status == SolveStatus::kInfeasible) {
    throw SolverError("scenario " + std::to_string(model.scenario_ids[0]) +
                      " subproblem is infeasible");
  }
  if (out.result.values.empty()) {
    throw SolverError("scenario " + std::to_string(model.scenario_ids[0]) +
                      " subproblem returned no solution (" + solver::ToString(out.result.status) +
                      ")");
  }
  out.c = CommitValues(model, out.result.values);
  out.base_objective = BaseObjective(model, out.result.values);
  return out;
}

std::vector<double> Average(const std::vector<double>& prob,
                            const std::vector<std::vector<double>>& c) {
  std::vector<double> avg(c[0].size(), 0.0);
  for (size_t s = 0; s < c.size(); ++s) {
    for (size_t j = 0; j < avg.size(); ++j) avg[j] += prob[s] * c[s][j];
  }
  return avg;
}

double ConservationError(const PhState& state, bool post_average) {
  double worst = 0.0;
  for (size_t j = 0; j < state.cbar.size(); ++j) {
    double sum = 0.0;
    for (size_t s = 0; s < state.rho.size(); ++s) sum += state.probabilities[s] * state.rho[s][j];
    const double expected =
        post_average ? 0.0 : state.kappa[j] * (state.cbar[j] - state.cbar_initial[j]);
    worst = std::max(worst, std::abs(sum - expected));
  }
  return worst;
}

void CheckConservation(PhTraceRow& row, const PhState& state, const PhOptions& options) {
  row.conservation_error = ConservationError(state, options.post_average_update);
  double scale = 1.0;
  for (double k : state.kappa) scale = std::max(scale, k);
  if (row.conservation_error > 1e-9 * scale * (state.iteration + 1)) {
    throw SolverError("multiplier conservation violated at iteration " +
                      std::to_string(state.iteration));
  }
}

}  // namespace

const char* MethodName(Method m) {
  switch (m) {
    case Method::kExtensive:
      return "extensive";
    case Method::kDeterministic:
      return "deterministic";
    case Method::kTph:
      return "tph";
    case Method::kMph:
      return "mph";
  }
  return "?";
}

Method MethodFromName(const std::string& name) {
  for (Method m : {Method::kExtensive, Method::kDeterministic, Method::kTph, Method::kMph}) {
    if (name == MethodName(m)) return m;
  }
  throw DataError("unknown method '" + name + "' (expected extensive, deterministic, tph, mph)");
}

void PhOptions::Validate() const {
  if (epsilon < 0 || epsilon > 2) throw DataError("epsilon must be 0, 1 or 2");
  if (!(kappa_coeff > 0)) throw DataError("kappa coefficient must be positive");
  if (max_iterations < 0) throw DataError("max iterations must be non-negative");
  if (!(binary_tolerance > 0 && binary_tolerance < 0.5)) {
    throw DataError("binary tolerance must be in (0, 0.5)");
  }
  if (workers < 1) throw DataError("worker count must be at least 1");
}

void ParallelFor(int count, int workers, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  workers = std::max(1, std::min(workers, count));
  std::vector<std::exception_ptr> errors(count);
  if (workers == 1) {
    for (int k = 0; k < count; ++k) {
      try {
        fn(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int k = next++; k < count; k = next++) {
          try {
            fn(k);
          } catch (...) {
            errors[k] = std::current_exception();
          }
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }
  // Report the failure of the lowest index, whatever the thread timing.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

int CountInconsistent(const std::vector<double>& cbar, double tolerance) {
  int ind = 0;
  for (double v : cbar) {
    if (std::min(v, 1.0 - v) > tolerance) ++ind;
  }
  return ind;
}

PenaltyTerms PenalizedObjective(const std::vector<double>& rho, const std::vector<double>& cbar,
                                const std::vector<double>& kappa) {
  PenaltyTerms p;
  p.linear.resize(rho.size());
  for (size_t j = 0; j < rho.size(); ++j) {
    p.linear[j] = rho[j] + kappa[j] * (0.5 - cbar[j]);
    p.constant += 0.5 * kappa[j] * cbar[j] * cbar[j];
  }
  return p;
}

Problem MakeProblem(const IesNetwork& net, const ScenarioSet& scenarios,
                    const ModelOptions& model_options, const solver::SolverOptions& solver_options,
                    const FlowDirectionMap* dirs) {
  Problem problem;
  problem.net = &net;
  problem.scenarios = &scenarios;
  problem.model_options = model_options;
  problem.solver_options = solver_options;
  problem.dirs = dirs ? *dirs : DetermineFlowDirections(net, scenarios, model_options);
  for (size_t s = 0; s < scenarios.scenarios.size(); ++s) {
    problem.scenario_models.push_back(BuildScenarioModel(net, scenarios, {static_cast<int>(s)},
                                                         {1.0}, problem.dirs, model_options));
  }
  if (problem.scenario_models.empty()) throw DataError("no scenarios");
  return problem;
}

FixedUcEvaluation EvaluateFixedUc(const Problem& problem, const std::vector<double>& c,
                                  int workers) {
  const int n = static_cast<int>(problem.scenario_models.size());
  FixedUcEvaluation eval;
  eval.dispatch.resize(n);
  ParallelFor(n, workers, [&](int sc) {
    const ModelInstance& model = problem.scenario_models[sc];
    solver::ConicProgram program = model.program;
    for (size_t j = 0; j < c.size(); ++j) {
      program.col_lower[j] = program.col_upper[j] = c[j];
    }
    const SolveResult r = solver::Solve(program, problem.solver_options, problem.backend);
    if (r.status != SolveStatus::kOptimal) {
      throw SolverError("scenario " + std::to_string(sc) +
                        " at fixed commitment: " + solver::ToString(r.status) + " " + r.message);
    }
    eval.dispatch[sc].values = r.values;
    eval.dispatch[sc].cost = EvaluateCosts(*problem.net, problem.dirs, model, r.values);
  });
  for (int sc = 0; sc < n; ++sc) {
    const double p = problem.scenarios->scenarios[sc].probability;
    const CostBreakdown& k = eval.dispatch[sc].cost;
    eval.expected.production += p * k.production;
    eval.expected.gas_supply += p * k.gas_supply;
    eval.expected.unserved += p * k.unserved;
    eval.expected.penalty += p * k.penalty;
  }
  return eval;
}

PhState PhInitialize(const Problem& problem, const PhOptions& options) {
  options.Validate();
  const auto start = std::chrono::steady_clock::now();
  const IesNetwork& net = *problem.net;
  const int n = static_cast<int>(problem.scenario_models.size());
  PhState state;
  for (const Scenario& s : problem.scenarios->scenarios)
    state.probabilities.push_back(s.probability);
  const int T = net.horizon;
  state.kappa.resize(problem.num_commit());
  for (size_t i = 0; i < net.generators.size(); ++i) {
    for (int t = 0; t < T; ++t) {
      state.kappa[i * T + t] =
          options.kappa_coeff * net.generators[i].cost * net.generators[i].p_min;
    }
  }
  std::vector<PenalizedSolve> solves(n);
  ParallelFor(n, options.workers,
              [&](int sc) { solves[sc] = SolveScenario(problem, sc, nullptr); });
  PhTraceRow row;
  for (int sc = 0; sc < n; ++sc) {
    state.c.push_back(solves[sc].c);
    row.scenario_objective.push_back(solves[sc].base_objective);
    if (solves[sc].result.status != SolveStatus::kOptimal) state.status = SolveStatus::kLimit;
  }
  state.cbar = Average(state.probabilities, state.c);
  state.cbar_initial = state.cbar;
  state.rho.assign(n, std::vector<double>(state.cbar.size()));
  for (int sc = 0; sc < n; ++sc) {
    for (size_t j = 0; j < state.cbar.size(); ++j) {
      state.rho[sc][j] = state.kappa[j] * (state.c[sc][j] - state.cbar[j]);
    }
  }
  state.ind = CountInconsistent(state.cbar, options.binary_tolerance);
  row.iteration = 0;
  row.ind = state.ind;
  row.cbar = state.cbar;
  CheckConservation(row, state, options);
  row.wall_seconds = Seconds(start);
  state.trace.push_back(std::move(row));
  return state;
}

void PhIteration(const Problem& problem, const PhOptions& options, PhState& state) {
  const auto start = std::chrono::steady_clock::now();
  const int n = static_cast<int>(problem.scenario_models.size());
  ++state.iteration;
  std::vector<PenalizedSolve> solves(n);
  ParallelFor(n, options.workers, [&](int sc) {
    const PenaltyTerms penalty = PenalizedObjective(state.rho[sc], state.cbar, state.kappa);
    solves[sc] = SolveScenario(problem, sc, &penalty);
  });
  PhTraceRow row;
  for (int sc = 0; sc < n; ++sc) {
    state.c[sc] = solves[sc].c;
    row.scenario_objective.push_back(solves[sc].base_objective);
    if (solves[sc].result.status != SolveStatus::kOptimal) state.status = SolveStatus::kLimit;
  }
  const std::vector<double> previous = state.cbar;
  state.cbar = Average(state.probabilities, state.c);
  const std::vector<double>& anchor = options.post_average_update ? state.cbar : previous;
  for (int sc = 0; sc < n; ++sc) {
    for (size_t j = 0; j < anchor.size(); ++j) {
      state.rho[sc][j] += state.kappa[j] * (state.c[sc][j] - anchor[j]);
    }
  }
  state.ind = CountInconsistent(state.cbar, options.binary_tolerance);
  row.iteration = state.iteration;
  row.ind = state.ind;
  row.cbar = state.cbar;
  CheckConservation(row, state, options);
  row.wall_seconds = Seconds(start);
  state.trace.push_back(std::move(row));
}

PhControl CheckTermination(const PhState& state, const PhOptions& options) {
  if (state.ind <= options.epsilon) return PhControl::kConverged;
  if (state.iteration >= options.max_iterations) return PhControl::kIterationLimit;
  return PhControl::kContinue;
}

HedgingResult MphEnumerate(const Problem& problem, const PhState& state, const PhOptions& options) {
  std::vector<int> open;
  std::vector<double> base(state.cbar.size());
  for (size_t j = 0; j < state.cbar.size(); ++j) {
    const double v = state.cbar[j];
    if (std::min(v, 1.0 - v) > options.binary_tolerance) {
      open.push_back(static_cast<int>(j));
    } else {
      base[j] = v > 0.5 ? 1.0 : 0.0;
    }
  }
  if (open.size() > 20) throw SolverError("too many inconsistent commitments to enumerate");
  const int ind = static_cast<int>(open.size());
  const uint32_t cases = 1u << ind;
  HedgingResult best;
  best.method = options.epsilon == 0 ? Method::kTph : Method::kMph;
  best.enumeration_cases = static_cast<int>(cases);
  best.final_ind = ind;
  bool found = false;
  std::string failures;
  // Case k assigns bit (ind - 1 - e) to open[e]: increasing k is
  // lexicographic order, and a strict comparison keeps the smallest on ties.
  for (uint32_t k = 0; k < cases; ++k) {
    std::vector<double> c = base;
    for (int e = 0; e < ind; ++e) c[open[e]] = (k >> (ind - 1 - e)) & 1u ? 1.0 : 0.0;
    try {
      FixedUcEvaluation eval = EvaluateFixedUc(problem, c, options.workers);
      if (!found || eval.expected.Objective() < best.evaluation.expected.Objective()) {
        best.commitment = std::move(c);
        best.evaluation = std::move(eval);
        found = true;
      }
    } catch (const SolverError& e) {
      failures += "case " + std::to_string(k) + ": " + e.what() + "\n";
    }
  }
  if (!found) throw SolverError("every enumerated case failed:\n" + failures);
  return best;
}

HedgingResult SolveProgressiveHedging(const Problem& problem, const PhOptions& options) {
  PhState state = PhInitialize(problem, options);
  PhControl control;
  while ((control = CheckTermination(state, options)) == PhControl::kContinue) {
    PhIteration(problem, options, state);
  }
  HedgingResult result;
  if (control == PhControl::kConverged) {
    result = MphEnumerate(problem, state, options);
  } else {
    // Out of iterations: round the average and report the limit.
    std::vector<double> c(state.cbar.size());
    for (size_t j = 0; j < c.size(); ++j) c[j] = state.cbar[j] >= 0.5 ? 1.0 : 0.0;
    result.method = options.epsilon == 0 ? Method::kTph : Method::kMph;
    result.evaluation = EvaluateFixedUc(problem, c, options.workers);
    result.commitment = std::move(c);
    result.final_ind = state.ind;
    result.iteration_limit = true;
    result.status = SolveStatus::kLimit;
    result.message =
        "iteration limit reached with " + std::to_string(state.ind) + " inconsistent commitments";
  }
  if (state.status != SolveStatus::kOptimal && result.status == SolveStatus::kOptimal) {
    result.status = state.status;
    result.message = "some subproblems stopped at a solver limit";
  }
  result.iterations = state.iteration;
  result.trace = std::move(state.trace);
  return result;
}

namespace {

HedgingResult SolveJoint(const Problem& problem, const ModelInstance& model, Method method,
                         int workers) {
  const SolveResult r = solver::Solve(model.program, problem.solver_options, problem.backend);
  HedgingResult result;
  result.method = method;
  result.status = r.status;
  result.message = r.message;
  result.nodes = r.nodes;
  result.best_bound = r.best_bound;
  if (r.values.empty()) {
    if (r.status == SolveStatus::kOptimal) result.status = SolveStatus::kError;
    return result;
  }
  result.commitment = CommitValues(model, r.values);
  result.evaluation = EvaluateFixedUc(problem, result.commitment, workers);
  return result;
}

}  // namespace

HedgingResult SolveExtensive(const Problem& problem, int workers) {
  const ModelInstance model =
      BuildExtensiveModel(*problem.net, *problem.scenarios, problem.dirs, problem.model_options);
  return SolveJoint(problem, model, Method::kExtensive, workers);
}

HedgingResult SolveDeterministic(const Problem& problem, int workers) {
  const ScenarioSet mean = MeanScenario(*problem.scenarios);
  const FlowDirectionMap dirs = DetermineFlowDirections(*problem.net, mean, problem.model_options);
  const ModelInstance model = BuildExtensiveModel(*problem.net, mean, dirs, problem.model_options);
  return SolveJoint(problem, model, Method::kDeterministic, workers);
}

}  // namespace iesuc
