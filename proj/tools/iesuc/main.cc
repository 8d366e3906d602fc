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

// iesuc: stochastic day-ahead unit commitment for coupled power and gas
// systems.
//
//   iesuc validate --network net.json [--scenarios sc.json]
//   iesuc generate-scenarios --network net.json --out sc.json [--k 4 --seed 1]
//   iesuc solve --network net.json --scenarios sc.json --method mph --out run/
//   iesuc compare run_ext/ run_tph/ run_mph/

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "iesuc/hedging.h"
#include "iesuc/network.h"
#include "iesuc/scenarios.h"
#include "outputs.h"

namespace iesuc::cli {
namespace {

enum ExitCode {
  kExitOptimal = 0,
  kExitInternal = 1,
  kExitInfeasible = 2,
  kExitLimit = 3,
  kExitConfig = 4,
};

// Configuration problems found after parsing (inconsistent flags, bad files).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GenerationFlags {
  double alpha = 0.8;
  double beta = 0.1;
  double sigma = 0.6;
  uint64_t seed = 1;
  int paths = 1000;
  int k = 4;
  bool shared_error = false;

  void Register(CLI::App* app) {
    app->add_option("--alpha", alpha, "ARMA lag-1 error coefficient")->capture_default_str();
    app->add_option("--beta", beta, "ARMA lag-1 noise coefficient")->capture_default_str();
    app->add_option("--sigma", sigma, "ARMA noise standard deviation (m/s)")->capture_default_str();
    app->add_option("--seed", seed, "random seed")->capture_default_str();
    app->add_option("--paths", paths, "number of simulated error paths")->capture_default_str();
    app->add_option("--k", k, "number of scenarios after k-means")->capture_default_str();
    app->add_flag("--shared-error", shared_error, "all farms follow one error path");
  }

  ScenarioGenOptions Options() const {
    ScenarioGenOptions o;
    o.arma = {alpha, beta, sigma, seed};
    o.paths = paths;
    o.k = k;
    o.shared_error = shared_error;
    return o;
  }
};

struct SolveFlags {
  std::string network;
  std::string scenarios;
  GenerationFlags generation;
  std::string method = "mph";
  std::optional<int> epsilon;
  double kappa = 1.0;
  int max_iterations = 150;
  double binary_tolerance = 1e-4;
  bool post_average_update = false;
  std::optional<double> gamma;
  std::string terminal = "equal";
  double mip_gap = 1e-4;
  double oa_tolerance = 1e-7;
  int64_t node_limit = 200000;
  double time_limit = 0.0;
  std::string backend = "embedded";
  std::string external_command;
  std::string out;
  std::optional<int> workers;
};

double Since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

IesNetwork LoadNetworkOrThrow(const std::string& path) {
  try {
    return LoadNetwork(path);
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
}

double WindEnergy(const Scenario& s) {
  double sum = 0.0;
  for (const auto& farm : s.wind) {
    for (double v : farm) sum += v;
  }
  return sum;
}

int RunValidate(const std::string& network, const std::string& scenarios) {
  const IesNetwork net = LoadNetworkOrThrow(network);
  std::cout << "network " << net.name << ": ok (" << net.buses.size() << " buses, "
            << net.generators.size() << " generators, " << net.gas_nodes.size() << " gas nodes, "
            << net.pipelines.size() << " pipelines)\n";
  if (!scenarios.empty()) {
    ScenarioSet set;
    try {
      set = LoadScenarios(scenarios);
    } catch (const DataError& e) {
      throw ConfigError(e.what());
    }
    const ValidationReport report = ValidateScenarios(set, net);
    if (!report.empty()) throw ConfigError(FormatReport(report));
    std::cout << "scenarios: ok (" << set.scenarios.size() << ")\n";
  }
  return kExitOptimal;
}

int RunGenerate(const std::string& network, const std::string& out, const GenerationFlags& flags) {
  const IesNetwork net = LoadNetworkOrThrow(network);
  ScenarioSet set;
  try {
    set = GenerateScenarios(net, flags.Options());
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  SaveScenarios(set, out);
  std::cout << "k " << set.scenarios.size() << '\n';
  std::cout << "scenario\tprobability\twind_energy_gwh\n";
  for (size_t s = 0; s < set.scenarios.size(); ++s) {
    std::cout << s << '\t' << Num(set.scenarios[s].probability) << '\t'
              << Num(WindEnergy(set.scenarios[s])) << '\n';
  }
  return kExitOptimal;
}

PhOptions MakePhOptions(const SolveFlags& f, Method method, int workers) {
  PhOptions ph;
  ph.kappa_coeff = f.kappa;
  ph.max_iterations = f.max_iterations;
  ph.binary_tolerance = f.binary_tolerance;
  ph.post_average_update = f.post_average_update;
  ph.workers = workers;
  if (method == Method::kTph) {
    if (f.epsilon.value_or(0) != 0) throw ConfigError("method tph requires epsilon 0");
    ph.epsilon = 0;
  } else if (method == Method::kMph) {
    ph.epsilon = f.epsilon.value_or(2);
    if (ph.epsilon != 1 && ph.epsilon != 2) throw ConfigError("method mph requires epsilon 1 or 2");
  }
  try {
    ph.Validate();
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  return ph;
}

int ExitFor(solver::SolveStatus status) {
  switch (status) {
    case solver::SolveStatus::kOptimal:
      return kExitOptimal;
    case solver::SolveStatus::kInfeasible:
      return kExitInfeasible;
    case solver::SolveStatus::kLimit:
      return kExitLimit;
    default:
      return kExitInternal;
  }
}

int RunSolve(const SolveFlags& f) {
  PhaseTimes times;
  auto start = std::chrono::steady_clock::now();
  Method method;
  try {
    method = MethodFromName(f.method);
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  const IesNetwork net = LoadNetworkOrThrow(f.network);
  ScenarioSet set;
  try {
    if (!f.scenarios.empty()) {
      set = LoadScenarios(f.scenarios);
    } else if (net.wind_farms.empty()) {
      set = ForecastScenario(net);
    } else {
      set = GenerateScenarios(net, f.generation.Options());
    }
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  const ValidationReport report = ValidateScenarios(set, net);
  if (!report.empty()) throw ConfigError(FormatReport(report));

  const int n = static_cast<int>(set.scenarios.size());
  int workers = f.workers.value_or(
      std::min(n, static_cast<int>(std::max(1u, std::thread::hardware_concurrency()))));
  if (workers < 1) throw ConfigError("worker count must be at least 1");
  times.workers = workers;
  const PhOptions ph = MakePhOptions(f, method, workers);

  ModelOptions model;
  if (f.gamma) {
    if (*f.gamma < 0) throw ConfigError("gamma must be non-negative");
    model.gamma = *f.gamma;
  }
  if (f.terminal == "equal") {
    model.terminal = LinepackTerminal::kEqual;
  } else if (f.terminal == "at-least") {
    model.terminal = LinepackTerminal::kAtLeast;
  } else {
    throw ConfigError("linepack terminal must be 'equal' or 'at-least'");
  }
  solver::SolverOptions solver;
  solver.mip_gap = f.mip_gap;
  solver.oa_tolerance = f.oa_tolerance;
  solver.node_limit = f.node_limit;
  if (f.time_limit > 0) solver.time_limit_seconds = f.time_limit;
  solver.external_command = f.external_command;
  try {
    solver.Validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  times.load = Since(start);

  start = std::chrono::steady_clock::now();
  Problem problem = MakeProblem(net, set, model, solver);
  problem.backend = f.backend;
  times.formulation = Since(start);

  start = std::chrono::steady_clock::now();
  HedgingResult result;
  switch (method) {
    case Method::kExtensive:
      result = SolveExtensive(problem, workers);
      break;
    case Method::kDeterministic:
      result = SolveDeterministic(problem, workers);
      break;
    case Method::kTph:
    case Method::kMph:
      result = SolveProgressiveHedging(problem, ph);
      break;
  }
  times.solve = Since(start);
  if (result.commitment.empty()) {
    std::cerr << "error: " << MethodName(method)
              << " produced no schedule: " << solver::ToString(result.status) << ' '
              << result.message << '\n';
    return result.status == solver::SolveStatus::kOptimal ? kExitInternal : ExitFor(result.status);
  }

  WriteSolveOutputs(f.out, problem, result, ph, times);

  const NonServed ns = SummarizeNonServed(problem, result);
  std::cout << "method " << MethodName(result.method) << '\n';
  std::cout << "status " << solver::ToString(result.status) << '\n';
  if (!result.message.empty()) std::cout << "message " << result.message << '\n';
  std::cout << "expected cost " << Num(result.ExpectedCost()) << '\n';
  if (result.method == Method::kTph || result.method == Method::kMph) {
    std::cout << "iterations " << result.iterations << ", final Ind " << result.final_ind
              << ", enumeration cases " << result.enumeration_cases << '\n';
  }
  std::cout << "total non-served power " << Num(ns.expected_power) << " GWh expected, "
            << Num(ns.max_power) << " GWh in scenario " << ns.max_power_scenario << '\n';
  std::cout << "time " << Num(times.load + times.formulation + times.solve) << " s (formulation "
            << Num(times.formulation) << " s)\n";
  return ExitFor(result.status);
}

int RunCompare(const std::vector<std::string>& runs, const std::string& out) {
  std::vector<std::filesystem::path> dirs(runs.begin(), runs.end());
  std::vector<CompareRow> rows;
  std::string reference;
  try {
    rows = CompareRuns(dirs, &reference);
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  WriteCompareTable(rows, std::cout);
  std::cout << "gap reference: " << reference << '\n';
  if (!out.empty()) {
    std::ofstream file(out, std::ios::binary);
    if (!file) throw ConfigError("cannot write " + out);
    file << "method\ttime_s\texpected_cost\tgap\trun\n";
    for (const CompareRow& r : rows) {
      file << r.method << '\t' << Num(r.seconds) << '\t' << Num(r.expected_cost) << '\t'
           << Num(r.gap) << '\t' << r.run << '\n';
    }
  }
  return kExitOptimal;
}

int Main(int argc, char** argv) {
  CLI::App app{"Stochastic day-ahead unit commitment for coupled power and gas systems"};
  app.set_config("--config", "", "read options from a TOML/INI file");
  app.require_subcommand(1);

  std::string network, scenarios, out;
  auto* validate = app.add_subcommand("validate", "check a network (and scenario) file");
  validate->add_option("--network", network, "network JSON file")->required();
  validate->add_option("--scenarios", scenarios, "scenario JSON file");

  GenerationFlags generation;
  auto* generate = app.add_subcommand("generate-scenarios", "simulate and reduce wind scenarios");
  generate->add_option("--network", network, "network JSON file with wind forecasts")->required();
  generate->add_option("--out", out, "scenario file to write")->required();
  generation.Register(generate);

  SolveFlags solve_flags;
  auto* solve = app.add_subcommand("solve", "solve the unit commitment with one method");
  solve->add_option("--network", solve_flags.network, "network JSON file")->required();
  solve->add_option("--scenarios", solve_flags.scenarios,
                    "scenario JSON file (generated from the forecasts when omitted)");
  solve_flags.generation.Register(solve);
  solve->add_option("--method", solve_flags.method, "extensive, deterministic, tph or mph")
      ->capture_default_str();
  solve->add_option("--epsilon", solve_flags.epsilon, "Ind threshold (tph: 0, mph: 1 or 2)");
  solve->add_option("--kappa", solve_flags.kappa, "penalty coefficient multiplier")
      ->capture_default_str();
  solve->add_option("--max-iterations", solve_flags.max_iterations, "hedging iteration limit")
      ->capture_default_str();
  solve
      ->add_option("--binary-tolerance", solve_flags.binary_tolerance,
                   "distance from 0/1 at which an average counts as binary")
      ->capture_default_str();
  solve->add_flag("--post-average-update", solve_flags.post_average_update,
                  "update multipliers with the new average");
  solve->add_option("--gamma", solve_flags.gamma,
                    "pressure-drop penalty (default 1e-3 x mean well cost)");
  solve->add_option("--linepack-terminal", solve_flags.terminal, "equal or at-least")
      ->capture_default_str();
  solve->add_option("--mip-gap", solve_flags.mip_gap, "relative branch-and-bound gap")
      ->capture_default_str();
  solve->add_option("--oa-tolerance", solve_flags.oa_tolerance, "cone feasibility tolerance")
      ->capture_default_str();
  solve->add_option("--node-limit", solve_flags.node_limit, "branch-and-bound node limit")
      ->capture_default_str();
  solve->add_option("--time-limit", solve_flags.time_limit,
                    "seconds per branch-and-bound solve (0: none)");
  solve->add_option("--backend", solve_flags.backend, "embedded or external")
      ->capture_default_str();
  solve->add_option("--external-command", solve_flags.external_command,
                    "solver command for the external backend");
  solve->add_option("--out", solve_flags.out, "output directory")->required();
  solve
      ->add_option("--workers", solve_flags.workers,
                   "parallel scenario solves (default: cores, capped at scenario count)")
      ->envname("IESUC_WORKERS");

  std::vector<std::string> runs;
  std::string compare_out;
  auto* compare = app.add_subcommand("compare", "tabulate cost and time of finished runs");
  compare->add_option("runs", runs, "output directories of iesuc solve")->required();
  compare->add_option("--out", compare_out, "also write the table as TSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOptimal : kExitConfig;
  }

  try {
    if (*validate) return RunValidate(network, scenarios);
    if (*generate) return RunGenerate(network, out, generation);
    if (*solve) return RunSolve(solve_flags);
    if (*compare) return RunCompare(runs, compare_out);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    // Data that loads but admits no solution, e.g. an infeasible gas network.
    std::cerr << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const solver::SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitConfig;
}

}  // namespace
}  // namespace iesuc::cli

int main(int argc, char** argv) { return iesuc::cli::Main(argc, argv); }
