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

// Unit-commitment model: turns a network and a scenario set into a
// mixed-integer conic program.
//
// Output is written as pd = c * P_min + pdf, so the commitment binaries carry
// the no-load part of the production cost and pdf is the output above
// minimum. The Weymouth equation gf |gf| = CONT^2 (pi_c^2 - pi_d^2) is
// replaced, for a fixed flow direction, by the cone ||(gf, CONT pi_d)|| <=
// CONT pi_c, the linear cut gf >= CONT (pi_c - pi_d), and a small objective
// penalty on the pressure drop (mirrored for reverse flow).
//
// Commitment columns come first, generator-major (column = i * T + t), in
// every model, so single-scenario and joint models share their layout.

#ifndef IESUC_UC_MODEL_H_
#define IESUC_UC_MODEL_H_

#include <array>
#include <span>
#include <string>
#include <vector>

#include "iesuc/conic_program.h"
#include "iesuc/network.h"
#include "iesuc/scenarios.h"

namespace iesuc {

enum class LinepackTerminal { kEqual, kAtLeast };

struct ModelOptions {
  // Pressure-drop penalty weight; negative selects DefaultGamma().
  double gamma = -1.0;
  LinepackTerminal terminal = LinepackTerminal::kEqual;
  // Commitment columns become continuous in [0, 1].
  bool relax_integrality = false;
  // Leave out the cones and their linear cuts (flow-direction model).
  bool omit_weymouth = false;
};

// 1e-3 times the mean gas-well production cost.
double DefaultGamma(const IesNetwork& net);

// Scenario-dependent variable families.
enum class Family {
  kPdf,    // output above minimum, GW
  kPg,     // well production, MSm3/h
  kNp,     // non-served power, GWh
  kNg,     // non-served gas, MSm3
  kSto,    // storage withdrawal, MSm3/h
  kSti,    // storage injection, MSm3/h
  kWc,     // wind curtailment, GW
  kPf,     // branch flow, GW
  kTheta,  // bus angle
  kSl,     // storage level, MSm3
  kPi,     // nodal pressure, bar
  kPiAvg,  // pipeline mean pressure, bar
  kM,      // linepack, MSm3
  kGfo,    // pipeline outflow, MSm3/h
  kGfi,    // pipeline inflow, MSm3/h
  kGf,     // pipeline mean flow, MSm3/h
  kCount
};

const char* FamilyName(Family f);

// Column index of every decision variable.
class DecisionCatalog {
 public:
  DecisionCatalog() = default;
  DecisionCatalog(const IesNetwork& net, int scenarios);

  int horizon() const { return horizon_; }
  int scenarios() const { return scenarios_; }
  int num_cols() const { return num_cols_; }
  int num_commit() const { return generators_ * horizon_; }
  int EntityCount(Family f) const { return counts_[static_cast<int>(f)]; }

  // t is 0-based; sc is the position of the scenario within the model.
  int Commit(int gen, int t) const { return gen * horizon_ + t; }
  int Col(Family f, int entity, int t, int sc) const {
    return offsets_[sc * kFamilies + static_cast<int>(f)] + entity * horizon_ + t;
  }
  // Inverse of Col() for scenario columns; false for commitment columns.
  bool Locate(int col, Family* f, int* entity, int* t, int* sc) const;

 private:
  static constexpr int kFamilies = static_cast<int>(Family::kCount);
  int horizon_ = 0;
  int scenarios_ = 0;
  int generators_ = 0;
  int num_cols_ = 0;
  std::array<int, kFamilies> counts_{};
  std::vector<int> offsets_;
};

// Flow sign per (scenario, pipeline, period); +1 means from -> to.
struct FlowDirectionMap {
  int scenarios = 0;
  int pipelines = 0;
  int horizon = 0;
  std::vector<int> sign;

  FlowDirectionMap() = default;
  FlowDirectionMap(int n_scenarios, int n_pipelines, int n_horizon)
      : scenarios(n_scenarios),
        pipelines(n_pipelines),
        horizon(n_horizon),
        sign(static_cast<size_t>(n_scenarios) * n_pipelines * n_horizon, 1) {}
  int& At(int sc, int p, int t) {
    return sign[(static_cast<size_t>(sc) * pipelines + p) * horizon + t];
  }
  int At(int sc, int p, int t) const {
    return sign[(static_cast<size_t>(sc) * pipelines + p) * horizon + t];
  }
  bool operator==(const FlowDirectionMap&) const = default;
};

struct ModelInstance {
  solver::ConicProgram program;
  DecisionCatalog catalog;
  // Global scenario index and objective weight of each scenario in the model.
  std::vector<int> scenario_ids;
  std::vector<double> weights;
  double gamma = 0.0;
  LinepackTerminal terminal = LinepackTerminal::kEqual;
};

// Columns with bounds and integrality, no rows, zero objective. `weights`
// has one entry per scenario in `scenario_ids`.
ModelInstance NewModel(const IesNetwork& net, const ScenarioSet& scenarios,
                       std::vector<int> scenario_ids, std::vector<double> weights,
                       const ModelOptions& options);

// Weighted production, gas and unserved-energy costs plus the pressure-drop
// penalty per the direction map. An empty map is allowed only with gamma 0.
void BuildObjective(const IesNetwork& net, const FlowDirectionMap& dirs, double gamma,
                    ModelInstance& model);
void AddPowerConstraints(const IesNetwork& net, const ScenarioSet& scenarios, ModelInstance& model);
void AddGasConstraints(const IesNetwork& net, ModelInstance& model);
void AddLinepackConstraints(const IesNetwork& net, LinepackTerminal terminal, ModelInstance& model);
void RelaxWeymouth(const IesNetwork& net, const FlowDirectionMap& dirs, ModelInstance& model);

// Everything above for the given scenarios.
ModelInstance BuildScenarioModel(const IesNetwork& net, const ScenarioSet& scenarios,
                                 const std::vector<int>& scenario_ids,
                                 const std::vector<double>& weights, const FlowDirectionMap& dirs,
                                 const ModelOptions& options);
// All scenarios, weighted by probability.
ModelInstance BuildExtensiveModel(const IesNetwork& net, const ScenarioSet& scenarios,
                                  const FlowDirectionMap& dirs, const ModelOptions& options);

// Solves the joint model without Weymouth rows and with the commitment
// relaxed, and reads the sign of every mean flow; |gf| < 1e-6 counts as +1.
// Throws DataError when that model is infeasible.
FlowDirectionMap DetermineFlowDirections(const IesNetwork& net, const ScenarioSet& scenarios,
                                         const ModelOptions& options);

// Relative Weymouth residual |gf|gf| - CONT^2 (pi_c^2 - pi_d^2)| /
// max(CONT^2 Pi_max^2, eps) per pipeline, period and scenario.
struct RelaxationAudit {
  std::vector<double> residual;  // [sc][pipe][t] flattened like FlowDirectionMap
  double max_residual = 0.0;
  double mean_residual = 0.0;
};
double WeymouthResidual(double gf, double pi_from, double pi_to, double cont, double pi_max);
RelaxationAudit AuditRelaxation(const IesNetwork& net, const ModelInstance& model,
                                std::span<const double> values);

// Balance checks recomputed from network data rather than model rows.
struct ConservationAudit {
  double bus_residual = 0.0;       // max |power balance|, GW
  double gas_residual = 0.0;       // max |gas balance|, MSm3/h
  double storage_residual = 0.0;   // max |sl_T - sl_0 - sum(sti - sto)|
  double linepack_residual = 0.0;  // terminal condition violation
  // Per model scenario: sum over t of generation + wind used + np - demand.
  std::vector<double> energy_residual;
};
ConservationAudit AuditConservation(const IesNetwork& net, const ScenarioSet& scenarios,
                                    const ModelInstance& model, std::span<const double> values);

// Cost split into the production, gas-supply and unserved/curtailment groups,
// each weighted as in the model objective, plus the pressure-drop penalty.
struct CostBreakdown {
  double production = 0.0;
  double gas_supply = 0.0;
  double unserved = 0.0;
  double penalty = 0.0;
  double Cost() const { return production + gas_supply + unserved; }
  double Objective() const { return Cost() + penalty; }
};
CostBreakdown EvaluateCosts(const IesNetwork& net, const FlowDirectionMap& dirs,
                            const ModelInstance& model, std::span<const double> values);

// Readable column name, e.g. "pdf[G1,t3,sc0]" or "c[G1,t3]".
std::string ColumnName(const IesNetwork& net, const ModelInstance& model, int col);

// Sparse text export with row tags (same format as solver::WriteProgram,
// with column names filled in).
void ExportModel(const IesNetwork& net, const ModelInstance& model, std::ostream& out);

}  // namespace iesuc

#endif  // IESUC_UC_MODEL_H_
