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

#ifndef IESUC_SOLVER_H_
#define IESUC_SOLVER_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iesuc/conic_program.h"
#include "iesuc/simplex.h"

namespace iesuc::solver {

// Supporting hyperplane of ||u|| <= v at a violated point, or nothing when the
// point satisfies the cone within tolerance. A violated point with u == 0
// yields the componentwise cuts  +-u_i <= v. Returned rows are in the program's
// column space with the affine constants folded into the row bound.
std::vector<LinearRow> SeparateCone(const ConeRow& cone, std::span<const double> x,
                                    double tolerance);

// Solves the continuous relaxation held by `lp` and adds outer-approximation
// cuts for `cones` until every cone is satisfied or the round limit is hit.
struct OaOutcome {
  LpStatus status = LpStatus::kNumericalFailure;
  std::vector<double> values;
  double objective = kInfinity;
  int rounds = 0;
  int64_t cuts = 0;
  double max_violation = 0.0;
  // Objective after each LP solve; non-decreasing when the LP is exact.
  std::vector<double> bound_history;
};
OaOutcome SolveWithOuterApproximation(SimplexSolver& lp, std::span<const ConeRow> cones,
                                      double objective_offset, const SolverOptions& options);

// Best-bound branch-and-bound with outer approximation at every node.
SolveResult BranchAndBound(const ConicProgram& program, const SolverOptions& options);

// Names accepted by Solve().
std::vector<std::string> AvailableBackends();

// Dispatches to the embedded solver ("embedded") or to a file-exchange
// adapter ("external", runs options.external_command). Throws SolverError for
// unknown backends, naming the available ones.
SolveResult Solve(const ConicProgram& program, const SolverOptions& options,
                  const std::string& backend = "embedded");

}  // namespace iesuc::solver

#endif  // IESUC_SOLVER_H_
