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

// Bounded-variable revised simplex.
//
// Every row i is written as  a_i x - s_i = 0  with a logical variable s_i
// carrying the row bounds, so the working matrix is [A | -I] and all bounds
// live on variables. A cold start uses the all-logical basis and the primal
// simplex (composite phase 1, then phase 2). Warm starts after bound changes
// or appended rows use the dual simplex when the basis is still dual
// feasible. Pricing is Dantzig's rule with a switch to Bland's rule after a
// run of degenerate pivots; ratio tests are two-pass (Harris).

#ifndef IESUC_SIMPLEX_H_
#define IESUC_SIMPLEX_H_

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "iesuc/conic_program.h"

namespace iesuc::solver {

enum class VarStatus : uint8_t { kBasic, kAtLower, kAtUpper, kFree };

// Basis snapshot for warm starts. Snapshots taken with fewer rows than the
// solver currently has are extended with basic logicals.
struct Basis {
  std::vector<VarStatus> structural;
  std::vector<VarStatus> logical;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit, kNumericalFailure };

const char* ToString(LpStatus status);

struct SimplexOptions {
  double primal_tolerance = 1e-9;
  double dual_tolerance = 1e-9;
  double pivot_tolerance = 1e-9;
  int refactor_interval = 80;
  int degenerate_switch = 40;
  int64_t iteration_limit = 500000;
};

class SimplexSolver {
 public:
  // Copies the linear part of `program`; integrality and cones are ignored.
  explicit SimplexSolver(const ConicProgram& program, SimplexOptions options = {});
  ~SimplexSolver();
  SimplexSolver(SimplexSolver&&) noexcept;
  SimplexSolver& operator=(SimplexSolver&&) noexcept;

  int num_cols() const;
  int num_rows() const;

  void SetColumnBounds(int col, double lower, double upper);
  double column_lower(int col) const;
  double column_upper(int col) const;
  void SetObjective(std::span<const double> cost);

  // Appends a row; its logical enters the basis so any existing basis stays
  // valid and dual feasible.
  int AddRow(const LinearRow& row);

  LpStatus Solve();

  Basis GetBasis() const;
  void SetBasis(const Basis& basis);
  // Discards the basis; the next Solve starts from all logicals.
  void ResetBasis();

  // Structural values after Solve.
  std::vector<double> Values() const;
  double ObjectiveValue() const;
  int64_t iterations() const;

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

// One-shot LP solve of `program` with integrality relaxed and cones ignored.
SolveResult SolveLp(const ConicProgram& program, SimplexOptions options = {});

}  // namespace iesuc::solver

#endif  // IESUC_SIMPLEX_H_
