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

#ifndef IESUC_CONIC_PROGRAM_H_
#define IESUC_CONIC_PROGRAM_H_

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace iesuc::solver {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sparse affine expression  constant + sum_k coefs[k] * x[cols[k]].
struct AffineExpr {
  std::vector<int> cols;
  std::vector<double> coefs;
  double constant = 0.0;

  void Add(int col, double coef) {
    cols.push_back(col);
    coefs.push_back(coef);
  }
  double Evaluate(std::span<const double> x) const;
};

// lower <= sum_k coefs[k] * x[cols[k]] <= upper.
struct LinearRow {
  std::vector<int> cols;
  std::vector<double> coefs;
  double lower = -kInfinity;
  double upper = kInfinity;
  std::string tag;

  void Add(int col, double coef) {
    cols.push_back(col);
    coefs.push_back(coef);
  }
  double Activity(std::span<const double> x) const;
};

// Second-order cone  || (members[0](x), ..., members[k-1](x)) ||_2 <= bound(x).
struct ConeRow {
  std::vector<AffineExpr> members;
  AffineExpr bound;
  std::string tag;

  // ||u(x)|| - v(x); positive means violated.
  double Violation(std::span<const double> x) const;
};

// Mixed-integer program with linear and second-order cone constraints and a
// linear minimization objective.
struct ConicProgram {
  std::vector<double> col_lower;
  std::vector<double> col_upper;
  std::vector<double> objective;
  std::vector<char> is_integer;
  std::vector<std::string> col_names;
  double objective_offset = 0.0;
  std::vector<LinearRow> rows;
  std::vector<ConeRow> cones;

  int num_cols() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  int AddColumn(double lower, double upper, double cost, bool integer, std::string name = {});
  int AddRow(LinearRow row);
  int AddCone(ConeRow cone);

  double ObjectiveValue(std::span<const double> x) const;

  // Throws SolverError when the program breaks a structural invariant:
  // inconsistent sizes, out-of-range column references, non-finite bounds on
  // integer columns, or cones with fewer than two members.
  void Validate() const;
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kLimit, kError };

const char* ToString(SolveStatus status);
SolveStatus SolveStatusFromString(const std::string& text);

// One line per processed branch-and-bound node.
struct NodeEvent {
  int64_t node = 0;
  int depth = 0;
  double node_bound = 0.0;
  double best_bound = 0.0;
  double incumbent = kInfinity;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kError;
  std::vector<double> values;
  double objective = kInfinity;
  double best_bound = -kInfinity;
  double gap = kInfinity;
  int64_t nodes = 0;
  int64_t lp_iterations = 0;
  int64_t cuts = 0;
  double max_cone_violation = 0.0;
  std::vector<NodeEvent> trace;
  std::string message;
};

struct SolverOptions {
  // Relative optimality gap at which branch-and-bound stops.
  double mip_gap = 1e-4;
  // Cone rows count as satisfied when ||u|| - v <= tol * max(1, |v|).
  double oa_tolerance = 1e-7;
  int max_oa_rounds = 300;
  double integrality_tolerance = 1e-6;
  int64_t node_limit = 200000;
  double time_limit_seconds = kInfinity;
  std::string branching_rule = "most_fractional";
  bool rounding_heuristic = true;
  bool record_trace = false;
  // Command run by the "external" backend:  <command> <program> <solution>.
  std::string external_command;

  void Validate() const;
};

// Text exchange format for programs and solutions; see docs/formats.md.
void WriteProgram(const ConicProgram& program, std::ostream& out);
ConicProgram ReadProgram(std::istream& in);
void WriteSolution(const SolveResult& result, std::ostream& out);
SolveResult ReadSolution(std::istream& in);
void WriteTrace(std::span<const NodeEvent> trace, std::ostream& out);

}  // namespace iesuc::solver

#endif  // IESUC_CONIC_PROGRAM_H_
