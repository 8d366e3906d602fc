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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <queue>
#include <utility>

#include "iesuc/solver.h"

namespace iesuc::solver {
namespace {

// Folds sum_k coef_k * expr_k into a row, merging repeated columns.
void Accumulate(std::map<int, double>& terms, const AffineExpr& e, double coef, double& constant) {
  for (size_t k = 0; k < e.cols.size(); ++k) terms[e.cols[k]] += coef * e.coefs[k];
  constant += coef * e.constant;
}

LinearRow RowFromTerms(const std::map<int, double>& terms, double constant) {
  LinearRow row;
  row.tag = "oa";
  for (const auto& [col, coef] : terms) {
    if (coef != 0.0) row.Add(col, coef);
  }
  // terms . x + constant <= 0
  row.upper = -constant;
  return row;
}

struct BoundChange {
  int col;
  double lower;
  double upper;
};

struct Node {
  int64_t id = 0;
  int depth = 0;
  double bound = -kInfinity;
  int64_t key = 0;
  std::vector<BoundChange> changes;
  std::shared_ptr<const Basis> basis;
};

struct NodeOrder {
  // priority_queue pops the "largest"; the best node is the smallest key,
  // then the deepest, then the oldest.
  bool operator()(const Node& a, const Node& b) const {
    if (a.key != b.key) return a.key > b.key;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  }
};

double RelativeGap(double incumbent, double bound) {
  if (!std::isfinite(incumbent)) return kInfinity;
  if (!std::isfinite(bound)) return kInfinity;
  return std::max(0.0, incumbent - bound) / std::max(1e-10, std::abs(incumbent));
}

class BranchAndBoundSearch {
 public:
  BranchAndBoundSearch(const ConicProgram& program, const SolverOptions& options)
      : program_(program), options_(options), lp_(program) {
    for (int j = 0; j < program.num_cols(); ++j) {
      if (program.is_integer[j]) integer_cols_.push_back(j);
    }
  }

  SolveResult Run() {
    start_ = std::chrono::steady_clock::now();
    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    open.push(Node{});
    bool limit_hit = false;
    bool node_failed = false;
    double pruned_bound = kInfinity;

    while (!open.empty()) {
      if (result_.nodes >= options_.node_limit || Elapsed() > options_.time_limit_seconds) {
        limit_hit = true;
        break;
      }
      Node node = open.top();
      open.pop();
      if (Prunable(node.bound)) {
        pruned_bound = std::min(pruned_bound, node.bound);
        // Everything still open is at least as bad.
        while (!open.empty()) {
          pruned_bound = std::min(pruned_bound, open.top().bound);
          open.pop();
        }
        break;
      }

      ApplyBounds(node.changes);
      if (node.basis) lp_.SetBasis(*node.basis);
      OaOutcome oa =
          SolveWithOuterApproximation(lp_, program_.cones, program_.objective_offset, options_);
      ++result_.nodes;
      result_.cuts += oa.cuts;
      if (oa.status == LpStatus::kInfeasible) {
        Record(node, kInfinity, open);
        continue;
      }
      if (oa.status == LpStatus::kUnbounded) {
        if (node.depth == 0) {
          result_.status = SolveStatus::kUnbounded;
          result_.objective = -kInfinity;
          result_.message = "relaxation is unbounded";
          return Finish();
        }
        node_failed = true;
        continue;
      }
      if (oa.status != LpStatus::kOptimal) {
        node_failed = true;
        result_.message = std::string("node relaxation failed: ") + ToString(oa.status);
        continue;
      }
      const double bound = std::max(node.bound, oa.objective);
      if (node.depth == 0) root_bound_ = bound;
      if (Prunable(bound)) {
        pruned_bound = std::min(pruned_bound, bound);
        Record(node, bound, open);
        continue;
      }

      const int branch_col = SelectBranchColumn(oa.values);
      if (branch_col < 0) {
        if (oa.objective < incumbent_) {
          incumbent_ = oa.objective;
          incumbent_values_ = oa.values;
          incumbent_violation_ = oa.max_violation;
        }
        Record(node, bound, open);
        continue;
      }

      auto basis = std::make_shared<const Basis>(lp_.GetBasis());
      if (node.depth == 0 && options_.rounding_heuristic) {
        TryRounding(oa.values, *basis);
      }
      const double value = oa.values[branch_col];
      const double down = std::floor(value);
      const double up = std::ceil(value);
      for (int side = 0; side < 2; ++side) {
        Node child;
        child.id = ++next_id_;
        child.depth = node.depth + 1;
        child.bound = bound;
        child.key = Key(bound);
        child.changes = node.changes;
        const double lo = side == 0 ? CurrentLower(node.changes, branch_col) : up;
        const double hi = side == 0 ? down : CurrentUpper(node.changes, branch_col);
        child.changes.push_back({branch_col, lo, hi});
        child.basis = basis;
        open.push(std::move(child));
      }
      Record(node, bound, open);
    }

    if (!std::isfinite(incumbent_)) {
      if (limit_hit) {
        result_.status = SolveStatus::kLimit;
      } else if (node_failed) {
        result_.status = SolveStatus::kError;
      } else {
        result_.status = SolveStatus::kInfeasible;
      }
      return Finish();
    }
    double open_bound = pruned_bound;
    while (!open.empty()) {
      open_bound = std::min(open_bound, open.top().bound);
      open.pop();
    }
    result_.best_bound = std::min(incumbent_, open_bound);
    result_.status = (limit_hit || node_failed) ? SolveStatus::kLimit : SolveStatus::kOptimal;
    if (node_failed && result_.message.empty()) result_.message = "some nodes failed";
    return Finish();
  }

 private:
  double Elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  int64_t Key(double bound) const {
    if (!std::isfinite(bound)) return bound > 0 ? INT64_MAX : INT64_MIN;
    const double scale = std::max(1.0, std::abs(root_bound_));
    return static_cast<int64_t>(std::llround(bound / scale * 1e9));
  }

  bool Prunable(double bound) const {
    if (!std::isfinite(incumbent_)) return false;
    return incumbent_ - bound <= options_.mip_gap * std::max(1e-10, std::abs(incumbent_)) ||
           bound >= incumbent_;
  }

  double CurrentLower(const std::vector<BoundChange>& changes, int col) const {
    double lo = program_.col_lower[col];
    for (const BoundChange& c : changes) {
      if (c.col == col) lo = c.lower;
    }
    return lo;
  }
  double CurrentUpper(const std::vector<BoundChange>& changes, int col) const {
    double up = program_.col_upper[col];
    for (const BoundChange& c : changes) {
      if (c.col == col) up = c.upper;
    }
    return up;
  }

  void ApplyBounds(const std::vector<BoundChange>& changes) {
    for (int col : integer_cols_) {
      lp_.SetColumnBounds(col, program_.col_lower[col], program_.col_upper[col]);
    }
    for (const BoundChange& c : changes) lp_.SetColumnBounds(c.col, c.lower, c.upper);
  }

  // Most fractional integer column; ties go to the lowest index.
  int SelectBranchColumn(const std::vector<double>& x) const {
    int best = -1;
    double best_frac = options_.integrality_tolerance;
    for (int col : integer_cols_) {
      const double f = x[col] - std::floor(x[col]);
      const double frac = std::min(f, 1.0 - f);
      if (frac > best_frac) {
        best_frac = frac;
        best = col;
      }
    }
    return best;
  }

  // Fixes integers to rounded root values and solves the remaining
  // continuous program; a feasible outcome seeds the incumbent.
  void TryRounding(const std::vector<double>& root_values, const Basis& root_basis) {
    for (int mode = 0; mode < 2; ++mode) {
      for (int col : integer_cols_) {
        const double v = root_values[col];
        double fixed = mode == 0 ? std::round(v) : std::ceil(v - options_.integrality_tolerance);
        fixed = std::clamp(fixed, program_.col_lower[col], program_.col_upper[col]);
        lp_.SetColumnBounds(col, fixed, fixed);
      }
      lp_.SetBasis(root_basis);
      OaOutcome oa =
          SolveWithOuterApproximation(lp_, program_.cones, program_.objective_offset, options_);
      result_.cuts += oa.cuts;
      if (oa.status == LpStatus::kOptimal && oa.objective < incumbent_) {
        incumbent_ = oa.objective;
        incumbent_values_ = oa.values;
        incumbent_violation_ = oa.max_violation;
      }
    }
  }

  void Record(const Node& node, double node_bound, const auto& open) {
    if (!options_.record_trace) return;
    NodeEvent e;
    e.node = node.id;
    e.depth = node.depth;
    e.node_bound = node_bound;
    double best = open.empty() ? kInfinity : open.top().bound;
    best = std::min(best, std::isfinite(node_bound) ? node_bound : kInfinity);
    e.best_bound = std::min(best, incumbent_);
    e.incumbent = incumbent_;
    result_.trace.push_back(e);
  }

  SolveResult Finish() {
    result_.lp_iterations = lp_.iterations();
    if (std::isfinite(incumbent_)) {
      result_.objective = incumbent_;
      result_.values = incumbent_values_;
      for (int col : integer_cols_) {
        const double r = std::round(result_.values[col]);
        if (std::abs(result_.values[col] - r) <= options_.integrality_tolerance) {
          result_.values[col] = r + 0.0;  // no negative zero
        }
      }
      result_.max_cone_violation = incumbent_violation_;
      result_.gap = RelativeGap(incumbent_, result_.best_bound);
    }
    return std::move(result_);
  }

  const ConicProgram& program_;
  const SolverOptions& options_;
  SimplexSolver lp_;
  std::vector<int> integer_cols_;
  std::chrono::steady_clock::time_point start_;
  SolveResult result_;
  double incumbent_ = kInfinity;
  std::vector<double> incumbent_values_;
  double incumbent_violation_ = 0.0;
  double root_bound_ = 0.0;
  int64_t next_id_ = 0;
};

}  // namespace

std::vector<LinearRow> SeparateCone(const ConeRow& cone, std::span<const double> x,
                                    double tolerance) {
  std::vector<double> u(cone.members.size());
  double sq = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    u[i] = cone.members[i].Evaluate(x);
    sq += u[i] * u[i];
  }
  const double norm = std::sqrt(sq);
  const double v = cone.bound.Evaluate(x);
  if (norm - v <= tolerance * std::max(1.0, std::abs(v))) return {};

  std::vector<LinearRow> cuts;
  if (norm > 1e-12) {
    // (u0 / ||u0||) . u(x) - v(x) <= 0
    std::map<int, double> terms;
    double constant = 0.0;
    for (size_t i = 0; i < u.size(); ++i) {
      Accumulate(terms, cone.members[i], u[i] / norm, constant);
    }
    Accumulate(terms, cone.bound, -1.0, constant);
    cuts.push_back(RowFromTerms(terms, constant));
  } else {
    for (size_t i = 0; i < u.size(); ++i) {
      for (double sign : {1.0, -1.0}) {
        std::map<int, double> terms;
        double constant = 0.0;
        Accumulate(terms, cone.members[i], sign, constant);
        Accumulate(terms, cone.bound, -1.0, constant);
        cuts.push_back(RowFromTerms(terms, constant));
      }
    }
  }
  return cuts;
}

OaOutcome SolveWithOuterApproximation(SimplexSolver& lp, std::span<const ConeRow> cones,
                                      double objective_offset, const SolverOptions& options) {
  OaOutcome out;
  while (true) {
    out.status = lp.Solve();
    if (out.status != LpStatus::kOptimal) return out;
    out.values = lp.Values();
    out.objective = lp.ObjectiveValue() + objective_offset;
    out.bound_history.push_back(out.objective);
    ++out.rounds;

    std::vector<LinearRow> cuts;
    out.max_violation = 0.0;
    for (const ConeRow& cone : cones) {
      const double scale = std::max(1.0, std::abs(cone.bound.Evaluate(out.values)));
      out.max_violation = std::max(out.max_violation, cone.Violation(out.values) / scale);
      for (LinearRow& cut : SeparateCone(cone, out.values, options.oa_tolerance)) {
        cuts.push_back(std::move(cut));
      }
    }
    if (cuts.empty() || out.rounds >= options.max_oa_rounds) return out;
    for (const LinearRow& cut : cuts) lp.AddRow(cut);
    out.cuts += static_cast<int64_t>(cuts.size());
  }
}

SolveResult BranchAndBound(const ConicProgram& program, const SolverOptions& options) {
  program.Validate();
  options.Validate();
  BranchAndBoundSearch search(program, options);
  return search.Run();
}

}  // namespace iesuc::solver
