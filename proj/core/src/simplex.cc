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

#include "iesuc/simplex.h"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <utility>

namespace iesuc::solver {
namespace {

struct Entry {
  int row;
  double value;
};

// Column r of an elementary update matrix: the basis column at position r was
// replaced by a column whose representation in the previous basis is alpha.
struct Eta {
  int r = 0;
  double pivot = 1.0;
  std::vector<std::pair<int, double>> off;
};

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using LuFactor = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

}  // namespace

const char* ToString(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration_limit";
    case LpStatus::kNumericalFailure:
      return "numerical_failure";
  }
  return "unknown";
}

class SimplexSolver::Impl {
 public:
  Impl(const ConicProgram& program, SimplexOptions options)
      : opt_(options), n_(program.num_cols()), m_(0) {
    cols_.resize(n_);
    lower_ = program.col_lower;
    upper_ = program.col_upper;
    cost_ = program.objective;
    for (const LinearRow& row : program.rows) AppendRow(row);
    status_.assign(n_ + m_, VarStatus::kAtLower);
    x_.assign(n_ + m_, 0.0);
  }

  int num_cols() const { return n_; }
  int num_rows() const { return m_; }
  double lower(int j) const { return lower_[j]; }
  double upper(int j) const { return upper_[j]; }
  int64_t iterations() const { return iterations_; }

  void SetColumnBounds(int col, double lo, double up) {
    lower_[col] = lo;
    upper_[col] = up;
    if (has_basis_ && status_[col] != VarStatus::kBasic) PlaceNonbasic(col);
    primal_stale_ = true;
  }

  void SetObjective(std::span<const double> cost) {
    std::copy(cost.begin(), cost.end(), cost_.begin());
  }

  int AddRow(const LinearRow& row) {
    AppendRow(row);
    const int v = n_ + m_ - 1;
    status_.push_back(VarStatus::kBasic);
    double activity = 0.0;
    for (size_t k = 0; k < row.cols.size(); ++k) {
      activity += row.coefs[k] * x_[row.cols[k]];
    }
    x_.push_back(activity);
    if (has_basis_) {
      head_.push_back(v);
      pos_.push_back(m_ - 1);
    }
    factor_valid_ = false;
    return m_ - 1;
  }

  Basis GetBasis() const {
    Basis basis;
    basis.structural.assign(status_.begin(), status_.begin() + n_);
    basis.logical.assign(status_.begin() + n_, status_.end());
    return basis;
  }

  void SetBasis(const Basis& basis) {
    if (static_cast<int>(basis.structural.size()) != n_ ||
        static_cast<int>(basis.logical.size()) > m_) {
      throw SolverError("basis snapshot does not match the problem dimensions");
    }
    std::copy(basis.structural.begin(), basis.structural.end(), status_.begin());
    std::copy(basis.logical.begin(), basis.logical.end(), status_.begin() + n_);
    for (int i = static_cast<int>(basis.logical.size()); i < m_; ++i) {
      status_[n_ + i] = VarStatus::kBasic;
    }
    if (!RebuildHead()) {
      SlackBasis();
      return;
    }
    for (int v = 0; v < n_ + m_; ++v) {
      if (status_[v] != VarStatus::kBasic) PlaceNonbasic(v);
    }
    has_basis_ = true;
    factor_valid_ = false;
  }

  void ResetBasis() { has_basis_ = false; }

  std::vector<double> Values() const { return std::vector<double>(x_.begin(), x_.begin() + n_); }

  double ObjectiveValue() const {
    double value = 0.0;
    for (int j = 0; j < n_; ++j) value += cost_[j] * x_[j];
    return value;
  }

  LpStatus Solve() {
    solve_start_ = iterations_;
    const LpStatus status = SolveFromCurrentBasis();
    if (status != LpStatus::kNumericalFailure) return status;
    // A warm basis that drifted into near-singularity: start over from the
    // all-logical basis.
    SlackBasis();
    if (!Refactor()) return LpStatus::kNumericalFailure;
    ComputePrimal();
    ComputeDuals();
    return Primal();
  }

 private:
  LpStatus SolveFromCurrentBasis() {
    if (!has_basis_) SlackBasis();
    for (int v = 0; v < n_ + m_; ++v) {
      if (status_[v] != VarStatus::kBasic) PlaceNonbasic(v);
    }
    if (!Refactor()) {
      SlackBasis();
      if (!Refactor()) return LpStatus::kNumericalFailure;
    }
    ComputePrimal();
    ComputeDuals();
    if (PrimalInfeasibility() <= opt_.primal_tolerance) return Primal();
    if (DualFeasible()) {
      LpStatus status = Dual();
      if (status != LpStatus::kInfeasible) return status;
      // Confirm dual infeasibility claims with a primal phase 1.
    }
    return Primal();
  }

  void AppendRow(const LinearRow& row) {
    for (size_t k = 0; k < row.cols.size(); ++k) {
      if (row.coefs[k] != 0.0) cols_[row.cols[k]].push_back({m_, row.coefs[k]});
    }
    lower_.push_back(row.lower);
    upper_.push_back(row.upper);
    cost_.push_back(0.0);
    ++m_;
  }

  bool IsFixed(int v) const { return lower_[v] == upper_[v]; }

  // Moves a nonbasic variable onto the bound its status names, repairing the
  // status when that bound is infinite.
  void PlaceNonbasic(int v) {
    VarStatus& s = status_[v];
    const bool has_lo = std::isfinite(lower_[v]);
    const bool has_up = std::isfinite(upper_[v]);
    if (s == VarStatus::kAtLower && !has_lo) s = has_up ? VarStatus::kAtUpper : VarStatus::kFree;
    if (s == VarStatus::kAtUpper && !has_up) s = has_lo ? VarStatus::kAtLower : VarStatus::kFree;
    if (s == VarStatus::kFree && (has_lo || has_up)) {
      s = has_lo ? VarStatus::kAtLower : VarStatus::kAtUpper;
    }
    switch (s) {
      case VarStatus::kAtLower:
        x_[v] = lower_[v];
        break;
      case VarStatus::kAtUpper:
        x_[v] = upper_[v];
        break;
      case VarStatus::kFree:
        x_[v] = 0.0;
        break;
      case VarStatus::kBasic:
        break;
    }
  }

  void SlackBasis() {
    for (int j = 0; j < n_; ++j) {
      status_[j] = std::isfinite(lower_[j])   ? VarStatus::kAtLower
                   : std::isfinite(upper_[j]) ? VarStatus::kAtUpper
                                              : VarStatus::kFree;
      PlaceNonbasic(j);
    }
    for (int i = 0; i < m_; ++i) status_[n_ + i] = VarStatus::kBasic;
    RebuildHead();
    has_basis_ = true;
    factor_valid_ = false;
  }

  bool RebuildHead() {
    head_.clear();
    pos_.assign(n_ + m_, -1);
    for (int v = 0; v < n_ + m_; ++v) {
      if (status_[v] == VarStatus::kBasic) {
        pos_[v] = static_cast<int>(head_.size());
        head_.push_back(v);
      }
    }
    return static_cast<int>(head_.size()) == m_;
  }

  template <typename Fn>
  void ForColumn(int v, Fn&& fn) const {
    if (v < n_) {
      for (const Entry& e : cols_[v]) fn(e.row, e.value);
    } else {
      fn(v - n_, -1.0);
    }
  }

  double DotColumn(const Eigen::VectorXd& y, int v) const {
    if (v >= n_) return -y[v - n_];
    double s = 0.0;
    for (const Entry& e : cols_[v]) s += y[e.row] * e.value;
    return s;
  }

  bool Refactor() {
    etas_.clear();
    factor_valid_ = false;
    if (m_ == 0) {
      factor_valid_ = true;
      return true;
    }
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<size_t>(m_) * 3);
    for (int k = 0; k < m_; ++k) {
      ForColumn(head_[k], [&](int row, double value) { triplets.emplace_back(row, k, value); });
    }
    SparseMatrix basis(m_, m_);
    basis.setFromTriplets(triplets.begin(), triplets.end());
    basis.makeCompressed();
    lu_ = std::make_unique<LuFactor>();
    lu_->analyzePattern(basis);
    lu_->factorize(basis);
    if (lu_->info() != Eigen::Success) return false;
    factor_valid_ = true;
    return true;
  }

  void Ftran(Eigen::VectorXd& v) const {
    if (m_ == 0) return;
    v = lu_->solve(v);
    for (const Eta& eta : etas_) {
      const double xr = v[eta.r] / eta.pivot;
      for (const auto& [i, a] : eta.off) v[i] -= a * xr;
      v[eta.r] = xr;
    }
  }

  void Btran(Eigen::VectorXd& v) const {
    if (m_ == 0) return;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double s = v[it->r];
      for (const auto& [i, a] : it->off) s -= a * v[i];
      v[it->r] = s / it->pivot;
    }
    v = lu_->transpose().solve(v);
  }

  void PushEta(const Eigen::VectorXd& alpha, int r) {
    Eta eta;
    eta.r = r;
    eta.pivot = alpha[r];
    for (int i = 0; i < m_; ++i) {
      if (i != r && alpha[i] != 0.0) eta.off.emplace_back(i, alpha[i]);
    }
    etas_.push_back(std::move(eta));
  }

  void ComputePrimal() {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
    for (int v = 0; v < n_ + m_; ++v) {
      if (status_[v] == VarStatus::kBasic || x_[v] == 0.0) continue;
      const double xv = x_[v];
      ForColumn(v, [&](int row, double value) { rhs[row] -= value * xv; });
    }
    Ftran(rhs);
    for (int k = 0; k < m_; ++k) x_[head_[k]] = rhs[k];
    primal_stale_ = false;
  }

  // Reduced costs d = c - A^T y with y = B^{-T} c_B, for the given cost
  // vector (phase 2 uses cost_).
  void ComputeDuals(const std::vector<double>* phase_cost = nullptr) {
    const std::vector<double>& c = phase_cost ? *phase_cost : cost_;
    Eigen::VectorXd y(m_);
    for (int k = 0; k < m_; ++k) y[k] = c[head_[k]];
    Btran(y);
    d_.assign(n_ + m_, 0.0);
    for (int v = 0; v < n_ + m_; ++v) {
      if (status_[v] == VarStatus::kBasic) continue;
      d_[v] = c[v] - DotColumn(y, v);
    }
  }

  double Infeasibility(int v) const {
    if (x_[v] < lower_[v]) return lower_[v] - x_[v];
    if (x_[v] > upper_[v]) return x_[v] - upper_[v];
    return 0.0;
  }

  double PrimalInfeasibility() const {
    double worst = 0.0;
    for (int k = 0; k < m_; ++k) worst = std::max(worst, Infeasibility(head_[k]));
    return worst;
  }

  bool DualFeasible() const {
    for (int v = 0; v < n_ + m_; ++v) {
      if (status_[v] == VarStatus::kBasic || IsFixed(v)) continue;
      const double d = d_[v];
      switch (status_[v]) {
        case VarStatus::kAtLower:
          if (d < -opt_.dual_tolerance) return false;
          break;
        case VarStatus::kAtUpper:
          if (d > opt_.dual_tolerance) return false;
          break;
        case VarStatus::kFree:
          if (std::abs(d) > opt_.dual_tolerance) return false;
          break;
        case VarStatus::kBasic:
          break;
      }
    }
    return true;
  }

  // Direction a nonbasic variable can move to improve the objective given its
  // reduced cost: +1, -1, or 0 when not attractive.
  int ImprovingDirection(int v, double d) const {
    if (IsFixed(v)) return 0;
    switch (status_[v]) {
      case VarStatus::kAtLower:
        return d < -opt_.dual_tolerance ? 1 : 0;
      case VarStatus::kAtUpper:
        return d > opt_.dual_tolerance ? -1 : 0;
      case VarStatus::kFree:
        if (d < -opt_.dual_tolerance) return 1;
        if (d > opt_.dual_tolerance) return -1;
        return 0;
      case VarStatus::kBasic:
        return 0;
    }
    return 0;
  }

  bool MaybeRefactor() {
    if (static_cast<int>(etas_.size()) < opt_.refactor_interval && factor_valid_) return true;
    if (!Refactor()) return false;
    ComputePrimal();
    return true;
  }

  // Swaps entering variable q into basis position r; the leaving variable is
  // placed on `leave_bound`.
  void Pivot(int q, int r, const Eigen::VectorXd& alpha, bool leave_at_lower) {
    const int p = head_[r];
    status_[p] = leave_at_lower ? VarStatus::kAtLower : VarStatus::kAtUpper;
    x_[p] = leave_at_lower ? lower_[p] : upper_[p];
    if (IsFixed(p)) status_[p] = VarStatus::kAtLower;
    pos_[p] = -1;
    status_[q] = VarStatus::kBasic;
    head_[r] = q;
    pos_[q] = r;
    PushEta(alpha, r);
  }

  LpStatus Primal() {
    std::vector<double> phase_cost(n_ + m_, 0.0);
    Eigen::VectorXd alpha(m_);
    int degenerate_run = 0;
    bool bland = false;
    int verify_rounds = 0;
    while (true) {
      if (iterations_ - solve_start_ >= opt_.iteration_limit) return LpStatus::kIterationLimit;
      if (!MaybeRefactor()) return LpStatus::kNumericalFailure;
      if (primal_stale_) ComputePrimal();

      const double tol = opt_.primal_tolerance;
      bool phase_one = false;
      for (int k = 0; k < m_; ++k) {
        const int v = head_[k];
        if (x_[v] < lower_[v] - tol || x_[v] > upper_[v] + tol) {
          phase_one = true;
          break;
        }
      }
      if (phase_one) {
        std::fill(phase_cost.begin(), phase_cost.end(), 0.0);
        for (int k = 0; k < m_; ++k) {
          const int v = head_[k];
          if (x_[v] < lower_[v] - tol) phase_cost[v] = -1.0;
          if (x_[v] > upper_[v] + tol) phase_cost[v] = 1.0;
        }
        ComputeDuals(&phase_cost);
      } else {
        ComputeDuals();
      }

      // Pricing.
      int q = -1;
      int dir = 0;
      double best = 0.0;
      for (int v = 0; v < n_ + m_; ++v) {
        if (status_[v] == VarStatus::kBasic) continue;
        const int s = ImprovingDirection(v, d_[v]);
        if (s == 0) continue;
        if (bland) {
          q = v;
          dir = s;
          break;
        }
        if (std::abs(d_[v]) > best) {
          best = std::abs(d_[v]);
          q = v;
          dir = s;
        }
      }
      if (q < 0) {
        if (phase_one) {
          // Recheck on a fresh factorization before declaring infeasibility.
          if (!etas_.empty() && verify_rounds++ < 3) {
            factor_valid_ = false;
            continue;
          }
          return LpStatus::kInfeasible;
        }
        if (!etas_.empty() && verify_rounds++ < 3) {
          factor_valid_ = false;
          continue;
        }
        return LpStatus::kOptimal;
      }

      alpha.setZero();
      ForColumn(q, [&](int row, double value) { alpha[row] = value; });
      Ftran(alpha);

      // Ratio test, pass 1: largest step with bounds relaxed by tol.
      double theta_max = kInfinity;
      for (int k = 0; k < m_; ++k) {
        const double a = alpha[k];
        if (std::abs(a) < opt_.pivot_tolerance) continue;
        const double rate = -a * dir;
        const int v = head_[k];
        const double xv = x_[v];
        double relaxed;
        if (rate < 0) {
          double bound;
          if (xv > upper_[v] + tol) {
            bound = upper_[v];
          } else if (xv >= lower_[v] - tol) {
            bound = lower_[v];
          } else {
            continue;
          }
          if (!std::isfinite(bound)) continue;
          relaxed = (xv - bound + tol) / -rate;
        } else {
          double bound;
          if (xv < lower_[v] - tol) {
            bound = lower_[v];
          } else if (xv <= upper_[v] + tol) {
            bound = upper_[v];
          } else {
            continue;
          }
          if (!std::isfinite(bound)) continue;
          relaxed = (bound + tol - xv) / rate;
        }
        theta_max = std::min(theta_max, relaxed);
      }
      const double flip = upper_[q] - lower_[q];

      // Pass 2: among candidates within theta_max take the largest pivot.
      int r = -1;
      double step = kInfinity;
      bool leave_at_lower = true;
      double best_pivot = 0.0;
      int best_var = -1;
      for (int k = 0; k < m_ && std::isfinite(theta_max); ++k) {
        const double a = alpha[k];
        if (std::abs(a) < opt_.pivot_tolerance) continue;
        const double rate = -a * dir;
        const int v = head_[k];
        const double xv = x_[v];
        double bound;
        bool at_lower;
        if (rate < 0) {
          if (xv > upper_[v] + tol) {
            bound = upper_[v];
            at_lower = false;
          } else if (xv >= lower_[v] - tol) {
            bound = lower_[v];
            at_lower = true;
          } else {
            continue;
          }
        } else {
          if (xv < lower_[v] - tol) {
            bound = lower_[v];
            at_lower = true;
          } else if (xv <= upper_[v] + tol) {
            bound = upper_[v];
            at_lower = false;
          } else {
            continue;
          }
        }
        if (!std::isfinite(bound)) continue;
        const double ratio = std::max(0.0, (bound - xv) / rate);
        if (ratio > theta_max) continue;
        bool take;
        if (bland) {
          take = r < 0 || ratio < step - 1e-12 || (ratio <= step + 1e-12 && v < best_var);
        } else {
          take = std::abs(a) > best_pivot;
        }
        if (take) {
          r = k;
          step = ratio;
          leave_at_lower = at_lower;
          best_pivot = std::abs(a);
          best_var = v;
        }
      }

      const bool do_flip = std::isfinite(flip) && flip <= std::min(step, theta_max);
      if (r < 0 && !do_flip) {
        if (phase_one) return LpStatus::kNumericalFailure;
        return LpStatus::kUnbounded;
      }
      if (do_flip) step = flip;

      ++iterations_;
      if (step <= 1e-12) {
        if (++degenerate_run > opt_.degenerate_switch) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }

      const double delta = dir * step;
      x_[q] += delta;
      for (int k = 0; k < m_; ++k) x_[head_[k]] -= alpha[k] * delta;
      if (do_flip) {
        status_[q] = dir > 0 ? VarStatus::kAtUpper : VarStatus::kAtLower;
        x_[q] = dir > 0 ? upper_[q] : lower_[q];
        continue;
      }
      if (std::abs(alpha[r]) < 1e-11) {
        factor_valid_ = false;
        continue;
      }
      Pivot(q, r, alpha, leave_at_lower);
    }
  }

  LpStatus Dual() {
    Eigen::VectorXd rho(m_);
    Eigen::VectorXd alpha(m_);
    std::vector<double> row_alpha(n_ + m_, 0.0);
    int degenerate_run = 0;
    bool bland = false;
    int retries = 0;
    while (true) {
      if (iterations_ - solve_start_ >= opt_.iteration_limit) return LpStatus::kIterationLimit;
      if (static_cast<int>(etas_.size()) >= opt_.refactor_interval || !factor_valid_) {
        if (!Refactor()) return LpStatus::kNumericalFailure;
        ComputePrimal();
        ComputeDuals();
        if (!DualFeasible()) return Primal();
      }

      // Leaving row: largest bound violation.
      const double tol = opt_.primal_tolerance;
      int r = -1;
      double worst = tol;
      for (int k = 0; k < m_; ++k) {
        const double infeas = Infeasibility(head_[k]);
        if (infeas <= tol) continue;
        if (bland) {
          if (r < 0 || head_[k] < head_[r]) r = k;
        } else if (infeas > worst) {
          worst = infeas;
          r = k;
        }
      }
      if (r < 0) {
        // Verify on a fresh factorization.
        if (!etas_.empty()) {
          if (!Refactor()) return LpStatus::kNumericalFailure;
          ComputePrimal();
          ComputeDuals();
          if (!DualFeasible()) return Primal();
          if (PrimalInfeasibility() > tol) continue;
        }
        return LpStatus::kOptimal;
      }
      const int p = head_[r];
      const bool to_lower = x_[p] < lower_[p];
      const double delta = to_lower ? x_[p] - lower_[p] : x_[p] - upper_[p];

      rho.setZero();
      rho[r] = 1.0;
      Btran(rho);
      for (int v = 0; v < n_ + m_; ++v) {
        row_alpha[v] = status_[v] == VarStatus::kBasic ? 0.0 : DotColumn(rho, v);
      }

      // Ratio test on reduced costs (Harris two-pass).
      auto eligible = [&](int v) -> bool {
        if (status_[v] == VarStatus::kBasic || IsFixed(v)) return false;
        const double a = row_alpha[v];
        if (std::abs(a) < opt_.pivot_tolerance) return false;
        const bool positive = delta > 0;
        switch (status_[v]) {
          case VarStatus::kAtLower:
            return positive ? a > 0 : a < 0;
          case VarStatus::kAtUpper:
            return positive ? a < 0 : a > 0;
          case VarStatus::kFree:
            return true;
          case VarStatus::kBasic:
            return false;
        }
        return false;
      };
      auto slack = [&](int v) -> double {
        // Dual slack in the direction that must stay feasible.
        switch (status_[v]) {
          case VarStatus::kAtLower:
            return d_[v];
          case VarStatus::kAtUpper:
            return -d_[v];
          default:
            return 0.0;
        }
      };
      double theta_max = kInfinity;
      for (int v = 0; v < n_ + m_; ++v) {
        if (!eligible(v)) continue;
        theta_max = std::min(theta_max, (slack(v) + opt_.dual_tolerance) / std::abs(row_alpha[v]));
      }
      int q = -1;
      double best_pivot = 0.0;
      double best_ratio = kInfinity;
      for (int v = 0; v < n_ + m_ && std::isfinite(theta_max); ++v) {
        if (!eligible(v)) continue;
        const double ratio = std::max(0.0, slack(v)) / std::abs(row_alpha[v]);
        if (ratio > theta_max) continue;
        bool take;
        if (bland) {
          take = q < 0 || ratio < best_ratio - 1e-12;
        } else {
          take = std::abs(row_alpha[v]) > best_pivot;
        }
        if (take) {
          q = v;
          best_pivot = std::abs(row_alpha[v]);
          best_ratio = ratio;
        }
      }
      if (q < 0) {
        if (!etas_.empty() && retries++ < 3) {
          factor_valid_ = false;
          continue;
        }
        return LpStatus::kInfeasible;
      }

      alpha.setZero();
      ForColumn(q, [&](int row, double value) { alpha[row] = value; });
      Ftran(alpha);
      const double a_rq = row_alpha[q];
      if (std::abs(alpha[r] - a_rq) > 1e-7 * (1.0 + std::abs(a_rq)) || std::abs(alpha[r]) < 1e-11) {
        if (retries++ < 5) {
          factor_valid_ = false;
          continue;
        }
        return LpStatus::kNumericalFailure;
      }

      ++iterations_;
      const double theta_dual = d_[q] / alpha[r];
      if (std::abs(theta_dual) <= 1e-12) {
        if (++degenerate_run > opt_.degenerate_switch) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
      for (int v = 0; v < n_ + m_; ++v) {
        if (status_[v] != VarStatus::kBasic) d_[v] -= theta_dual * row_alpha[v];
      }
      d_[q] = 0.0;
      d_[p] = -theta_dual;

      const double step = delta / alpha[r];
      x_[q] += step;
      for (int k = 0; k < m_; ++k) x_[head_[k]] -= alpha[k] * step;
      Pivot(q, r, alpha, to_lower);
    }
  }

  SimplexOptions opt_;
  int n_;
  int m_;
  std::vector<std::vector<Entry>> cols_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> cost_;
  std::vector<VarStatus> status_;
  std::vector<double> x_;
  std::vector<double> d_;
  std::vector<int> head_;
  std::vector<int> pos_;
  std::unique_ptr<LuFactor> lu_;
  std::vector<Eta> etas_;
  bool has_basis_ = false;
  bool factor_valid_ = false;
  bool primal_stale_ = true;
  int64_t iterations_ = 0;
  int64_t solve_start_ = 0;  // iterations_ when the current Solve began
};

SimplexSolver::SimplexSolver(const ConicProgram& program, SimplexOptions options)
    : impl_(std::make_unique<Impl>(program, options)) {}
SimplexSolver::~SimplexSolver() = default;
SimplexSolver::SimplexSolver(SimplexSolver&&) noexcept = default;
SimplexSolver& SimplexSolver::operator=(SimplexSolver&&) noexcept = default;

int SimplexSolver::num_cols() const { return impl_->num_cols(); }
int SimplexSolver::num_rows() const { return impl_->num_rows(); }
void SimplexSolver::SetColumnBounds(int col, double lower, double upper) {
  impl_->SetColumnBounds(col, lower, upper);
}
double SimplexSolver::column_lower(int col) const { return impl_->lower(col); }
double SimplexSolver::column_upper(int col) const { return impl_->upper(col); }
void SimplexSolver::SetObjective(std::span<const double> cost) { impl_->SetObjective(cost); }
int SimplexSolver::AddRow(const LinearRow& row) { return impl_->AddRow(row); }
LpStatus SimplexSolver::Solve() { return impl_->Solve(); }
Basis SimplexSolver::GetBasis() const { return impl_->GetBasis(); }
void SimplexSolver::SetBasis(const Basis& basis) { impl_->SetBasis(basis); }
void SimplexSolver::ResetBasis() { impl_->ResetBasis(); }
std::vector<double> SimplexSolver::Values() const { return impl_->Values(); }
double SimplexSolver::ObjectiveValue() const { return impl_->ObjectiveValue(); }
int64_t SimplexSolver::iterations() const { return impl_->iterations(); }

SolveResult SolveLp(const ConicProgram& program, SimplexOptions options) {
  SimplexSolver lp(program, options);
  SolveResult result;
  const LpStatus status = lp.Solve();
  result.lp_iterations = lp.iterations();
  switch (status) {
    case LpStatus::kOptimal:
      result.status = SolveStatus::kOptimal;
      result.values = lp.Values();
      result.objective = lp.ObjectiveValue() + program.objective_offset;
      result.best_bound = result.objective;
      result.gap = 0.0;
      break;
    case LpStatus::kInfeasible:
      result.status = SolveStatus::kInfeasible;
      break;
    case LpStatus::kUnbounded:
      result.status = SolveStatus::kUnbounded;
      result.objective = -kInfinity;
      break;
    case LpStatus::kIterationLimit:
      result.status = SolveStatus::kLimit;
      break;
    case LpStatus::kNumericalFailure:
      result.status = SolveStatus::kError;
      result.message = "numerical failure in the simplex";
      break;
  }
  return result;
}

}  // namespace iesuc::solver
