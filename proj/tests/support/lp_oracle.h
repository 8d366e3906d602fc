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

// Test-only brute-force oracles. They share nothing with the simplex: a
// bounded LP optimum is found by enumerating every vertex (n active
// constraints chosen among rows and bounds, solved by dense Gaussian
// elimination).

#ifndef IESUC_TESTS_SUPPORT_LP_ORACLE_H_
#define IESUC_TESTS_SUPPORT_LP_ORACLE_H_

#include <cmath>
#include <optional>
#include <vector>

#include "iesuc/conic_program.h"

namespace iesuc::testing {

// Solves the n x n system in place; returns false when (near) singular.
inline bool GaussSolve(std::vector<std::vector<double>> a, std::vector<double> b,
                       std::vector<double>& x) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    if (std::abs(a[piv][col]) < 1e-10) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  x.resize(n);
  for (int i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return true;
}

// Minimum of a bounded LP (all columns boxed) by vertex enumeration, or
// nullopt when infeasible. Cones and integrality are ignored.
inline std::optional<double> VertexEnumerationOptimum(const solver::ConicProgram& p) {
  const int n = p.num_cols();
  // Candidate hyperplanes: (coefficients, rhs).
  std::vector<std::pair<std::vector<double>, double>> planes;
  for (int j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    planes.push_back({e, p.col_lower[j]});
    planes.push_back({e, p.col_upper[j]});
  }
  for (const solver::LinearRow& row : p.rows) {
    std::vector<double> a(n, 0.0);
    for (size_t k = 0; k < row.cols.size(); ++k) a[row.cols[k]] += row.coefs[k];
    if (std::isfinite(row.lower)) planes.push_back({a, row.lower});
    if (std::isfinite(row.upper)) planes.push_back({a, row.upper});
  }
  const int count = static_cast<int>(planes.size());
  std::optional<double> best;
  std::vector<int> pick(n);
  // Iterate over all n-subsets of the planes.
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  if (n > count) return std::nullopt;
  while (true) {
    std::vector<std::vector<double>> a(n);
    std::vector<double> b(n);
    for (int i = 0; i < n; ++i) {
      a[i] = planes[idx[i]].first;
      b[i] = planes[idx[i]].second;
    }
    std::vector<double> x;
    if (GaussSolve(a, b, x)) {
      bool feasible = true;
      for (int j = 0; j < n && feasible; ++j) {
        feasible = x[j] >= p.col_lower[j] - 1e-7 && x[j] <= p.col_upper[j] + 1e-7;
      }
      for (const solver::LinearRow& row : p.rows) {
        if (!feasible) break;
        const double act = row.Activity(x);
        feasible = act >= row.lower - 1e-7 && act <= row.upper + 1e-7;
      }
      if (feasible) {
        const double obj = p.ObjectiveValue(x);
        if (!best || obj < *best) best = obj;
      }
    }
    int k = n - 1;
    while (k >= 0 && idx[k] == count - n + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int i = k + 1; i < n; ++i) idx[i] = idx[i - 1] + 1;
  }
  return best;
}

}  // namespace iesuc::testing

#endif  // IESUC_TESTS_SUPPORT_LP_ORACLE_H_
