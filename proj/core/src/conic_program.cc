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

#include "iesuc/conic_program.h"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace iesuc::solver {
namespace {

// Shortest text that parses back to the same double.
std::string Num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

double ParseNum(const std::string& token) {
  if (token == "inf") return kInfinity;
  if (token == "-inf") return -kInfinity;
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    throw SolverError("malformed number '" + token + "'");
  }
  if (used != token.size()) throw SolverError("malformed number '" + token + "'");
  return v;
}

std::string Tag(const std::string& tag) { return tag.empty() ? "-" : tag; }
std::string Untag(const std::string& tag) { return tag == "-" ? std::string() : tag; }

void WriteAffine(const AffineExpr& e, std::ostream& out) {
  out << ' ' << Num(e.constant) << ' ' << e.cols.size();
  for (size_t k = 0; k < e.cols.size(); ++k) out << ' ' << e.cols[k] << ':' << Num(e.coefs[k]);
}

class Tokens {
 public:
  explicit Tokens(std::istream& in) : in_(in) {}

  std::string Next() {
    std::string token;
    while (in_ >> token) {
      if (token[0] == '#') {
        std::string rest;
        std::getline(in_, rest);
        continue;
      }
      return token;
    }
    throw SolverError("unexpected end of input");
  }
  void Expect(const std::string& keyword) {
    const std::string token = Next();
    if (token != keyword) throw SolverError("expected '" + keyword + "', found '" + token + "'");
  }
  double Number() { return ParseNum(Next()); }
  long Integer() {
    const double v = Number();
    if (v != std::floor(v)) throw SolverError("expected an integer");
    return static_cast<long>(v);
  }
  std::pair<int, double> Term() {
    const std::string token = Next();
    const auto colon = token.find(':');
    if (colon == std::string::npos) throw SolverError("malformed term '" + token + "'");
    return {static_cast<int>(ParseNum(token.substr(0, colon))), ParseNum(token.substr(colon + 1))};
  }
  AffineExpr Affine() {
    AffineExpr e;
    e.constant = Number();
    const long count = Integer();
    for (long k = 0; k < count; ++k) {
      const auto [col, coef] = Term();
      e.Add(col, coef);
    }
    return e;
  }

 private:
  std::istream& in_;
};

}  // namespace

double AffineExpr::Evaluate(std::span<const double> x) const {
  double s = constant;
  for (size_t k = 0; k < cols.size(); ++k) s += coefs[k] * x[cols[k]];
  return s;
}

double LinearRow::Activity(std::span<const double> x) const {
  double s = 0.0;
  for (size_t k = 0; k < cols.size(); ++k) s += coefs[k] * x[cols[k]];
  return s;
}

double ConeRow::Violation(std::span<const double> x) const {
  double sq = 0.0;
  for (const AffineExpr& m : members) {
    const double u = m.Evaluate(x);
    sq += u * u;
  }
  return std::sqrt(sq) - bound.Evaluate(x);
}

int ConicProgram::AddColumn(double lower, double upper, double cost, bool integer,
                            std::string name) {
  col_lower.push_back(lower);
  col_upper.push_back(upper);
  objective.push_back(cost);
  is_integer.push_back(integer ? 1 : 0);
  col_names.push_back(std::move(name));
  return num_cols() - 1;
}

int ConicProgram::AddRow(LinearRow row) {
  rows.push_back(std::move(row));
  return num_rows() - 1;
}

int ConicProgram::AddCone(ConeRow cone) {
  cones.push_back(std::move(cone));
  return static_cast<int>(cones.size()) - 1;
}

double ConicProgram::ObjectiveValue(std::span<const double> x) const {
  double s = objective_offset;
  for (int j = 0; j < num_cols(); ++j) s += objective[j] * x[j];
  return s;
}

void ConicProgram::Validate() const {
  const size_t n = objective.size();
  if (col_lower.size() != n || col_upper.size() != n || is_integer.size() != n) {
    throw SolverError("column arrays have inconsistent sizes");
  }
  for (size_t j = 0; j < n; ++j) {
    if (col_lower[j] > col_upper[j]) {
      throw SolverError("column " + std::to_string(j) + " has lower bound above upper bound");
    }
    if (is_integer[j] && (!std::isfinite(col_lower[j]) || !std::isfinite(col_upper[j]))) {
      throw SolverError("integer column " + std::to_string(j) + " needs finite bounds");
    }
  }
  auto check_cols = [n](const std::vector<int>& cols, const std::vector<double>& coefs,
                        const std::string& what) {
    if (cols.size() != coefs.size()) throw SolverError(what + " has mismatched term arrays");
    for (int c : cols) {
      if (c < 0 || static_cast<size_t>(c) >= n) {
        throw SolverError(what + " references unknown column " + std::to_string(c));
      }
    }
  };
  for (size_t i = 0; i < rows.size(); ++i) {
    check_cols(rows[i].cols, rows[i].coefs, "row " + std::to_string(i));
    if (rows[i].lower > rows[i].upper) {
      throw SolverError("row " + std::to_string(i) + " has lower bound above upper bound");
    }
  }
  for (size_t k = 0; k < cones.size(); ++k) {
    const std::string what = "cone " + std::to_string(k);
    if (cones[k].members.size() < 2) throw SolverError(what + " has fewer than two members");
    for (const AffineExpr& m : cones[k].members) check_cols(m.cols, m.coefs, what);
    check_cols(cones[k].bound.cols, cones[k].bound.coefs, what);
  }
}

const char* ToString(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kUnbounded:
      return "unbounded";
    case SolveStatus::kLimit:
      return "limit";
    case SolveStatus::kError:
      return "error";
  }
  return "error";
}

SolveStatus SolveStatusFromString(const std::string& text) {
  for (SolveStatus s : {SolveStatus::kOptimal, SolveStatus::kInfeasible, SolveStatus::kUnbounded,
                        SolveStatus::kLimit, SolveStatus::kError}) {
    if (text == ToString(s)) return s;
  }
  throw SolverError("unknown solve status '" + text + "'");
}

void SolverOptions::Validate() const {
  if (!(mip_gap > 0) || !(oa_tolerance > 0) || !(integrality_tolerance > 0)) {
    throw SolverError("solver tolerances must be positive");
  }
  if (max_oa_rounds < 1 || node_limit < 1 || !(time_limit_seconds > 0)) {
    throw SolverError("solver limits must be positive");
  }
  if (branching_rule != "most_fractional") {
    throw SolverError("unknown branching rule '" + branching_rule +
                      "' (available: most_fractional)");
  }
}

void WriteProgram(const ConicProgram& program, std::ostream& out) {
  out << "# iesuc conic program v1\n";
  out << "columns " << program.num_cols() << '\n';
  for (int j = 0; j < program.num_cols(); ++j) {
    const std::string name =
        j < static_cast<int>(program.col_names.size()) ? program.col_names[j] : std::string();
    out << "c " << j << ' ' << Num(program.col_lower[j]) << ' ' << Num(program.col_upper[j]) << ' '
        << Num(program.objective[j]) << ' ' << (program.is_integer[j] ? 'I' : 'C') << ' '
        << Tag(name) << '\n';
  }
  out << "offset " << Num(program.objective_offset) << '\n';
  out << "rows " << program.num_rows() << '\n';
  for (int i = 0; i < program.num_rows(); ++i) {
    const LinearRow& row = program.rows[i];
    out << "r " << i << ' ' << Tag(row.tag) << ' ' << Num(row.lower) << ' ' << Num(row.upper) << ' '
        << row.cols.size();
    for (size_t k = 0; k < row.cols.size(); ++k)
      out << ' ' << row.cols[k] << ':' << Num(row.coefs[k]);
    out << '\n';
  }
  out << "cones " << program.cones.size() << '\n';
  for (size_t k = 0; k < program.cones.size(); ++k) {
    const ConeRow& cone = program.cones[k];
    out << "k " << k << ' ' << Tag(cone.tag) << ' ' << cone.members.size();
    for (const AffineExpr& m : cone.members) WriteAffine(m, out);
    out << " |";
    WriteAffine(cone.bound, out);
    out << '\n';
  }
  out << "end\n";
}

ConicProgram ReadProgram(std::istream& in) {
  Tokens tok(in);
  ConicProgram program;
  tok.Expect("columns");
  const long n = tok.Integer();
  for (long j = 0; j < n; ++j) {
    tok.Expect("c");
    if (tok.Integer() != j) throw SolverError("columns out of order");
    const double lo = tok.Number();
    const double up = tok.Number();
    const double cost = tok.Number();
    const std::string kind = tok.Next();
    if (kind != "I" && kind != "C") throw SolverError("column kind must be I or C");
    program.AddColumn(lo, up, cost, kind == "I", Untag(tok.Next()));
  }
  tok.Expect("offset");
  program.objective_offset = tok.Number();
  tok.Expect("rows");
  const long m = tok.Integer();
  for (long i = 0; i < m; ++i) {
    tok.Expect("r");
    if (tok.Integer() != i) throw SolverError("rows out of order");
    LinearRow row;
    row.tag = Untag(tok.Next());
    row.lower = tok.Number();
    row.upper = tok.Number();
    const long count = tok.Integer();
    for (long k = 0; k < count; ++k) {
      const auto [col, coef] = tok.Term();
      row.Add(col, coef);
    }
    program.AddRow(std::move(row));
  }
  tok.Expect("cones");
  const long num_cones = tok.Integer();
  for (long k = 0; k < num_cones; ++k) {
    tok.Expect("k");
    if (tok.Integer() != k) throw SolverError("cones out of order");
    ConeRow cone;
    cone.tag = Untag(tok.Next());
    const long members = tok.Integer();
    for (long i = 0; i < members; ++i) cone.members.push_back(tok.Affine());
    tok.Expect("|");
    cone.bound = tok.Affine();
    program.AddCone(std::move(cone));
  }
  tok.Expect("end");
  program.Validate();
  return program;
}

void WriteSolution(const SolveResult& result, std::ostream& out) {
  out << "# iesuc solution v1\n";
  out << "status " << ToString(result.status) << '\n';
  out << "objective " << Num(result.objective) << '\n';
  out << "bound " << Num(result.best_bound) << '\n';
  out << "nodes " << result.nodes << '\n';
  out << "values " << result.values.size() << '\n';
  for (size_t j = 0; j < result.values.size(); ++j)
    out << j << ' ' << Num(result.values[j]) << '\n';
  out << "end\n";
}

SolveResult ReadSolution(std::istream& in) {
  Tokens tok(in);
  SolveResult result;
  tok.Expect("status");
  result.status = SolveStatusFromString(tok.Next());
  tok.Expect("objective");
  result.objective = tok.Number();
  tok.Expect("bound");
  result.best_bound = tok.Number();
  tok.Expect("nodes");
  result.nodes = tok.Integer();
  tok.Expect("values");
  const long n = tok.Integer();
  result.values.resize(n);
  for (long j = 0; j < n; ++j) {
    if (tok.Integer() != j) throw SolverError("solution values out of order");
    result.values[j] = tok.Number();
  }
  tok.Expect("end");
  if (std::isfinite(result.objective) && std::isfinite(result.best_bound)) {
    result.gap = std::abs(result.objective - result.best_bound) /
                 std::max(1e-10, std::abs(result.objective));
  }
  return result;
}

void WriteTrace(std::span<const NodeEvent> trace, std::ostream& out) {
  out << "node\tdepth\tnode_bound\tbest_bound\tincumbent\n";
  for (const NodeEvent& e : trace) {
    out << e.node << '\t' << e.depth << '\t' << Num(e.node_bound) << '\t' << Num(e.best_bound)
        << '\t' << Num(e.incumbent) << '\n';
  }
}

}  // namespace iesuc::solver
