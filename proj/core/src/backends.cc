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

#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "iesuc/solver.h"

namespace iesuc::solver {
namespace {

std::string Quote(const std::string& s) {
  std::string out = "'";
  for (char ch : s) {
    if (ch == '\'') {
      out += "'\\''";
    } else {
      out += ch;
    }
  }
  return out + "'";
}

// Writes the program, runs the adapter, and reads its solution file.
SolveResult SolveExternal(const ConicProgram& program, const SolverOptions& options) {
  if (options.external_command.empty()) {
    throw SolverError("backend 'external' needs SolverOptions::external_command");
  }
  static std::atomic<int> counter{0};
  const auto dir = std::filesystem::temp_directory_path();
  const std::string stem = "iesuc_" + std::to_string(::getpid()) + "_" + std::to_string(counter++);
  const auto program_path = dir / (stem + ".prog");
  const auto solution_path = dir / (stem + ".sol");
  {
    std::ofstream out(program_path);
    if (!out) throw SolverError("cannot write " + program_path.string());
    WriteProgram(program, out);
  }
  const std::string command = options.external_command + " " + Quote(program_path.string()) + " " +
                              Quote(solution_path.string());
  const int rc = std::system(command.c_str());
  std::filesystem::remove(program_path);
  if (rc != 0) {
    std::filesystem::remove(solution_path);
    throw SolverError("external solver command failed with status " + std::to_string(rc));
  }
  std::ifstream in(solution_path);
  if (!in) throw SolverError("external solver wrote no solution file");
  SolveResult result = ReadSolution(in);
  in.close();
  std::filesystem::remove(solution_path);
  if (result.status == SolveStatus::kOptimal &&
      static_cast<int>(result.values.size()) != program.num_cols()) {
    throw SolverError("external solution has the wrong number of values");
  }
  return result;
}

}  // namespace

std::vector<std::string> AvailableBackends() { return {"embedded", "external"}; }

SolveResult Solve(const ConicProgram& program, const SolverOptions& options,
                  const std::string& backend) {
  if (backend == "embedded") return BranchAndBound(program, options);
  if (backend == "external") return SolveExternal(program, options);
  std::string names;
  for (const std::string& name : AvailableBackends()) {
    names += names.empty() ? name : ", " + name;
  }
  throw SolverError("unknown backend '" + backend + "' (available: " + names + ")");
}

}  // namespace iesuc::solver
