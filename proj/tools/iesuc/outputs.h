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

// Result files written by `iesuc solve` and read back by `iesuc compare`.
// Every file is tab-separated text with a header line. All files except
// timing.tsv depend only on the inputs, never on the worker count.

#ifndef IESUC_TOOLS_OUTPUTS_H_
#define IESUC_TOOLS_OUTPUTS_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "iesuc/hedging.h"

namespace iesuc::cli {

struct PhaseTimes {
  double load = 0.0;
  double formulation = 0.0;  // flow directions and scenario models
  double solve = 0.0;        // method, including the final evaluation
  int workers = 1;
};

// Shortest decimal text that reads back to the same double.
std::string Num(double v);

// Expected and worst-scenario non-served power, GWh.
struct NonServed {
  double expected_power = 0.0;
  double max_power = 0.0;
  int max_power_scenario = 0;
  double expected_gas = 0.0;
};
NonServed SummarizeNonServed(const Problem& problem, const HedgingResult& result);

// Writes commitment.tsv, dispatch_sc<k>.tsv, costs.tsv, trace.tsv (PH
// methods), audit.tsv, summary.tsv and timing.tsv into `dir`.
void WriteSolveOutputs(const std::filesystem::path& dir, const Problem& problem,
                       const HedgingResult& result, const PhOptions& ph, const PhaseTimes& times);

// key -> value pairs of a two-column file such as summary.tsv.
std::map<std::string, std::string> ReadKeyValues(const std::filesystem::path& path);

struct CompareRow {
  std::string run;
  std::string method;
  double seconds = 0.0;
  double expected_cost = 0.0;
  double gap = 0.0;  // relative to the reference run
};

// Reads the runs, checks they share an instance and computes the gap of each
// to the extensive run (or to the first run when none is extensive). Throws
// DataError on mismatched instances or unreadable runs.
std::vector<CompareRow> CompareRuns(const std::vector<std::filesystem::path>& runs,
                                    std::string* reference);
void WriteCompareTable(const std::vector<CompareRow>& rows, std::ostream& out);

}  // namespace iesuc::cli

#endif  // IESUC_TOOLS_OUTPUTS_H_
