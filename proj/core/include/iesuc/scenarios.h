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

// Wind scenarios: ARMA(1,1) forecast-error paths, k-means reduction of the
// realized speed paths, and the speed-to-power curve.

#ifndef IESUC_SCENARIOS_H_
#define IESUC_SCENARIOS_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "iesuc/network.h"

namespace iesuc {

// Rows are paths (or scenarios), columns are periods.
using Matrix = std::vector<std::vector<double>>;

struct ArmaParams {
  double alpha = 0.0;  // lag-1 error coefficient
  double beta = 0.0;   // lag-1 noise coefficient
  double sigma = 0.0;  // noise standard deviation, m/s
  uint64_t seed = 1;
};

// v(t) = alpha v(t-1) + beta xi(t-1) + xi(t), t = 1..horizon, from
// v(0) = xi(0) = 0. Path p draws from its own generator seeded by
// (seed, stream, p), so any subset of paths can be regenerated alone.
Matrix SimulateErrorPaths(const ArmaParams& params, int n_paths, int horizon, uint64_t stream = 0);

struct RealizedSpeeds {
  Matrix speeds;
  std::vector<std::vector<char>> clamped;  // 1 where forecast + error < 0
};

RealizedSpeeds ComposeRealized(const std::vector<double>& forecast, const Matrix& errors);

struct KmeansResult {
  Matrix centroids;
  std::vector<double> probabilities;  // cluster size / path count
  std::vector<int> assignment;        // cluster per path
  double cost = 0.0;                  // total within-cluster squared distance
  int iterations = 0;
};

// k-means++ seeding then Lloyd iterations until the assignment repeats or
// 300 iterations. Clusters are numbered by their lowest-index member.
KmeansResult ReduceKmeans(const Matrix& paths, int k, uint64_t seed);

// Cubic ramp between cut-in and rated speed, rated output up to cut-out.
double SpeedToPower(const WindFarm& farm, double speed);

struct Scenario {
  double probability = 0.0;
  // Available wind power per farm (same order as ScenarioSet::farms), GW.
  Matrix wind;
  bool operator==(const Scenario&) const = default;
};

struct ScenarioSet {
  std::vector<std::string> farms;
  std::vector<Scenario> scenarios;
  bool operator==(const ScenarioSet&) const = default;
};

struct ScenarioGenOptions {
  ArmaParams arma;
  int paths = 1000;
  int k = 4;
  // Every farm follows the same error path instead of its own.
  bool shared_error = false;
};

// Runs the whole pipeline for the farms in `net`, all of which need a
// forecast. Paths of all farms are clustered jointly (one point per path,
// farms concatenated).
ScenarioSet GenerateScenarios(const IesNetwork& net, const ScenarioGenOptions& options);

// A single scenario with probability 1; wind is the forecast mapped through
// the power curve, or nothing when there are no farms.
ScenarioSet ForecastScenario(const IesNetwork& net);

// Probability-weighted mean wind curve as a one-scenario set.
ScenarioSet MeanScenario(const ScenarioSet& set);

// Empty when the set is usable with `net`.
ValidationReport ValidateScenarios(const ScenarioSet& set, const IesNetwork& net);

ScenarioSet ParseScenarios(const std::string& text);
std::string SerializeScenarios(const ScenarioSet& set);
ScenarioSet LoadScenarios(const std::filesystem::path& path);
void SaveScenarios(const ScenarioSet& set, const std::filesystem::path& path);

}  // namespace iesuc

#endif  // IESUC_SCENARIOS_H_
