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

#include "iesuc/scenarios.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

namespace iesuc {
namespace {

double SampleVariance(const std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s / (v.size() - 1);
}

std::vector<double> Column(const Matrix& m, int t) {
  std::vector<double> out;
  for (const auto& row : m) out.push_back(row[t]);
  return out;
}

TEST(ArmaTest, DegenerateParametersGiveZeroPaths) {
  const Matrix m = SimulateErrorPaths({0.0, 0.0, 0.0, 5}, 10, 24);
  for (const auto& row : m) {
    for (double v : row) EXPECT_EQ(v, 0.0);
  }
}

TEST(ArmaTest, AutoregressiveStationaryVariance) {
  const Matrix m = SimulateErrorPaths({0.5, 0.0, 1.0, 42}, 10000, 24);
  EXPECT_NEAR(SampleVariance(Column(m, 23)) / (4.0 / 3.0), 1.0, 0.05);
}

TEST(ArmaTest, RecursionHoldsOnEveryPath) {
  // Recover xi from the path and check it has the configured scale.
  const ArmaParams p{0.6, 0.3, 0.8, 9};
  const Matrix m = SimulateErrorPaths(p, 2000, 24);
  std::vector<double> xi_all;
  for (const auto& row : m) {
    double v_prev = 0.0, xi_prev = 0.0;
    for (double v : row) {
      const double xi = v - p.alpha * v_prev - p.beta * xi_prev;
      xi_all.push_back(xi);
      v_prev = v;
      xi_prev = xi;
    }
  }
  EXPECT_NEAR(std::sqrt(SampleVariance(xi_all)), 0.8, 0.02);
}

TEST(ArmaTest, MeanWithinThreeStandardErrors) {
  const ArmaParams p{0.7, 0.2, 1.5, 3};
  const int n = 10000;
  const Matrix m = SimulateErrorPaths(p, n, 24);
  for (int t = 0; t < 24; ++t) {
    const auto col = Column(m, t);
    const double mean = std::accumulate(col.begin(), col.end(), 0.0) / n;
    EXPECT_LE(std::abs(mean), 3.0 * std::sqrt(SampleVariance(col) / n)) << "t=" << t;
  }
}

TEST(ArmaTest, SeededRunsAreReproducible) {
  const ArmaParams p{0.5, 0.4, 1.0, 77};
  EXPECT_EQ(SimulateErrorPaths(p, 50, 24), SimulateErrorPaths(p, 50, 24));
  ArmaParams q = p;
  q.seed = 78;
  EXPECT_NE(SimulateErrorPaths(p, 50, 24), SimulateErrorPaths(q, 50, 24));
  // A path does not depend on how many paths are drawn.
  EXPECT_EQ(SimulateErrorPaths(p, 50, 24)[7], SimulateErrorPaths(p, 8, 24)[7]);
}

TEST(ArmaTest, NonStationaryAlphaIsRejected) {
  EXPECT_THROW(SimulateErrorPaths({1.0, 0.0, 1.0, 1}, 1, 24), DataError);
  EXPECT_THROW(SimulateErrorPaths({-1.2, 0.0, 1.0, 1}, 1, 24), DataError);
}

TEST(ComposeTest, AddsAndClamps) {
  const std::vector<double> forecast = {3.0, 8.0, 5.0};
  const RealizedSpeeds zero = ComposeRealized(forecast, {{0.0, 0.0, 0.0}});
  EXPECT_EQ(zero.speeds[0], forecast);
  const RealizedSpeeds r = ComposeRealized(forecast, {{-5.0, 1.5, 0.0}});
  EXPECT_EQ(r.speeds[0][0], 0.0);
  EXPECT_EQ(r.clamped[0][0], 1);
  EXPECT_EQ(r.speeds[0][1], 9.5);
  EXPECT_EQ(r.clamped[0][1], 0);
  EXPECT_THROW(ComposeRealized(forecast, {{1.0}}), DataError);
}

TEST(KmeansTest, SingleClusterIsTheMean) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> d(8.0, 2.0);
  Matrix paths(37, std::vector<double>(24));
  for (auto& row : paths) {
    for (double& v : row) v = d(rng);
  }
  const KmeansResult r = ReduceKmeans(paths, 1, 5);
  ASSERT_EQ(r.centroids.size(), 1u);
  EXPECT_EQ(r.probabilities[0], 1.0);
  for (int t = 0; t < 24; ++t) {
    double mean = 0.0;
    for (const auto& row : paths) mean += row[t];
    EXPECT_NEAR(r.centroids[0][t], mean / paths.size(), 1e-12);
  }
  const Matrix same(5, paths[0]);
  EXPECT_EQ(ReduceKmeans(same, 1, 5).centroids[0], paths[0]);
}

TEST(KmeansTest, SeparatedGroupsMatchBestPartition) {
  Matrix paths = {{1.0, 1.1}, {1.2, 0.9}, {0.8, 1.0}, {1.1, 1.2}, {9.0, 9.5}, {9.4, 9.1}};
  const KmeansResult r = ReduceKmeans(paths, 2, 3);
  EXPECT_NEAR(r.probabilities[0], 4.0 / 6.0, 1e-15);
  EXPECT_NEAR(r.probabilities[1], 2.0 / 6.0, 1e-15);
  // Exhaustive search over all 2-partitions.
  double best = std::numeric_limits<double>::infinity();
  for (int mask = 1; mask < 63; ++mask) {
    double cost = 0.0;
    for (int side = 0; side < 2; ++side) {
      std::vector<double> c(2, 0.0);
      int count = 0;
      for (int p = 0; p < 6; ++p) {
        if (((mask >> p) & 1) == side) {
          c[0] += paths[p][0];
          c[1] += paths[p][1];
          ++count;
        }
      }
      for (int p = 0; p < 6; ++p) {
        if (((mask >> p) & 1) == side) {
          cost += std::pow(paths[p][0] - c[0] / count, 2) + std::pow(paths[p][1] - c[1] / count, 2);
        }
      }
    }
    best = std::min(best, cost);
  }
  EXPECT_LE(r.cost, best + 1e-12);
}

TEST(KmeansTest, NeverWorseThanRandomAssignment) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> d(0.0, 15.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 10 + trial % 20;
    const int k = 1 + trial % 5;
    Matrix paths(n, std::vector<double>(6));
    for (auto& row : paths) {
      for (double& v : row) v = d(rng);
    }
    const KmeansResult r = ReduceKmeans(paths, k, trial);
    double total = 0.0;
    for (double p : r.probabilities) total += p;
    EXPECT_NEAR(total, 1.0, 1e-9);
    // Random assignment using every cluster, with its own centroids.
    std::vector<int> a(n);
    for (int p = 0; p < n; ++p) a[p] = p < k ? p : static_cast<int>(rng() % k);
    Matrix c(k, std::vector<double>(6, 0.0));
    std::vector<int> size(k, 0);
    for (int p = 0; p < n; ++p) {
      ++size[a[p]];
      for (int t = 0; t < 6; ++t) c[a[p]][t] += paths[p][t];
    }
    double random_cost = 0.0;
    for (int p = 0; p < n; ++p) {
      for (int t = 0; t < 6; ++t) random_cost += std::pow(paths[p][t] - c[a[p]][t] / size[a[p]], 2);
    }
    EXPECT_LE(r.cost, random_cost + 1e-9);
  }
}

TEST(KmeansTest, TooManyClusters) {
  const Matrix paths = {{1.0}, {2.0}, {2.0}};
  EXPECT_THROW(ReduceKmeans(paths, 4, 1), DataError);
  EXPECT_THROW(ReduceKmeans(paths, 3, 1), DataError);
  EXPECT_NO_THROW(ReduceKmeans(paths, 2, 1));
}

TEST(PowerCurveTest, Shape) {
  WindFarm farm;
  farm.capacity = 0.3;
  farm.cut_in = 3.0;
  farm.rated_speed = 12.0;
  farm.cut_out = 25.0;
  EXPECT_EQ(SpeedToPower(farm, 0.0), 0.0);
  EXPECT_EQ(SpeedToPower(farm, 12.0), 0.3);
  EXPECT_EQ(SpeedToPower(farm, 26.0), 0.0);
  EXPECT_EQ(SpeedToPower(farm, 25.0), 0.0);
  EXPECT_NEAR(SpeedToPower(farm, 8.0), 0.3 * (512.0 - 27.0) / (1728.0 - 27.0), 1e-15);
  double prev = 0.0;
  for (double v = 0.0; v < 25.0; v += 0.01) {
    const double p = SpeedToPower(farm, v);
    EXPECT_GE(p, prev);
    EXPECT_LE(p, farm.capacity);
    prev = p;
  }
}

TEST(ScenarioSetTest, GenerationIsReproducibleAndValid) {
  IesNetwork net;
  for (int f = 0; f < 2; ++f) {
    WindFarm w;
    w.id = "W" + std::to_string(f + 1);
    w.capacity = 0.2;
    w.forecast.assign(24, 7.0 + f);
    net.wind_farms.push_back(w);
  }
  ScenarioGenOptions opt;
  opt.arma = {0.8, 0.1, 1.2, 11};
  opt.paths = 300;
  opt.k = 3;
  const ScenarioSet a = GenerateScenarios(net, opt);
  const ScenarioSet b = GenerateScenarios(net, opt);
  EXPECT_EQ(SerializeScenarios(a), SerializeScenarios(b));
  EXPECT_TRUE(ValidateScenarios(a, net).empty()) << FormatReport(ValidateScenarios(a, net));
  EXPECT_EQ(ParseScenarios(SerializeScenarios(a)), a);
  ASSERT_EQ(a.scenarios.size(), 3u);

  opt.k = 1;
  const ScenarioSet one = GenerateScenarios(net, opt);
  ASSERT_EQ(one.scenarios.size(), 1u);
  EXPECT_EQ(one.scenarios[0].probability, 1.0);

  opt.shared_error = true;
  opt.k = 2;
  EXPECT_NE(GenerateScenarios(net, opt), a);
  opt.k = 400;
  EXPECT_THROW(GenerateScenarios(net, opt), DataError);
}

TEST(ScenarioSetTest, MeanScenarioWeightsByProbability) {
  ScenarioSet set;
  set.farms = {"W1"};
  set.scenarios.push_back({0.25, {{0.4, 0.0}}});
  set.scenarios.push_back({0.75, {{0.0, 0.2}}});
  const ScenarioSet mean = MeanScenario(set);
  ASSERT_EQ(mean.scenarios.size(), 1u);
  EXPECT_DOUBLE_EQ(mean.scenarios[0].wind[0][0], 0.1);
  EXPECT_DOUBLE_EQ(mean.scenarios[0].wind[0][1], 0.15);
}

TEST(ScenarioSetTest, ValidationCatchesBadProbabilities) {
  IesNetwork net;
  net.horizon = 2;
  WindFarm w;
  w.id = "W1";
  w.capacity = 0.5;
  net.wind_farms.push_back(w);
  ScenarioSet set;
  set.farms = {"W1"};
  set.scenarios.push_back({0.6, {{0.1, 0.2}}});
  set.scenarios.push_back({0.3, {{0.1, 0.9}}});
  const ValidationReport r = ValidateScenarios(set, net);
  EXPECT_EQ(r.size(), 2u) << FormatReport(r);
}

}  // namespace
}  // namespace iesuc
