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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

namespace iesuc {
namespace {

using nlohmann::json;

constexpr int kMaxLloydIterations = 300;

double SquaredDistance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    d += diff * diff;
  }
  return d;
}

int Nearest(const std::vector<double>& x, const Matrix& centroids, double* dist) {
  int best = 0;
  double best_d = SquaredDistance(x, centroids[0]);
  for (size_t c = 1; c < centroids.size(); ++c) {
    const double d = SquaredDistance(x, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  if (dist) *dist = best_d;
  return best;
}

Matrix SeedPlusPlus(const Matrix& paths, int k, std::mt19937_64& rng) {
  const int n = static_cast<int>(paths.size());
  Matrix centroids;
  centroids.push_back(paths[std::uniform_int_distribution<int>(0, n - 1)(rng)]);
  std::vector<double> d2(n);
  while (static_cast<int>(centroids.size()) < k) {
    double total = 0.0;
    for (int p = 0; p < n; ++p) {
      Nearest(paths[p], centroids, &d2[p]);
      total += d2[p];
    }
    const double r = std::uniform_real_distribution<double>(0.0, total)(rng);
    double acc = 0.0;
    int pick = -1;
    for (int p = 0; p < n; ++p) {
      if (d2[p] <= 0.0) continue;
      pick = p;
      acc += d2[p];
      if (acc > r) break;
    }
    centroids.push_back(paths[pick]);
  }
  return centroids;
}

}  // namespace

Matrix SimulateErrorPaths(const ArmaParams& params, int n_paths, int horizon, uint64_t stream) {
  if (!(std::abs(params.alpha) < 1.0)) {
    throw DataError("ARMA alpha must satisfy |alpha| < 1 (stationarity)");
  }
  if (!(params.sigma >= 0.0)) throw DataError("ARMA sigma must be non-negative");
  if (n_paths < 1) throw DataError("need at least one path");
  if (horizon < 1) throw DataError("horizon must be positive");
  Matrix out(n_paths, std::vector<double>(horizon, 0.0));
  for (int p = 0; p < n_paths; ++p) {
    std::seed_seq seq{static_cast<uint32_t>(params.seed), static_cast<uint32_t>(params.seed >> 32),
                      static_cast<uint32_t>(stream), static_cast<uint32_t>(p)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> noise(0.0, 1.0);
    double v_prev = 0.0;
    double xi_prev = 0.0;
    for (int t = 0; t < horizon; ++t) {
      const double xi = params.sigma * noise(rng);
      const double v = params.alpha * v_prev + params.beta * xi_prev + xi;
      out[p][t] = v;
      v_prev = v;
      xi_prev = xi;
    }
  }
  return out;
}

RealizedSpeeds ComposeRealized(const std::vector<double>& forecast, const Matrix& errors) {
  RealizedSpeeds r;
  for (const auto& path : errors) {
    if (path.size() != forecast.size()) throw DataError("forecast and error path lengths differ");
    std::vector<double> speeds(path.size());
    std::vector<char> clamped(path.size(), 0);
    for (size_t t = 0; t < path.size(); ++t) {
      const double v = forecast[t] + path[t];
      if (v < 0.0) {
        clamped[t] = 1;
        speeds[t] = 0.0;
      } else {
        speeds[t] = v;
      }
    }
    r.speeds.push_back(std::move(speeds));
    r.clamped.push_back(std::move(clamped));
  }
  return r;
}

KmeansResult ReduceKmeans(const Matrix& paths, int k, uint64_t seed) {
  const int n = static_cast<int>(paths.size());
  if (k < 1) throw DataError("k must be at least 1");
  if (k > n) throw DataError("k exceeds path count");
  const std::set<std::vector<double>> distinct(paths.begin(), paths.end());
  if (static_cast<int>(distinct.size()) < k) {
    throw DataError("k exceeds the number of distinct paths");
  }
  const size_t dim = paths[0].size();
  for (const auto& p : paths) {
    if (p.size() != dim) throw DataError("paths have different lengths");
  }

  std::mt19937_64 rng(seed);
  Matrix centroids = SeedPlusPlus(paths, k, rng);
  std::vector<int> assignment(n, -1);
  std::vector<double> dist(n);
  KmeansResult result;
  for (int iter = 1; iter <= kMaxLloydIterations; ++iter) {
    bool changed = false;
    for (int p = 0; p < n; ++p) {
      const int c = Nearest(paths[p], centroids, &dist[p]);
      if (c != assignment[p]) {
        assignment[p] = c;
        changed = true;
      }
    }
    // Reseed empty clusters at the point farthest from its centroid.
    std::vector<int> size(k, 0);
    for (int c : assignment) ++size[c];
    for (int c = 0; c < k; ++c) {
      if (size[c] > 0) continue;
      int far = -1;
      for (int p = 0; p < n; ++p) {
        if (size[assignment[p]] > 1 && (far < 0 || dist[p] > dist[far])) far = p;
      }
      --size[assignment[far]];
      assignment[far] = c;
      size[c] = 1;
      dist[far] = 0.0;
      changed = true;
    }
    // Mean as anchor + mean offset from the cluster's first member, so a
    // cluster of identical paths reproduces the path exactly.
    std::vector<int> anchor(k, -1);
    Matrix offset(k, std::vector<double>(dim, 0.0));
    for (int p = 0; p < n; ++p) {
      const int c = assignment[p];
      if (anchor[c] < 0) anchor[c] = p;
      for (size_t t = 0; t < dim; ++t) offset[c][t] += paths[p][t] - paths[anchor[c]][t];
    }
    for (int c = 0; c < k; ++c) {
      for (size_t t = 0; t < dim; ++t) {
        centroids[c][t] = paths[anchor[c]][t] + offset[c][t] / size[c];
      }
    }
    result.iterations = iter;
    if (!changed) break;
  }

  // Number clusters by first member.
  std::vector<int> order;
  std::vector<int> relabel(k, -1);
  for (int p = 0; p < n; ++p) {
    if (relabel[assignment[p]] < 0) {
      relabel[assignment[p]] = static_cast<int>(order.size());
      order.push_back(assignment[p]);
    }
  }
  result.centroids.resize(k);
  result.probabilities.assign(k, 0.0);
  std::vector<int> size(k, 0);
  for (int c = 0; c < k; ++c) result.centroids[relabel[c]] = centroids[c];
  result.assignment.resize(n);
  for (int p = 0; p < n; ++p) {
    result.assignment[p] = relabel[assignment[p]];
    ++size[result.assignment[p]];
    result.cost += SquaredDistance(paths[p], result.centroids[result.assignment[p]]);
  }
  for (int c = 0; c < k; ++c) result.probabilities[c] = static_cast<double>(size[c]) / n;
  return result;
}

double SpeedToPower(const WindFarm& farm, double speed) {
  if (speed < farm.cut_in || speed >= farm.cut_out) return 0.0;
  if (speed >= farm.rated_speed) return farm.capacity;
  const double ci3 = farm.cut_in * farm.cut_in * farm.cut_in;
  const double r3 = farm.rated_speed * farm.rated_speed * farm.rated_speed;
  return farm.capacity * (speed * speed * speed - ci3) / (r3 - ci3);
}

ScenarioSet GenerateScenarios(const IesNetwork& net, const ScenarioGenOptions& options) {
  const int horizon = net.horizon;
  const int farms = static_cast<int>(net.wind_farms.size());
  if (farms == 0) return ForecastScenario(net);
  if (options.paths < 1) throw DataError("need at least one path");
  if (options.k > options.paths) throw DataError("k exceeds path count");
  for (const WindFarm& w : net.wind_farms) {
    if (static_cast<int>(w.forecast.size()) != horizon) {
      throw DataError("wind farm " + w.id + " has no forecast of length " +
                      std::to_string(horizon));
    }
  }
  // points[p] = farm 0 speeds, farm 1 speeds, ...
  Matrix points(options.paths);
  for (int f = 0; f < farms; ++f) {
    const uint64_t stream = options.shared_error ? 0 : static_cast<uint64_t>(f);
    const Matrix errors = SimulateErrorPaths(options.arma, options.paths, horizon, stream);
    const RealizedSpeeds realized = ComposeRealized(net.wind_farms[f].forecast, errors);
    for (int p = 0; p < options.paths; ++p) {
      points[p].insert(points[p].end(), realized.speeds[p].begin(), realized.speeds[p].end());
    }
  }
  const KmeansResult km = ReduceKmeans(points, options.k, options.arma.seed);

  ScenarioSet set;
  for (const WindFarm& w : net.wind_farms) set.farms.push_back(w.id);
  for (int c = 0; c < options.k; ++c) {
    Scenario sc;
    sc.probability = km.probabilities[c];
    for (int f = 0; f < farms; ++f) {
      std::vector<double> power(horizon);
      for (int t = 0; t < horizon; ++t) {
        power[t] = SpeedToPower(net.wind_farms[f], km.centroids[c][f * horizon + t]);
      }
      sc.wind.push_back(std::move(power));
    }
    set.scenarios.push_back(std::move(sc));
  }
  return set;
}

ScenarioSet ForecastScenario(const IesNetwork& net) {
  ScenarioSet set;
  Scenario sc;
  sc.probability = 1.0;
  for (const WindFarm& w : net.wind_farms) {
    set.farms.push_back(w.id);
    std::vector<double> power(net.horizon, 0.0);
    for (int t = 0; t < net.horizon && t < static_cast<int>(w.forecast.size()); ++t) {
      power[t] = SpeedToPower(w, w.forecast[t]);
    }
    sc.wind.push_back(std::move(power));
  }
  set.scenarios.push_back(std::move(sc));
  return set;
}

ScenarioSet MeanScenario(const ScenarioSet& set) {
  ScenarioSet mean;
  mean.farms = set.farms;
  Scenario sc;
  sc.probability = 1.0;
  if (!set.scenarios.empty()) {
    sc.wind = set.scenarios[0].wind;
    for (auto& row : sc.wind) std::fill(row.begin(), row.end(), 0.0);
    for (const Scenario& s : set.scenarios) {
      for (size_t f = 0; f < s.wind.size(); ++f) {
        for (size_t t = 0; t < s.wind[f].size(); ++t) {
          sc.wind[f][t] += s.probability * s.wind[f][t];
        }
      }
    }
  }
  mean.scenarios.push_back(std::move(sc));
  return mean;
}

ValidationReport ValidateScenarios(const ScenarioSet& set, const IesNetwork& net) {
  ValidationReport report;
  if (set.scenarios.empty()) report.push_back({"scenarios", "no scenarios"});
  double total = 0.0;
  for (const Scenario& s : set.scenarios) total += s.probability;
  if (!set.scenarios.empty() && std::abs(total - 1.0) > 1e-9) {
    report.push_back({"scenarios", "probabilities sum to " + std::to_string(total)});
  }
  std::vector<int> farm_of(set.farms.size(), -1);
  for (size_t f = 0; f < set.farms.size(); ++f) {
    for (size_t w = 0; w < net.wind_farms.size(); ++w) {
      if (net.wind_farms[w].id == set.farms[f]) farm_of[f] = static_cast<int>(w);
    }
    if (farm_of[f] < 0) report.push_back({"farms", "unknown wind farm '" + set.farms[f] + "'"});
  }
  for (const WindFarm& w : net.wind_farms) {
    if (std::find(set.farms.begin(), set.farms.end(), w.id) == set.farms.end()) {
      report.push_back({"farms", "no wind data for farm '" + w.id + "'"});
    }
  }
  for (size_t k = 0; k < set.scenarios.size(); ++k) {
    const Scenario& s = set.scenarios[k];
    const std::string field = "scenarios[" + std::to_string(k) + "]";
    if (!(s.probability > 0)) report.push_back({field, "probability must be positive"});
    if (s.wind.size() != set.farms.size()) {
      report.push_back({field, "wind rows do not match the farm list"});
      continue;
    }
    for (size_t f = 0; f < s.wind.size(); ++f) {
      if (static_cast<int>(s.wind[f].size()) != net.horizon) {
        report.push_back(
            {field, "farm " + set.farms[f] + " needs " + std::to_string(net.horizon) + " values"});
        continue;
      }
      const double cap = farm_of[f] >= 0 ? net.wind_farms[farm_of[f]].capacity
                                         : std::numeric_limits<double>::infinity();
      for (double v : s.wind[f]) {
        if (!(v >= 0.0 && v <= cap + 1e-12)) {
          report.push_back({field, "farm " + set.farms[f] + " output outside [0, capacity]"});
          break;
        }
      }
    }
  }
  return report;
}

ScenarioSet ParseScenarios(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("scenario file: ") + e.what());
  }
  ScenarioSet set;
  try {
    for (const auto& f : doc.at("farms")) set.farms.push_back(f.get<std::string>());
    for (const auto& s : doc.at("scenarios")) {
      Scenario sc;
      sc.probability = s.at("probability").get<double>();
      const json& wind = s.at("wind");
      for (const std::string& farm : set.farms) {
        sc.wind.push_back(wind.at(farm).get<std::vector<double>>());
      }
      if (wind.size() != set.farms.size()) throw DataError("scenario lists an unknown farm");
      set.scenarios.push_back(std::move(sc));
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("scenario file: ") + e.what());
  }
  return set;
}

std::string SerializeScenarios(const ScenarioSet& set) {
  json doc = json::object();
  doc["farms"] = set.farms;
  json list = json::array();
  for (const Scenario& s : set.scenarios) {
    json wind = json::object();
    for (size_t f = 0; f < set.farms.size(); ++f) wind[set.farms[f]] = s.wind[f];
    list.push_back({{"probability", s.probability}, {"wind", wind}});
  }
  doc["scenarios"] = list;
  return doc.dump(2) + "\n";
}

ScenarioSet LoadScenarios(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open scenario file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseScenarios(buffer.str());
}

void SaveScenarios(const ScenarioSet& set, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write scenario file " + path.string());
  out << SerializeScenarios(set);
}

}  // namespace iesuc
