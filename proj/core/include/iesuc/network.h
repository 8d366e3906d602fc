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

// Coupled power and gas network data.
//
// Canonical units: GW, GWh, MSm3, MSm3/h, bar, m; one-hour periods, so a flow
// held for one period adds its value directly to a stock. Costs are M$ per
// canonical unit. Network files may declare "power_unit": "MW", in which case
// power quantities and per-power costs are converted at load time.

#ifndef IESUC_NETWORK_H_
#define IESUC_NETWORK_H_

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace iesuc {

inline constexpr int kHorizon = 24;

// Converts the 0.78 D^2 L / (rho R T Z) pipeline volume term (m^3 per bar
// under the constants' own units) into MSm3 per bar.
inline constexpr double kLinepackVolumeScale = 1e-6;

// Malformed or invalid input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class GeneratorKind { kGas, kCoal };

struct Generator {
  std::string id;
  GeneratorKind kind = GeneratorKind::kCoal;
  std::string bus;
  std::string gas_node;  // gas-fired only
  double p_min = 0.0;
  double p_max = 0.0;
  double ramp_up = 0.0;
  double ramp_down = 0.0;
  double cost = 0.0;          // C_PD, M$/GWh
  double gas_to_power = 0.0;  // GTP, MSm3/GWh
  int initial_commitment = 0;
  // Defaults to p_min when committed at t = 0, else 0.
  std::optional<double> initial_output;

  double InitialOutput() const;
  bool operator==(const Generator&) const = default;
};

struct Bus {
  std::string id;
  std::vector<double> demand;  // GW per period
  double unserved_cost = 0.0;  // C_NP, M$/GWh
  bool operator==(const Bus&) const = default;
};

struct Branch {
  std::string id;
  std::string from;
  std::string to;
  double reactance = 0.0;  // p.u.
  double capacity = 0.0;   // GW
  bool operator==(const Branch&) const = default;
};

struct WindFarm {
  std::string id;
  std::string bus;
  double capacity = 0.0;          // GW
  double curtailment_cost = 0.0;  // C_WC
  double cut_in = 3.0;            // m/s
  double rated_speed = 12.0;
  double cut_out = 25.0;
  // Forecast wind speed per period (m/s); empty when scenarios come from file.
  std::vector<double> forecast;
  bool operator==(const WindFarm&) const = default;
};

struct GasNode {
  std::string id;
  double pressure_min = 0.0;  // bar
  double pressure_max = 0.0;
  double unserved_cost = 0.0;  // C_NG, M$/MSm3
  std::vector<double> demand;  // MSm3/h per period
  double initial_pressure = 0.0;
  bool operator==(const GasNode&) const = default;
};

struct Pipeline {
  std::string id;
  std::string from;
  std::string to;
  double diameter = 0.0;  // m
  double length = 0.0;    // m
  bool operator==(const Pipeline&) const = default;
};

struct Compressor {
  std::string id;
  std::string from;
  std::string to;
  double factor = 1.0;  // CM
  bool operator==(const Compressor&) const = default;
};

struct GasWell {
  std::string id;
  std::string node;
  double output_min = 0.0;  // MSm3/h
  double output_max = 0.0;
  double cost = 0.0;  // C_PG
  bool operator==(const GasWell&) const = default;
};

struct GasStorage {
  std::string id;
  std::string node;
  double level_min = 0.0;  // MSm3
  double level_max = 0.0;
  double withdraw_max = 0.0;  // MSm3/h
  double inject_max = 0.0;
  double withdraw_cost = 0.0;  // C_S
  double initial_level = 0.0;
  bool operator==(const GasStorage&) const = default;
};

struct PhysicalConstants {
  double density = 0.7156;       // rho, kg/m3
  double friction = 0.01;        // F
  double gas_constant = 0.0577;  // R
  double temperature = 281.15;   // T, K
  double compressibility = 0.8;  // Z
  bool operator==(const PhysicalConstants&) const = default;
};

struct IesNetwork {
  std::string name;
  int horizon = kHorizon;
  PhysicalConstants constants;
  std::vector<Bus> buses;
  std::vector<Branch> branches;
  std::vector<Generator> generators;
  std::vector<WindFarm> wind_farms;
  std::vector<GasNode> gas_nodes;
  std::vector<Pipeline> pipelines;
  std::vector<Compressor> compressors;
  std::vector<GasWell> wells;
  std::vector<GasStorage> storages;

  // Position of the entity with `id`, or -1.
  int BusIndex(const std::string& id) const;
  int GasNodeIndex(const std::string& id) const;

  bool operator==(const IesNetwork&) const = default;
};

struct ValidationIssue {
  std::string field;  // e.g. "generators[G1].P_max"
  std::string message;
};
using ValidationReport = std::vector<ValidationIssue>;

ValidationReport Validate(const IesNetwork& net);
std::string FormatReport(const ValidationReport& report);

// Parses and validates; throws DataError on parse errors or a non-empty
// validation report.
IesNetwork LoadNetwork(const std::filesystem::path& path);
IesNetwork ParseNetwork(const std::string& text);
// Canonical units; LoadNetwork(SaveNetwork(n)) == n.
std::string SerializeNetwork(const IesNetwork& net);
void SaveNetwork(const IesNetwork& net, const std::filesystem::path& path);

// Weymouth constant sqrt(0.617 D^5 / (L F R T Z rho^2)).
double ComputeCont(const Pipeline& pipe, const PhysicalConstants& k);
// Linepack per bar of average pressure: m = coefficient * pi_avg.
double LinepackCoefficient(const Pipeline& pipe, const PhysicalConstants& k);
// Linepack implied by the end nodes' initial pressures.
double InitialLinepack(const IesNetwork& net, const Pipeline& pipe);

// Connected-component label per bus (branches) or gas node (pipelines and
// compressors); labels are numbered in order of first appearance.
std::vector<int> PowerIslands(const IesNetwork& net);
std::vector<int> GasIslands(const IesNetwork& net);

// FNV-1a over the canonical serialization; identifies an instance in outputs.
std::string Fingerprint(const std::string& text);

}  // namespace iesuc

#endif  // IESUC_NETWORK_H_
