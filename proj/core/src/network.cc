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

#include "iesuc/network.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

namespace iesuc {
namespace {

using nlohmann::json;

// Reads keys off one JSON object and complains about anything left over.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw DataError(path_ + ": expected an object");
  }

  double Number(const std::string& key) {
    const json& v = Required(key);
    if (!v.is_number()) throw DataError(path_ + "." + key + ": expected a number");
    return v.get<double>();
  }
  double Number(const std::string& key, double fallback) {
    return Has(key) ? Number(key) : fallback;
  }
  std::optional<double> OptionalNumber(const std::string& key) {
    if (!Has(key)) return std::nullopt;
    return Number(key);
  }
  int Integer(const std::string& key, int fallback) {
    if (!Has(key)) return fallback;
    const json& v = Required(key);
    if (!v.is_number_integer()) throw DataError(path_ + "." + key + ": expected an integer");
    return v.get<int>();
  }
  std::string String(const std::string& key) {
    const json& v = Required(key);
    if (!v.is_string()) throw DataError(path_ + "." + key + ": expected a string");
    return v.get<std::string>();
  }
  std::string String(const std::string& key, const std::string& fallback) {
    return Has(key) ? String(key) : fallback;
  }
  std::vector<double> Series(const std::string& key, bool required = true) {
    if (!required && !Has(key)) return {};
    const json& v = Required(key);
    if (!v.is_array()) throw DataError(path_ + "." + key + ": expected an array");
    std::vector<double> out;
    for (const json& e : v) {
      if (!e.is_number()) throw DataError(path_ + "." + key + ": expected numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }
  const json* Child(const std::string& key) {
    if (!Has(key)) return nullptr;
    return &Required(key);
  }

  void Finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) throw DataError(path_ + ": unknown field '" + key + "'");
    }
  }

 private:
  bool Has(const std::string& key) const { return obj_.contains(key); }
  const json& Required(const std::string& key) {
    if (!Has(key)) throw DataError(path_ + ": missing field '" + key + "'");
    seen_.insert(key);
    return obj_.at(key);
  }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename T, typename F>
std::vector<T> ReadList(ObjectReader& top, const std::string& key, F read_one) {
  std::vector<T> out;
  const json* list = top.Child(key);
  if (list == nullptr) return out;
  if (!list->is_array()) throw DataError(key + ": expected an array");
  for (size_t k = 0; k < list->size(); ++k) {
    ObjectReader r((*list)[k], key + "[" + std::to_string(k) + "]");
    out.push_back(read_one(r));
    r.Finish();
  }
  return out;
}

void Scale(std::vector<double>& v, double s) {
  for (double& x : v) x *= s;
}

class Validator {
 public:
  explicit Validator(const IesNetwork& net) : net_(net) {}

  ValidationReport Run() {
    CheckConstants();
    if (net_.horizon != kHorizon) {
      Issue("horizon", "horizon must be " + std::to_string(kHorizon));
    }
    if (net_.buses.empty()) Issue("buses", "no buses");
    if (net_.gas_nodes.empty()) Issue("gas_nodes", "no gas nodes");
    if (net_.generators.empty()) Issue("generators", "at least one generator is required");
    if (net_.wells.empty()) Issue("wells", "at least one gas well is required");
    CheckUnique();

    for (const Bus& b : net_.buses) {
      const std::string f = "buses[" + b.id + "]";
      CheckSeries(f + ".L_P", b.demand);
      if (b.unserved_cost < 0) Issue(f + ".C_NP", "negative cost");
    }
    for (const Branch& br : net_.branches) {
      const std::string f = "branches[" + br.id + "]";
      CheckBus(f + ".from", br.from);
      CheckBus(f + ".to", br.to);
      if (br.from == br.to) Issue(f, "branch connects a bus to itself");
      if (!(br.reactance > 0)) Issue(f + ".X", "reactance must be positive");
      if (!(br.capacity > 0)) Issue(f + ".PF", "capacity must be positive");
    }
    for (const Generator& g : net_.generators) CheckGenerator(g);
    for (const WindFarm& w : net_.wind_farms) {
      const std::string f = "wind_farms[" + w.id + "]";
      CheckBus(f + ".bus", w.bus);
      if (w.capacity < 0) Issue(f + ".capacity", "negative capacity");
      if (w.curtailment_cost < 0) Issue(f + ".C_WC", "negative cost");
      if (!(0 < w.cut_in && w.cut_in < w.rated_speed && w.rated_speed < w.cut_out)) {
        Issue(f, "power curve needs 0 < cut-in < rated speed < cut-out");
      }
      if (!w.forecast.empty()) CheckSeries(f + ".forecast", w.forecast);
    }
    for (const GasNode& n : net_.gas_nodes) {
      const std::string f = "gas_nodes[" + n.id + "]";
      if (!(0 < n.pressure_min && n.pressure_min <= n.initial_pressure &&
            n.initial_pressure <= n.pressure_max)) {
        Issue(f, "pressures need 0 < Pi_min <= pi0 <= Pi_max");
      }
      if (n.unserved_cost < 0) Issue(f + ".C_NG", "negative cost");
      CheckSeries(f + ".L", n.demand);
    }
    for (const Pipeline& p : net_.pipelines) {
      const std::string f = "pipelines[" + p.id + "]";
      CheckNode(f + ".from", p.from);
      CheckNode(f + ".to", p.to);
      if (p.from == p.to) Issue(f, "pipeline connects a node to itself");
      if (!(p.diameter > 0)) Issue(f + ".D", "diameter must be positive");
      if (!(p.length > 0)) Issue(f + ".L", "length must be positive");
    }
    for (const Compressor& c : net_.compressors) {
      const std::string f = "compressors[" + c.id + "]";
      CheckNode(f + ".from", c.from);
      CheckNode(f + ".to", c.to);
      if (c.from == c.to) Issue(f, "compressor connects a node to itself");
      if (!(c.factor >= 1.0)) Issue(f + ".CM", "compression factor < 1");
    }
    for (const GasWell& w : net_.wells) {
      const std::string f = "wells[" + w.id + "]";
      CheckNode(f + ".node", w.node);
      if (!(0 <= w.output_min && w.output_min <= w.output_max)) {
        Issue(f, "well bounds need 0 <= W_min <= W_max");
      }
      if (w.cost < 0) Issue(f + ".C_PG", "negative cost");
    }
    for (const GasStorage& s : net_.storages) {
      const std::string f = "storages[" + s.id + "]";
      CheckNode(f + ".node", s.node);
      if (!(0 <= s.level_min && s.level_min <= s.initial_level && s.initial_level <= s.level_max)) {
        Issue(f, "storage levels need 0 <= S_min <= sl0 <= S_max");
      }
      if (s.withdraw_max < 0 || s.inject_max < 0) Issue(f, "negative injection/withdrawal limit");
      if (s.withdraw_cost < 0) Issue(f + ".C_S", "negative cost");
    }

    if (report_.empty()) CheckConnectivity();
    return report_;
  }

 private:
  void Issue(std::string field, std::string message) {
    report_.push_back({std::move(field), std::move(message)});
  }

  void CheckConstants() {
    const PhysicalConstants& k = net_.constants;
    const std::pair<const char*, double> values[] = {{"rho", k.density},
                                                     {"F", k.friction},
                                                     {"R", k.gas_constant},
                                                     {"T", k.temperature},
                                                     {"Z", k.compressibility}};
    for (const auto& [name, v] : values) {
      if (!(v > 0)) Issue(std::string("constants.") + name, "must be positive");
    }
  }

  template <typename T>
  void UniqueIds(const std::vector<T>& items, const std::string& what) {
    std::set<std::string> ids;
    for (const T& item : items) {
      if (item.id.empty()) Issue(what, "empty id");
      if (!ids.insert(item.id).second) Issue(what + "[" + item.id + "]", "duplicate id");
    }
  }

  void CheckUnique() {
    UniqueIds(net_.buses, "buses");
    UniqueIds(net_.branches, "branches");
    UniqueIds(net_.generators, "generators");
    UniqueIds(net_.wind_farms, "wind_farms");
    UniqueIds(net_.gas_nodes, "gas_nodes");
    UniqueIds(net_.pipelines, "pipelines");
    UniqueIds(net_.compressors, "compressors");
    UniqueIds(net_.wells, "wells");
    UniqueIds(net_.storages, "storages");
  }

  void CheckSeries(const std::string& field, const std::vector<double>& v) {
    if (static_cast<int>(v.size()) != net_.horizon) {
      Issue(field, "expected " + std::to_string(net_.horizon) + " values, got " +
                       std::to_string(v.size()));
    }
    for (double x : v) {
      if (!(x >= 0) || !std::isfinite(x)) {
        Issue(field, "values must be finite and non-negative");
        break;
      }
    }
  }

  void CheckBus(const std::string& field, const std::string& id) {
    if (net_.BusIndex(id) < 0) Issue(field, "unknown bus '" + id + "'");
  }
  void CheckNode(const std::string& field, const std::string& id) {
    if (net_.GasNodeIndex(id) < 0) Issue(field, "unknown gas node '" + id + "'");
  }

  void CheckGenerator(const Generator& g) {
    const std::string f = "generators[" + g.id + "]";
    CheckBus(f + ".bus", g.bus);
    if (!(0 <= g.p_min && g.p_min <= g.p_max)) {
      Issue(f + ".P_max", "output bounds need 0 <= P_min <= P_max");
    }
    if (g.ramp_up < 0 || g.ramp_down < 0) Issue(f, "negative ramp limit");
    if (g.cost < 0) Issue(f + ".C_PD", "negative cost");
    if (g.kind == GeneratorKind::kGas) {
      CheckNode(f + ".gas_node", g.gas_node);
      if (!(g.gas_to_power > 0)) Issue(f + ".GTP", "gas-fired unit needs GTP > 0");
    }
    if (g.initial_commitment != 0 && g.initial_commitment != 1) {
      Issue(f + ".c0", "initial commitment must be 0 or 1");
    }
    const double pd0 = g.InitialOutput();
    if (g.initial_commitment == 0 && pd0 != 0.0) {
      Issue(f + ".pd0", "uncommitted unit must start at zero output");
    }
    if (g.initial_commitment == 1 && !(g.p_min <= pd0 && pd0 <= g.p_max)) {
      Issue(f + ".pd0", "initial output outside [P_min, P_max]");
    }
  }

  void CheckConnectivity() {
    const auto power = PowerIslands(net_);
    if (std::any_of(power.begin(), power.end(), [](int c) { return c != 0; })) {
      Issue("branches", "power graph not connected");
    }
    const auto gas = GasIslands(net_);
    if (std::any_of(gas.begin(), gas.end(), [](int c) { return c != 0; })) {
      Issue("pipelines", "gas graph not connected");
    }
  }

  const IesNetwork& net_;
  ValidationReport report_;
};

std::vector<int> Components(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0) continue;
    parent[find(a)] = find(b);
  }
  std::vector<int> label(n, -1), root_label(n, -1);
  int next = 0;
  for (int v = 0; v < n; ++v) {
    const int r = find(v);
    if (root_label[r] < 0) root_label[r] = next++;
    label[v] = root_label[r];
  }
  return label;
}

}  // namespace

double Generator::InitialOutput() const {
  if (initial_output) return *initial_output;
  return initial_commitment == 1 ? p_min : 0.0;
}

int IesNetwork::BusIndex(const std::string& id) const {
  for (size_t k = 0; k < buses.size(); ++k) {
    if (buses[k].id == id) return static_cast<int>(k);
  }
  return -1;
}

int IesNetwork::GasNodeIndex(const std::string& id) const {
  for (size_t k = 0; k < gas_nodes.size(); ++k) {
    if (gas_nodes[k].id == id) return static_cast<int>(k);
  }
  return -1;
}

ValidationReport Validate(const IesNetwork& net) { return Validator(net).Run(); }

std::string FormatReport(const ValidationReport& report) {
  std::string out;
  for (const ValidationIssue& issue : report) {
    out += issue.field + ": " + issue.message + "\n";
  }
  return out;
}

IesNetwork ParseNetwork(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("network file: ") + e.what());
  }
  ObjectReader top(doc, "network");
  IesNetwork net;
  net.name = top.String("name", "");
  net.horizon = top.Integer("horizon", kHorizon);
  const std::string unit = top.String("power_unit", "GW");
  double p = 1.0;
  if (unit == "MW") {
    p = 1e-3;
  } else if (unit != "GW") {
    throw DataError("network.power_unit: expected \"GW\" or \"MW\"");
  }
  if (const json* c = top.Child("constants")) {
    ObjectReader r(*c, "constants");
    net.constants.density = r.Number("rho");
    net.constants.friction = r.Number("F");
    net.constants.gas_constant = r.Number("R");
    net.constants.temperature = r.Number("T");
    net.constants.compressibility = r.Number("Z");
    r.Finish();
  } else {
    throw DataError("network: missing field 'constants'");
  }

  net.buses = ReadList<Bus>(top, "buses", [&](ObjectReader& r) {
    Bus b;
    b.id = r.String("id");
    b.demand = r.Series("L_P");
    Scale(b.demand, p);
    b.unserved_cost = r.Number("C_NP") / p;
    return b;
  });
  net.branches = ReadList<Branch>(top, "branches", [&](ObjectReader& r) {
    Branch b;
    b.id = r.String("id");
    b.from = r.String("from");
    b.to = r.String("to");
    b.reactance = r.Number("X");
    b.capacity = r.Number("PF") * p;
    return b;
  });
  net.generators = ReadList<Generator>(top, "generators", [&](ObjectReader& r) {
    Generator g;
    g.id = r.String("id");
    const std::string kind = r.String("kind");
    if (kind == "gas") {
      g.kind = GeneratorKind::kGas;
    } else if (kind == "coal") {
      g.kind = GeneratorKind::kCoal;
    } else {
      throw DataError("generators[" + g.id + "].kind: expected \"gas\" or \"coal\"");
    }
    g.bus = r.String("bus");
    g.gas_node = r.String("gas_node", "");
    g.p_min = r.Number("P_min") * p;
    g.p_max = r.Number("P_max") * p;
    g.ramp_up = r.Number("RU") * p;
    g.ramp_down = r.Number("RD") * p;
    g.cost = r.Number("C_PD") / p;
    g.gas_to_power = r.Number("GTP", 0.0) / p;
    g.initial_commitment = r.Integer("c0", 0);
    if (auto v = r.OptionalNumber("pd0")) g.initial_output = *v * p;
    return g;
  });
  net.wind_farms = ReadList<WindFarm>(top, "wind_farms", [&](ObjectReader& r) {
    WindFarm w;
    w.id = r.String("id");
    w.bus = r.String("bus");
    w.capacity = r.Number("capacity") * p;
    w.curtailment_cost = r.Number("C_WC") / p;
    w.cut_in = r.Number("v_cut_in", w.cut_in);
    w.rated_speed = r.Number("v_rated", w.rated_speed);
    w.cut_out = r.Number("v_cut_out", w.cut_out);
    w.forecast = r.Series("forecast", false);
    return w;
  });
  net.gas_nodes = ReadList<GasNode>(top, "gas_nodes", [&](ObjectReader& r) {
    GasNode n;
    n.id = r.String("id");
    n.pressure_min = r.Number("Pi_min");
    n.pressure_max = r.Number("Pi_max");
    n.unserved_cost = r.Number("C_NG");
    n.demand = r.Series("L");
    n.initial_pressure = r.Number("pi0");
    return n;
  });
  net.pipelines = ReadList<Pipeline>(top, "pipelines", [&](ObjectReader& r) {
    Pipeline q;
    q.id = r.String("id");
    q.from = r.String("from");
    q.to = r.String("to");
    q.diameter = r.Number("D");
    q.length = r.Number("L");
    return q;
  });
  net.compressors = ReadList<Compressor>(top, "compressors", [&](ObjectReader& r) {
    Compressor c;
    c.id = r.String("id");
    c.from = r.String("from");
    c.to = r.String("to");
    c.factor = r.Number("CM");
    return c;
  });
  net.wells = ReadList<GasWell>(top, "wells", [&](ObjectReader& r) {
    GasWell w;
    w.id = r.String("id");
    w.node = r.String("node");
    w.output_min = r.Number("W_min");
    w.output_max = r.Number("W_max");
    w.cost = r.Number("C_PG");
    return w;
  });
  net.storages = ReadList<GasStorage>(top, "storages", [&](ObjectReader& r) {
    GasStorage s;
    s.id = r.String("id");
    s.node = r.String("node");
    s.level_min = r.Number("S_min");
    s.level_max = r.Number("S_max");
    s.withdraw_max = r.Number("WR_max");
    s.inject_max = r.Number("IS_max");
    s.withdraw_cost = r.Number("C_S");
    s.initial_level = r.Number("sl0");
    return s;
  });
  top.Finish();

  const ValidationReport report = Validate(net);
  if (!report.empty()) throw DataError("invalid network:\n" + FormatReport(report));
  return net;
}

IesNetwork LoadNetwork(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open network file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return ParseNetwork(buffer.str());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string SerializeNetwork(const IesNetwork& net) {
  json doc = json::object();
  doc["name"] = net.name;
  doc["horizon"] = net.horizon;
  doc["power_unit"] = "GW";
  doc["constants"] = {{"rho", net.constants.density},
                      {"F", net.constants.friction},
                      {"R", net.constants.gas_constant},
                      {"T", net.constants.temperature},
                      {"Z", net.constants.compressibility}};
  json buses = json::array();
  for (const Bus& b : net.buses) {
    buses.push_back({{"id", b.id}, {"L_P", b.demand}, {"C_NP", b.unserved_cost}});
  }
  doc["buses"] = buses;
  json branches = json::array();
  for (const Branch& b : net.branches) {
    branches.push_back(
        {{"id", b.id}, {"from", b.from}, {"to", b.to}, {"X", b.reactance}, {"PF", b.capacity}});
  }
  doc["branches"] = branches;
  json generators = json::array();
  for (const Generator& g : net.generators) {
    json e = {{"id", g.id},
              {"kind", g.kind == GeneratorKind::kGas ? "gas" : "coal"},
              {"bus", g.bus},
              {"P_min", g.p_min},
              {"P_max", g.p_max},
              {"RU", g.ramp_up},
              {"RD", g.ramp_down},
              {"C_PD", g.cost},
              {"c0", g.initial_commitment}};
    if (!g.gas_node.empty()) e["gas_node"] = g.gas_node;
    if (g.gas_to_power != 0.0) e["GTP"] = g.gas_to_power;
    if (g.initial_output) e["pd0"] = *g.initial_output;
    generators.push_back(e);
  }
  doc["generators"] = generators;
  json farms = json::array();
  for (const WindFarm& w : net.wind_farms) {
    json e = {{"id", w.id},
              {"bus", w.bus},
              {"capacity", w.capacity},
              {"C_WC", w.curtailment_cost},
              {"v_cut_in", w.cut_in},
              {"v_rated", w.rated_speed},
              {"v_cut_out", w.cut_out}};
    if (!w.forecast.empty()) e["forecast"] = w.forecast;
    farms.push_back(e);
  }
  doc["wind_farms"] = farms;
  json nodes = json::array();
  for (const GasNode& n : net.gas_nodes) {
    nodes.push_back({{"id", n.id},
                     {"Pi_min", n.pressure_min},
                     {"Pi_max", n.pressure_max},
                     {"C_NG", n.unserved_cost},
                     {"L", n.demand},
                     {"pi0", n.initial_pressure}});
  }
  doc["gas_nodes"] = nodes;
  json pipes = json::array();
  for (const Pipeline& q : net.pipelines) {
    pipes.push_back(
        {{"id", q.id}, {"from", q.from}, {"to", q.to}, {"D", q.diameter}, {"L", q.length}});
  }
  doc["pipelines"] = pipes;
  json compressors = json::array();
  for (const Compressor& c : net.compressors) {
    compressors.push_back({{"id", c.id}, {"from", c.from}, {"to", c.to}, {"CM", c.factor}});
  }
  doc["compressors"] = compressors;
  json wells = json::array();
  for (const GasWell& w : net.wells) {
    wells.push_back({{"id", w.id},
                     {"node", w.node},
                     {"W_min", w.output_min},
                     {"W_max", w.output_max},
                     {"C_PG", w.cost}});
  }
  doc["wells"] = wells;
  json storages = json::array();
  for (const GasStorage& s : net.storages) {
    storages.push_back({{"id", s.id},
                        {"node", s.node},
                        {"S_min", s.level_min},
                        {"S_max", s.level_max},
                        {"WR_max", s.withdraw_max},
                        {"IS_max", s.inject_max},
                        {"C_S", s.withdraw_cost},
                        {"sl0", s.initial_level}});
  }
  doc["storages"] = storages;
  return doc.dump(2) + "\n";
}

void SaveNetwork(const IesNetwork& net, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write network file " + path.string());
  out << SerializeNetwork(net);
}

double ComputeCont(const Pipeline& pipe, const PhysicalConstants& k) {
  const double d5 = std::pow(pipe.diameter, 5);
  return std::sqrt(0.617 * d5 /
                   (pipe.length * k.friction * k.gas_constant * k.temperature * k.compressibility *
                    k.density * k.density));
}

double LinepackCoefficient(const Pipeline& pipe, const PhysicalConstants& k) {
  return kLinepackVolumeScale * 0.78 * pipe.diameter * pipe.diameter * pipe.length /
         (k.density * k.gas_constant * k.temperature * k.compressibility);
}

double InitialLinepack(const IesNetwork& net, const Pipeline& pipe) {
  const int c = net.GasNodeIndex(pipe.from);
  const int d = net.GasNodeIndex(pipe.to);
  if (c < 0 || d < 0) throw DataError("pipeline " + pipe.id + " has unknown end nodes");
  const double avg = 0.5 * (net.gas_nodes[c].initial_pressure + net.gas_nodes[d].initial_pressure);
  return LinepackCoefficient(pipe, net.constants) * avg;
}

std::vector<int> PowerIslands(const IesNetwork& net) {
  std::vector<std::pair<int, int>> edges;
  for (const Branch& b : net.branches) edges.emplace_back(net.BusIndex(b.from), net.BusIndex(b.to));
  return Components(static_cast<int>(net.buses.size()), edges);
}

std::vector<int> GasIslands(const IesNetwork& net) {
  std::vector<std::pair<int, int>> edges;
  for (const Pipeline& p : net.pipelines) {
    edges.emplace_back(net.GasNodeIndex(p.from), net.GasNodeIndex(p.to));
  }
  for (const Compressor& c : net.compressors) {
    edges.emplace_back(net.GasNodeIndex(c.from), net.GasNodeIndex(c.to));
  }
  return Components(static_cast<int>(net.gas_nodes.size()), edges);
}

std::string Fingerprint(const std::string& text) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace iesuc
