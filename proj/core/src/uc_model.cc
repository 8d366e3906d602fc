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

#include "iesuc/uc_model.h"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "iesuc/simplex.h"

namespace iesuc {
namespace {

using solver::AffineExpr;
using solver::ConeRow;
using solver::kInfinity;
using solver::LinearRow;

constexpr double kDirectionZero = 1e-6;

LinearRow Row(const char* tag, double lower, double upper) {
  LinearRow r;
  r.tag = tag;
  r.lower = lower;
  r.upper = upper;
  return r;
}

// Index of each network wind farm within the scenario set's farm list.
std::vector<int> FarmColumns(const IesNetwork& net, const ScenarioSet& scenarios) {
  std::vector<int> out;
  for (const WindFarm& w : net.wind_farms) {
    const auto it = std::find(scenarios.farms.begin(), scenarios.farms.end(), w.id);
    if (it == scenarios.farms.end()) {
      throw DataError("scenario set has no data for wind farm " + w.id);
    }
    out.push_back(static_cast<int>(it - scenarios.farms.begin()));
  }
  return out;
}

double WindAvailable(const ScenarioSet& scenarios, const std::vector<int>& farm_col, int farm,
                     int scenario_id, int t) {
  return scenarios.scenarios[scenario_id].wind[farm_col[farm]][t];
}

// Entity positions resolved once per build.
struct Incidence {
  std::vector<int> gen_bus, gen_node, farm_bus, branch_from, branch_to;
  std::vector<int> well_node, storage_node, pipe_from, pipe_to, comp_from, comp_to;
  std::vector<double> cont;

  explicit Incidence(const IesNetwork& net) {
    auto bus = [&](const std::string& id) {
      const int k = net.BusIndex(id);
      if (k < 0) throw DataError("unknown bus '" + id + "'");
      return k;
    };
    auto node = [&](const std::string& id) {
      const int k = net.GasNodeIndex(id);
      if (k < 0) throw DataError("unknown gas node '" + id + "'");
      return k;
    };
    for (const Generator& g : net.generators) {
      gen_bus.push_back(bus(g.bus));
      if (g.kind == GeneratorKind::kGas) {
        if (g.gas_node.empty()) throw DataError("gas-fired generator " + g.id + " has no gas node");
        gen_node.push_back(node(g.gas_node));
      } else {
        gen_node.push_back(-1);
      }
    }
    for (const WindFarm& w : net.wind_farms) farm_bus.push_back(bus(w.bus));
    for (const Branch& b : net.branches) {
      branch_from.push_back(bus(b.from));
      branch_to.push_back(bus(b.to));
    }
    for (const GasWell& w : net.wells) well_node.push_back(node(w.node));
    for (const GasStorage& s : net.storages) storage_node.push_back(node(s.node));
    for (const Pipeline& p : net.pipelines) {
      pipe_from.push_back(node(p.from));
      pipe_to.push_back(node(p.to));
      cont.push_back(ComputeCont(p, net.constants));
    }
    for (const Compressor& c : net.compressors) {
      comp_from.push_back(node(c.from));
      comp_to.push_back(node(c.to));
    }
  }
};

}  // namespace

const char* FamilyName(Family f) {
  switch (f) {
    case Family::kPdf:
      return "pdf";
    case Family::kPg:
      return "pg";
    case Family::kNp:
      return "np";
    case Family::kNg:
      return "ng";
    case Family::kSto:
      return "sto";
    case Family::kSti:
      return "sti";
    case Family::kWc:
      return "wc";
    case Family::kPf:
      return "pf";
    case Family::kTheta:
      return "theta";
    case Family::kSl:
      return "sl";
    case Family::kPi:
      return "pi";
    case Family::kPiAvg:
      return "pi_avg";
    case Family::kM:
      return "m";
    case Family::kGfo:
      return "gfo";
    case Family::kGfi:
      return "gfi";
    case Family::kGf:
      return "gf";
    case Family::kCount:
      break;
  }
  return "?";
}

DecisionCatalog::DecisionCatalog(const IesNetwork& net, int scenarios)
    : horizon_(net.horizon),
      scenarios_(scenarios),
      generators_(static_cast<int>(net.generators.size())) {
  const int gens = static_cast<int>(net.generators.size());
  const int buses = static_cast<int>(net.buses.size());
  const int nodes = static_cast<int>(net.gas_nodes.size());
  const int pipes = static_cast<int>(net.pipelines.size());
  const int stores = static_cast<int>(net.storages.size());
  auto set = [&](Family f, int n) { counts_[static_cast<int>(f)] = n; };
  set(Family::kPdf, gens);
  set(Family::kPg, static_cast<int>(net.wells.size()));
  set(Family::kNp, buses);
  set(Family::kNg, nodes);
  set(Family::kSto, stores);
  set(Family::kSti, stores);
  set(Family::kWc, static_cast<int>(net.wind_farms.size()));
  set(Family::kPf, static_cast<int>(net.branches.size()));
  set(Family::kTheta, buses);
  set(Family::kSl, stores);
  set(Family::kPi, nodes);
  set(Family::kPiAvg, pipes);
  set(Family::kM, pipes);
  set(Family::kGfo, pipes);
  set(Family::kGfi, pipes);
  set(Family::kGf, pipes);
  int next = num_commit();
  offsets_.resize(static_cast<size_t>(scenarios) * kFamilies);
  for (int sc = 0; sc < scenarios; ++sc) {
    for (int f = 0; f < kFamilies; ++f) {
      offsets_[sc * kFamilies + f] = next;
      next += counts_[f] * horizon_;
    }
  }
  num_cols_ = next;
}

bool DecisionCatalog::Locate(int col, Family* f, int* entity, int* t, int* sc) const {
  if (col < num_commit() || col >= num_cols_) return false;
  // Last block whose offset is <= col.
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), col);
  int block = static_cast<int>(it - offsets_.begin()) - 1;
  // Skip empty families sharing the same offset.
  while (block > 0 && counts_[block % kFamilies] == 0) --block;
  const int local = col - offsets_[block];
  *sc = block / kFamilies;
  *f = static_cast<Family>(block % kFamilies);
  *entity = local / horizon_;
  *t = local % horizon_;
  return true;
}

double DefaultGamma(const IesNetwork& net) {
  if (net.wells.empty()) return 0.0;
  double sum = 0.0;
  for (const GasWell& w : net.wells) sum += w.cost;
  return 1e-3 * sum / net.wells.size();
}

ModelInstance NewModel(const IesNetwork& net, const ScenarioSet& scenarios,
                       std::vector<int> scenario_ids, std::vector<double> weights,
                       const ModelOptions& options) {
  if (scenario_ids.size() != weights.size()) {
    throw DataError("one weight per model scenario is required");
  }
  ModelInstance model;
  model.catalog = DecisionCatalog(net, static_cast<int>(scenario_ids.size()));
  model.scenario_ids = std::move(scenario_ids);
  model.weights = std::move(weights);
  model.gamma = options.gamma < 0 ? DefaultGamma(net) : options.gamma;
  model.terminal = options.terminal;
  const DecisionCatalog& cat = model.catalog;
  solver::ConicProgram& p = model.program;
  p.col_lower.assign(cat.num_cols(), 0.0);
  p.col_upper.assign(cat.num_cols(), kInfinity);
  p.objective.assign(cat.num_cols(), 0.0);
  p.is_integer.assign(cat.num_cols(), 0);
  for (int sid : model.scenario_ids) {
    if (sid < 0 || sid >= static_cast<int>(scenarios.scenarios.size())) {
      throw DataError("scenario index out of range");
    }
  }
  const std::vector<int> farm_col = FarmColumns(net, scenarios);
  const std::vector<int> islands = PowerIslands(net);
  const int T = net.horizon;

  auto bound = [&](int col, double lo, double hi) {
    p.col_lower[col] = lo;
    p.col_upper[col] = hi;
  };
  for (size_t i = 0; i < net.generators.size(); ++i) {
    for (int t = 0; t < T; ++t) {
      const int col = cat.Commit(static_cast<int>(i), t);
      bound(col, 0.0, 1.0);
      p.is_integer[col] = options.relax_integrality ? 0 : 1;
    }
  }
  for (int sc = 0; sc < cat.scenarios(); ++sc) {
    const int sid = model.scenario_ids[sc];
    for (int t = 0; t < T; ++t) {
      for (size_t i = 0; i < net.generators.size(); ++i) {
        const Generator& g = net.generators[i];
        bound(cat.Col(Family::kPdf, i, t, sc), 0.0, g.p_max - g.p_min);
      }
      for (size_t w = 0; w < net.wells.size(); ++w) {
        bound(cat.Col(Family::kPg, w, t, sc), net.wells[w].output_min, net.wells[w].output_max);
      }
      for (size_t s = 0; s < net.storages.size(); ++s) {
        const GasStorage& st = net.storages[s];
        bound(cat.Col(Family::kSto, s, t, sc), 0.0, st.withdraw_max);
        bound(cat.Col(Family::kSti, s, t, sc), 0.0, st.inject_max);
        bound(cat.Col(Family::kSl, s, t, sc), st.level_min, st.level_max);
      }
      for (size_t w = 0; w < net.wind_farms.size(); ++w) {
        bound(cat.Col(Family::kWc, w, t, sc), 0.0, WindAvailable(scenarios, farm_col, w, sid, t));
      }
      for (size_t b = 0; b < net.branches.size(); ++b) {
        const double cap = net.branches[b].capacity;
        bound(cat.Col(Family::kPf, b, t, sc), -cap, cap);
      }
      std::vector<char> island_has_ref(net.buses.size(), 0);
      for (size_t l = 0; l < net.buses.size(); ++l) {
        const int col = cat.Col(Family::kTheta, l, t, sc);
        if (!island_has_ref[islands[l]]) {
          island_has_ref[islands[l]] = 1;
          bound(col, 0.0, 0.0);
        } else {
          bound(col, -kInfinity, kInfinity);
        }
      }
      for (size_t n = 0; n < net.gas_nodes.size(); ++n) {
        const GasNode& node = net.gas_nodes[n];
        bound(cat.Col(Family::kPi, n, t, sc), node.pressure_min, node.pressure_max);
      }
      for (size_t q = 0; q < net.pipelines.size(); ++q) {
        bound(cat.Col(Family::kPiAvg, q, t, sc), -kInfinity, kInfinity);
        bound(cat.Col(Family::kM, q, t, sc), -kInfinity, kInfinity);
        bound(cat.Col(Family::kGfo, q, t, sc), -kInfinity, kInfinity);
        bound(cat.Col(Family::kGfi, q, t, sc), -kInfinity, kInfinity);
        bound(cat.Col(Family::kGf, q, t, sc), -kInfinity, kInfinity);
      }
    }
  }
  return model;
}

void BuildObjective(const IesNetwork& net, const FlowDirectionMap& dirs, double gamma,
                    ModelInstance& model) {
  const DecisionCatalog& cat = model.catalog;
  std::vector<double>& obj = model.program.objective;
  std::fill(obj.begin(), obj.end(), 0.0);
  model.program.objective_offset = 0.0;
  const int T = net.horizon;
  const Incidence inc(net);
  if (gamma != 0.0 && !net.pipelines.empty() && dirs.sign.empty()) {
    throw DataError("pressure penalty needs a flow direction map");
  }
  for (int sc = 0; sc < cat.scenarios(); ++sc) {
    const double w = model.weights[sc];
    const int sid = model.scenario_ids[sc];
    for (int t = 0; t < T; ++t) {
      for (size_t i = 0; i < net.generators.size(); ++i) {
        const Generator& g = net.generators[i];
        obj[cat.Commit(i, t)] += w * g.cost * g.p_min;
        obj[cat.Col(Family::kPdf, i, t, sc)] += w * g.cost;
      }
      for (size_t k = 0; k < net.wells.size(); ++k) {
        obj[cat.Col(Family::kPg, k, t, sc)] += w * net.wells[k].cost;
      }
      for (size_t s = 0; s < net.storages.size(); ++s) {
        obj[cat.Col(Family::kSto, s, t, sc)] += w * net.storages[s].withdraw_cost;
      }
      for (size_t l = 0; l < net.buses.size(); ++l) {
        obj[cat.Col(Family::kNp, l, t, sc)] += w * net.buses[l].unserved_cost;
      }
      for (size_t n = 0; n < net.gas_nodes.size(); ++n) {
        obj[cat.Col(Family::kNg, n, t, sc)] += w * net.gas_nodes[n].unserved_cost;
      }
      for (size_t k = 0; k < net.wind_farms.size(); ++k) {
        obj[cat.Col(Family::kWc, k, t, sc)] += w * net.wind_farms[k].curtailment_cost;
      }
      if (gamma == 0.0) continue;
      for (size_t q = 0; q < net.pipelines.size(); ++q) {
        const int sign = dirs.At(sid, q, t);
        obj[cat.Col(Family::kPi, inc.pipe_from[q], t, sc)] += sign * gamma * w;
        obj[cat.Col(Family::kPi, inc.pipe_to[q], t, sc)] -= sign * gamma * w;
      }
    }
  }
}

void AddPowerConstraints(const IesNetwork& net, const ScenarioSet& scenarios,
                         ModelInstance& model) {
  const DecisionCatalog& cat = model.catalog;
  solver::ConicProgram& p = model.program;
  const Incidence inc(net);
  const std::vector<int> farm_col = FarmColumns(net, scenarios);
  const int T = net.horizon;
  for (int sc = 0; sc < cat.scenarios(); ++sc) {
    const int sid = model.scenario_ids[sc];
    for (size_t i = 0; i < net.generators.size(); ++i) {
      const Generator& g = net.generators[i];
      for (int t = 0; t < T; ++t) {
        // pdf <= (P_max - P_min) c
        LinearRow cap = Row("capacity", -kInfinity, 0.0);
        cap.Add(cat.Col(Family::kPdf, i, t, sc), 1.0);
        cap.Add(cat.Commit(i, t), -(g.p_max - g.p_min));
        p.AddRow(std::move(cap));
        // -RD <= pd_t - pd_{t-1} <= RU, pd = P_min c + pdf
        LinearRow ramp = Row("ramp", -g.ramp_down, g.ramp_up);
        ramp.Add(cat.Commit(i, t), g.p_min);
        ramp.Add(cat.Col(Family::kPdf, i, t, sc), 1.0);
        if (t == 0) {
          ramp.lower += g.InitialOutput();
          ramp.upper += g.InitialOutput();
        } else {
          ramp.Add(cat.Commit(i, t - 1), -g.p_min);
          ramp.Add(cat.Col(Family::kPdf, i, t - 1, sc), -1.0);
        }
        p.AddRow(std::move(ramp));
      }
    }
    for (int t = 0; t < T; ++t) {
      for (size_t b = 0; b < net.branches.size(); ++b) {
        const double x = net.branches[b].reactance;
        LinearRow flow = Row("line_flow", 0.0, 0.0);
        flow.Add(cat.Col(Family::kPf, b, t, sc), 1.0);
        flow.Add(cat.Col(Family::kTheta, inc.branch_from[b], t, sc), -1.0 / x);
        flow.Add(cat.Col(Family::kTheta, inc.branch_to[b], t, sc), 1.0 / x);
        p.AddRow(std::move(flow));
      }
      for (size_t l = 0; l < net.buses.size(); ++l) {
        double rhs = net.buses[l].demand[t];
        LinearRow bal;
        bal.tag = "power_balance";
        for (size_t i = 0; i < net.generators.size(); ++i) {
          if (inc.gen_bus[i] != static_cast<int>(l)) continue;
          bal.Add(cat.Commit(i, t), net.generators[i].p_min);
          bal.Add(cat.Col(Family::kPdf, i, t, sc), 1.0);
        }
        for (size_t k = 0; k < net.wind_farms.size(); ++k) {
          if (inc.farm_bus[k] != static_cast<int>(l)) continue;
          rhs -= WindAvailable(scenarios, farm_col, k, sid, t);
          bal.Add(cat.Col(Family::kWc, k, t, sc), -1.0);
        }
        for (size_t b = 0; b < net.branches.size(); ++b) {
          if (inc.branch_to[b] == static_cast<int>(l)) bal.Add(cat.Col(Family::kPf, b, t, sc), 1.0);
          if (inc.branch_from[b] == static_cast<int>(l)) {
            bal.Add(cat.Col(Family::kPf, b, t, sc), -1.0);
          }
        }
        bal.Add(cat.Col(Family::kNp, l, t, sc), 1.0);
        bal.lower = bal.upper = rhs;
        p.AddRow(std::move(bal));
      }
    }
  }
}

void AddGasConstraints(const IesNetwork& net, ModelInstance& model) {
  const DecisionCatalog& cat = model.catalog;
  solver::ConicProgram& p = model.program;
  const Incidence inc(net);
  const int T = net.horizon;
  for (int sc = 0; sc < cat.scenarios(); ++sc) {
    for (int t = 0; t < T; ++t) {
      // sl_t = sl_{t-1} + sti_t - sto_t
      for (size_t s = 0; s < net.storages.size(); ++s) {
        LinearRow level = Row("storage_level", 0.0, 0.0);
        level.Add(cat.Col(Family::kSl, s, t, sc), 1.0);
        level.Add(cat.Col(Family::kSti, s, t, sc), -1.0);
        level.Add(cat.Col(Family::kSto, s, t, sc), 1.0);
        if (t == 0) {
          level.lower = level.upper = net.storages[s].initial_level;
        } else {
          level.Add(cat.Col(Family::kSl, s, t - 1, sc), -1.0);
        }
        p.AddRow(std::move(level));
      }
      // pi_q <= pi_j <= CM pi_q
      for (size_t c = 0; c < net.compressors.size(); ++c) {
        const int q = cat.Col(Family::kPi, inc.comp_from[c], t, sc);
        const int j = cat.Col(Family::kPi, inc.comp_to[c], t, sc);
        LinearRow low = Row("compressor", 0.0, kInfinity);
        low.Add(j, 1.0);
        low.Add(q, -1.0);
        p.AddRow(std::move(low));
        LinearRow high = Row("compressor", -kInfinity, 0.0);
        high.Add(j, 1.0);
        high.Add(q, -net.compressors[c].factor);
        p.AddRow(std::move(high));
      }
      for (size_t n = 0; n < net.gas_nodes.size(); ++n) {
        const int node = static_cast<int>(n);
        LinearRow bal = Row("gas_balance", net.gas_nodes[n].demand[t], net.gas_nodes[n].demand[t]);
        for (size_t q = 0; q < net.pipelines.size(); ++q) {
          if (inc.pipe_to[q] == node) bal.Add(cat.Col(Family::kGfo, q, t, sc), 1.0);
          if (inc.pipe_from[q] == node) bal.Add(cat.Col(Family::kGfi, q, t, sc), -1.0);
        }
        for (size_t s = 0; s < net.storages.size(); ++s) {
          if (inc.storage_node[s] != node) continue;
          bal.Add(cat.Col(Family::kSto, s, t, sc), 1.0);
          bal.Add(cat.Col(Family::kSti, s, t, sc), -1.0);
        }
        for (size_t k = 0; k < net.wells.size(); ++k) {
          if (inc.well_node[k] == node) bal.Add(cat.Col(Family::kPg, k, t, sc), 1.0);
        }
        for (size_t i = 0; i < net.generators.size(); ++i) {
          if (inc.gen_node[i] != node) continue;
          const Generator& g = net.generators[i];
          bal.Add(cat.Commit(i, t), -g.gas_to_power * g.p_min);
          bal.Add(cat.Col(Family::kPdf, i, t, sc), -g.gas_to_power);
        }
        bal.Add(cat.Col(Family::kNg, n, t, sc), 1.0);
        p.AddRow(std::move(bal));
      }
    }
  }
}

void AddLinepackConstraints(const IesNetwork& net, LinepackTerminal terminal,
                            ModelInstance& model) {
  const DecisionCatalog& cat = model.catalog;
  solver::ConicProgram& p = model.program;
  const Incidence inc(net);
  const int T = net.horizon;
  for (int sc = 0; sc < cat.scenarios(); ++sc) {
    for (size_t q = 0; q < net.pipelines.size(); ++q) {
      const Pipeline& pipe = net.pipelines[q];
      const double k = LinepackCoefficient(pipe, net.constants);
      const double m0 = InitialLinepack(net, pipe);
      for (int t = 0; t < T; ++t) {
        LinearRow avg = Row("linepack", 0.0, 0.0);
        avg.Add(cat.Col(Family::kPiAvg, q, t, sc), 1.0);
        avg.Add(cat.Col(Family::kPi, inc.pipe_from[q], t, sc), -0.5);
        avg.Add(cat.Col(Family::kPi, inc.pipe_to[q], t, sc), -0.5);
        p.AddRow(std::move(avg));
        LinearRow mass = Row("linepack", 0.0, 0.0);
        mass.Add(cat.Col(Family::kM, q, t, sc), 1.0);
        mass.Add(cat.Col(Family::kPiAvg, q, t, sc), -k);
        p.AddRow(std::move(mass));
        // m_t = m_{t-1} + gfi_t - gfo_t
        LinearRow dyn = Row("linepack_dynamics", 0.0, 0.0);
        dyn.Add(cat.Col(Family::kM, q, t, sc), 1.0);
        dyn.Add(cat.Col(Family::kGfi, q, t, sc), -1.0);
        dyn.Add(cat.Col(Family::kGfo, q, t, sc), 1.0);
        if (t == 0) {
          dyn.lower = dyn.upper = m0;
        } else {
          dyn.Add(cat.Col(Family::kM, q, t - 1, sc), -1.0);
        }
        p.AddRow(std::move(dyn));
        LinearRow mean = Row("mean_flow", 0.0, 0.0);
        mean.Add(cat.Col(Family::kGf, q, t, sc), 1.0);
        mean.Add(cat.Col(Family::kGfo, q, t, sc), -0.5);
        mean.Add(cat.Col(Family::kGfi, q, t, sc), -0.5);
        p.AddRow(std::move(mean));
      }
    }
    if (net.pipelines.empty()) continue;
    double total0 = 0.0;
    LinearRow end = Row("linepack_terminal", 0.0, 0.0);
    for (size_t q = 0; q < net.pipelines.size(); ++q) {
      total0 += InitialLinepack(net, net.pipelines[q]);
      end.Add(cat.Col(Family::kM, q, T - 1, sc), 1.0);
    }
    end.lower = total0;
    end.upper = terminal == LinepackTerminal::kEqual ? total0 : kInfinity;
    p.AddRow(std::move(end));
  }
}

void RelaxWeymouth(const IesNetwork& net, const FlowDirectionMap& dirs, ModelInstance& model) {
  const DecisionCatalog& cat = model.catalog;
  solver::ConicProgram& p = model.program;
  const Incidence inc(net);
  const int T = net.horizon;
  for (int sc = 0; sc < cat.scenarios(); ++sc) {
    const int sid = model.scenario_ids[sc];
    for (size_t q = 0; q < net.pipelines.size(); ++q) {
      const double cont = inc.cont[q];
      for (int t = 0; t < T; ++t) {
        const int gf = cat.Col(Family::kGf, q, t, sc);
        const int pc = cat.Col(Family::kPi, inc.pipe_from[q], t, sc);
        const int pd = cat.Col(Family::kPi, inc.pipe_to[q], t, sc);
        const bool forward = dirs.At(sid, q, t) > 0;
        const int up = forward ? pc : pd;
        const int down = forward ? pd : pc;
        // ||(gf, CONT pi_down)|| <= CONT pi_up
        ConeRow cone;
        cone.tag = "weymouth";
        AffineExpr flow, low_end, high_end;
        flow.Add(gf, 1.0);
        low_end.Add(down, cont);
        high_end.Add(up, cont);
        cone.members = {flow, low_end};
        cone.bound = high_end;
        p.AddCone(std::move(cone));
        // gf >= CONT (pi_c - pi_d) forward, <= for reverse flow
        LinearRow cut =
            forward ? Row("weymouth_cut", 0.0, kInfinity) : Row("weymouth_cut", -kInfinity, 0.0);
        cut.Add(gf, 1.0);
        cut.Add(pc, -cont);
        cut.Add(pd, cont);
        p.AddRow(std::move(cut));
      }
    }
  }
}

ModelInstance BuildScenarioModel(const IesNetwork& net, const ScenarioSet& scenarios,
                                 const std::vector<int>& scenario_ids,
                                 const std::vector<double>& weights, const FlowDirectionMap& dirs,
                                 const ModelOptions& options) {
  ModelInstance model = NewModel(net, scenarios, scenario_ids, weights, options);
  const double gamma = options.omit_weymouth ? 0.0 : model.gamma;
  model.gamma = gamma;
  BuildObjective(net, dirs, gamma, model);
  AddPowerConstraints(net, scenarios, model);
  AddGasConstraints(net, model);
  AddLinepackConstraints(net, options.terminal, model);
  if (!options.omit_weymouth) {
    if (!net.pipelines.empty() &&
        (dirs.scenarios != static_cast<int>(scenarios.scenarios.size()) ||
         dirs.pipelines != static_cast<int>(net.pipelines.size()) || dirs.horizon != net.horizon)) {
      throw DataError("flow direction map does not match the instance");
    }
    RelaxWeymouth(net, dirs, model);
  }
  return model;
}

ModelInstance BuildExtensiveModel(const IesNetwork& net, const ScenarioSet& scenarios,
                                  const FlowDirectionMap& dirs, const ModelOptions& options) {
  std::vector<int> ids;
  std::vector<double> weights;
  for (size_t s = 0; s < scenarios.scenarios.size(); ++s) {
    ids.push_back(static_cast<int>(s));
    weights.push_back(scenarios.scenarios[s].probability);
  }
  return BuildScenarioModel(net, scenarios, ids, weights, dirs, options);
}

FlowDirectionMap DetermineFlowDirections(const IesNetwork& net, const ScenarioSet& scenarios,
                                         const ModelOptions& options) {
  ModelOptions lp_options = options;
  lp_options.omit_weymouth = true;
  lp_options.relax_integrality = true;
  ModelInstance model = BuildExtensiveModel(net, scenarios, FlowDirectionMap(), lp_options);
  // Pipelines carry steady flow here (gfo = gfi, no linepack rows): with the
  // pressure-flow link gone, free pipe storage would let the LP pick reverse
  // flows that only shuffle gas in and out of a pipe.
  std::erase_if(model.program.rows, [](const solver::LinearRow& row) {
    return row.tag == "linepack" || row.tag == "linepack_dynamics" ||
           row.tag == "linepack_terminal";
  });
  const DecisionCatalog& cat = model.catalog;
  for (int sc = 0; sc < cat.scenarios(); ++sc) {
    for (size_t q = 0; q < net.pipelines.size(); ++q) {
      for (int t = 0; t < net.horizon; ++t) {
        solver::LinearRow steady;
        steady.lower = steady.upper = 0.0;
        steady.tag = "steady";
        steady.Add(cat.Col(Family::kGfo, q, t, sc), 1.0);
        steady.Add(cat.Col(Family::kGfi, q, t, sc), -1.0);
        model.program.AddRow(std::move(steady));
      }
    }
  }
  const solver::SolveResult r = solver::SolveLp(model.program);
  if (r.status != solver::SolveStatus::kOptimal) {
    throw DataError(std::string("flow-direction model is ") + solver::ToString(r.status) +
                    "; the network data are inconsistent");
  }
  FlowDirectionMap dirs(static_cast<int>(scenarios.scenarios.size()),
                        static_cast<int>(net.pipelines.size()), net.horizon);
  for (int sc = 0; sc < model.catalog.scenarios(); ++sc) {
    for (size_t q = 0; q < net.pipelines.size(); ++q) {
      for (int t = 0; t < net.horizon; ++t) {
        const double gf = r.values[model.catalog.Col(Family::kGf, q, t, sc)];
        dirs.At(model.scenario_ids[sc], q, t) = (std::abs(gf) < kDirectionZero || gf > 0) ? 1 : -1;
      }
    }
  }
  return dirs;
}

double WeymouthResidual(double gf, double pi_from, double pi_to, double cont, double pi_max) {
  const double c2 = cont * cont;
  const double scale = std::max(c2 * pi_max * pi_max, 1e-12);
  return std::abs(gf * std::abs(gf) - c2 * (pi_from * pi_from - pi_to * pi_to)) / scale;
}

RelaxationAudit AuditRelaxation(const IesNetwork& net, const ModelInstance& model,
                                std::span<const double> values) {
  const DecisionCatalog& cat = model.catalog;
  const Incidence inc(net);
  RelaxationAudit audit;
  double sum = 0.0;
  for (int sc = 0; sc < cat.scenarios(); ++sc) {
    for (size_t q = 0; q < net.pipelines.size(); ++q) {
      const double pi_max = std::max(net.gas_nodes[inc.pipe_from[q]].pressure_max,
                                     net.gas_nodes[inc.pipe_to[q]].pressure_max);
      for (int t = 0; t < net.horizon; ++t) {
        const double r = WeymouthResidual(values[cat.Col(Family::kGf, q, t, sc)],
                                          values[cat.Col(Family::kPi, inc.pipe_from[q], t, sc)],
                                          values[cat.Col(Family::kPi, inc.pipe_to[q], t, sc)],
                                          inc.cont[q], pi_max);
        audit.residual.push_back(r);
        audit.max_residual = std::max(audit.max_residual, r);
        sum += r;
      }
    }
  }
  if (!audit.residual.empty()) audit.mean_residual = sum / audit.residual.size();
  return audit;
}

ConservationAudit AuditConservation(const IesNetwork& net, const ScenarioSet& scenarios,
                                    const ModelInstance& model, std::span<const double> values) {
  const DecisionCatalog& cat = model.catalog;
  const Incidence inc(net);
  const std::vector<int> farm_col = FarmColumns(net, scenarios);
  const int T = net.horizon;
  ConservationAudit audit;
  auto v = [&](Family f, size_t e, int t, int sc) { return values[cat.Col(f, e, t, sc)]; };
  for (int sc = 0; sc < cat.scenarios(); ++sc) {
    const int sid = model.scenario_ids[sc];
    double energy = 0.0;
    for (int t = 0; t < T; ++t) {
      std::vector<double> bus(net.buses.size(), 0.0);
      for (size_t l = 0; l < net.buses.size(); ++l)
        bus[l] = v(Family::kNp, l, t, sc) - net.buses[l].demand[t];
      for (size_t i = 0; i < net.generators.size(); ++i) {
        const double pd =
            values[cat.Commit(i, t)] * net.generators[i].p_min + v(Family::kPdf, i, t, sc);
        bus[inc.gen_bus[i]] += pd;
      }
      for (size_t k = 0; k < net.wind_farms.size(); ++k) {
        bus[inc.farm_bus[k]] +=
            WindAvailable(scenarios, farm_col, k, sid, t) - v(Family::kWc, k, t, sc);
      }
      double net_injection = 0.0;
      for (double b : bus) net_injection += b;
      energy += net_injection;
      for (size_t b = 0; b < net.branches.size(); ++b) {
        const double f = v(Family::kPf, b, t, sc);
        bus[inc.branch_to[b]] += f;
        bus[inc.branch_from[b]] -= f;
      }
      for (double b : bus) audit.bus_residual = std::max(audit.bus_residual, std::abs(b));

      std::vector<double> node(net.gas_nodes.size(), 0.0);
      for (size_t n = 0; n < net.gas_nodes.size(); ++n) {
        node[n] = v(Family::kNg, n, t, sc) - net.gas_nodes[n].demand[t];
      }
      for (size_t k = 0; k < net.wells.size(); ++k)
        node[inc.well_node[k]] += v(Family::kPg, k, t, sc);
      for (size_t s = 0; s < net.storages.size(); ++s) {
        node[inc.storage_node[s]] += v(Family::kSto, s, t, sc) - v(Family::kSti, s, t, sc);
      }
      for (size_t q = 0; q < net.pipelines.size(); ++q) {
        node[inc.pipe_to[q]] += v(Family::kGfo, q, t, sc);
        node[inc.pipe_from[q]] -= v(Family::kGfi, q, t, sc);
      }
      for (size_t i = 0; i < net.generators.size(); ++i) {
        if (inc.gen_node[i] < 0) continue;
        const Generator& g = net.generators[i];
        const double pd = values[cat.Commit(i, t)] * g.p_min + v(Family::kPdf, i, t, sc);
        node[inc.gen_node[i]] -= g.gas_to_power * pd;
      }
      for (double n : node) audit.gas_residual = std::max(audit.gas_residual, std::abs(n));
    }
    audit.energy_residual.push_back(energy);
    for (size_t s = 0; s < net.storages.size(); ++s) {
      double level = net.storages[s].initial_level;
      for (int t = 0; t < T; ++t) level += v(Family::kSti, s, t, sc) - v(Family::kSto, s, t, sc);
      audit.storage_residual =
          std::max(audit.storage_residual, std::abs(v(Family::kSl, s, T - 1, sc) - level));
    }
    if (!net.pipelines.empty()) {
      double m0 = 0.0, mT = 0.0;
      for (size_t q = 0; q < net.pipelines.size(); ++q) {
        m0 += InitialLinepack(net, net.pipelines[q]);
        mT += v(Family::kM, q, T - 1, sc);
      }
      const double violation =
          model.terminal == LinepackTerminal::kEqual ? std::abs(mT - m0) : std::max(0.0, m0 - mT);
      audit.linepack_residual = std::max(audit.linepack_residual, violation);
    }
  }
  return audit;
}

CostBreakdown EvaluateCosts(const IesNetwork& net, const FlowDirectionMap& dirs,
                            const ModelInstance& model, std::span<const double> values) {
  const DecisionCatalog& cat = model.catalog;
  const Incidence inc(net);
  CostBreakdown cost;
  auto v = [&](Family f, size_t e, int t, int sc) { return values[cat.Col(f, e, t, sc)]; };
  for (int sc = 0; sc < cat.scenarios(); ++sc) {
    const double w = model.weights[sc];
    const int sid = model.scenario_ids[sc];
    for (int t = 0; t < net.horizon; ++t) {
      double production = 0.0, gas = 0.0, unserved = 0.0, penalty = 0.0;
      for (size_t i = 0; i < net.generators.size(); ++i) {
        const Generator& g = net.generators[i];
        production += g.cost * (g.p_min * values[cat.Commit(i, t)] + v(Family::kPdf, i, t, sc));
      }
      for (size_t k = 0; k < net.wells.size(); ++k)
        gas += net.wells[k].cost * v(Family::kPg, k, t, sc);
      for (size_t s = 0; s < net.storages.size(); ++s) {
        gas += net.storages[s].withdraw_cost * v(Family::kSto, s, t, sc);
      }
      for (size_t l = 0; l < net.buses.size(); ++l) {
        unserved += net.buses[l].unserved_cost * v(Family::kNp, l, t, sc);
      }
      for (size_t n = 0; n < net.gas_nodes.size(); ++n) {
        unserved += net.gas_nodes[n].unserved_cost * v(Family::kNg, n, t, sc);
      }
      for (size_t k = 0; k < net.wind_farms.size(); ++k) {
        unserved += net.wind_farms[k].curtailment_cost * v(Family::kWc, k, t, sc);
      }
      if (model.gamma != 0.0) {
        for (size_t q = 0; q < net.pipelines.size(); ++q) {
          const double drop =
              v(Family::kPi, inc.pipe_from[q], t, sc) - v(Family::kPi, inc.pipe_to[q], t, sc);
          penalty += model.gamma * dirs.At(sid, q, t) * drop;
        }
      }
      cost.production += w * production;
      cost.gas_supply += w * gas;
      cost.unserved += w * unserved;
      cost.penalty += w * penalty;
    }
  }
  return cost;
}

std::string ColumnName(const IesNetwork& net, const ModelInstance& model, int col) {
  const DecisionCatalog& cat = model.catalog;
  if (col < cat.num_commit()) {
    const int i = col / cat.horizon();
    return "c[" + net.generators[i].id + ",t" + std::to_string(col % cat.horizon() + 1) + "]";
  }
  Family f;
  int e, t, sc;
  if (!cat.Locate(col, &f, &e, &t, &sc)) return "x" + std::to_string(col);
  std::string entity;
  switch (f) {
    case Family::kPdf:
      entity = net.generators[e].id;
      break;
    case Family::kPg:
      entity = net.wells[e].id;
      break;
    case Family::kNp:
    case Family::kTheta:
      entity = net.buses[e].id;
      break;
    case Family::kNg:
    case Family::kPi:
      entity = net.gas_nodes[e].id;
      break;
    case Family::kSto:
    case Family::kSti:
    case Family::kSl:
      entity = net.storages[e].id;
      break;
    case Family::kWc:
      entity = net.wind_farms[e].id;
      break;
    case Family::kPf:
      entity = net.branches[e].id;
      break;
    default:
      entity = net.pipelines[e].id;
      break;
  }
  return std::string(FamilyName(f)) + "[" + entity + ",t" + std::to_string(t + 1) + ",sc" +
         std::to_string(model.scenario_ids[sc]) + "]";
}

void ExportModel(const IesNetwork& net, const ModelInstance& model, std::ostream& out) {
  solver::ConicProgram named = model.program;
  named.col_names.resize(named.num_cols());
  for (int j = 0; j < named.num_cols(); ++j) named.col_names[j] = ColumnName(net, model, j);
  solver::WriteProgram(named, out);
}

}  // namespace iesuc
