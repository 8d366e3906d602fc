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

#include "outputs.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace iesuc::cli {
namespace {

std::ofstream OpenOutput(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

const std::string& EntityId(const IesNetwork& net, Family f, int e) {
  switch (f) {
    case Family::kPdf:
      return net.generators[e].id;
    case Family::kPg:
      return net.wells[e].id;
    case Family::kNp:
    case Family::kTheta:
      return net.buses[e].id;
    case Family::kNg:
    case Family::kPi:
      return net.gas_nodes[e].id;
    case Family::kSto:
    case Family::kSti:
    case Family::kSl:
      return net.storages[e].id;
    case Family::kWc:
      return net.wind_farms[e].id;
    case Family::kPf:
      return net.branches[e].id;
    default:
      return net.pipelines[e].id;
  }
}

const char* TerminalName(LinepackTerminal t) {
  return t == LinepackTerminal::kEqual ? "equal" : "at_least";
}

void WriteCommitment(const std::filesystem::path& path, const IesNetwork& net,
                     const std::vector<double>& c) {
  std::ofstream out = OpenOutput(path);
  out << "unit";
  for (int t = 0; t < net.horizon; ++t) out << "\tt" << t + 1;
  out << '\n';
  for (size_t i = 0; i < net.generators.size(); ++i) {
    out << net.generators[i].id;
    for (int t = 0; t < net.horizon; ++t) out << '\t' << (c[i * net.horizon + t] > 0.5 ? 1 : 0);
    out << '\n';
  }
}

void WriteDispatch(const std::filesystem::path& path, const IesNetwork& net,
                   const ModelInstance& model, const std::vector<double>& values) {
  const DecisionCatalog& cat = model.catalog;
  std::ofstream out = OpenOutput(path);
  out << "variable\tentity\tt\tvalue\n";
  for (size_t i = 0; i < net.generators.size(); ++i) {
    const Generator& g = net.generators[i];
    for (int t = 0; t < net.horizon; ++t) {
      const double pd = values[cat.Commit(i, t)] * g.p_min + values[cat.Col(Family::kPdf, i, t, 0)];
      out << "pd\t" << g.id << '\t' << t + 1 << '\t' << Num(pd) << '\n';
    }
  }
  for (int f = 0; f < static_cast<int>(Family::kCount); ++f) {
    const Family family = static_cast<Family>(f);
    for (int e = 0; e < cat.EntityCount(family); ++e) {
      for (int t = 0; t < net.horizon; ++t) {
        out << FamilyName(family) << '\t' << EntityId(net, family, e) << '\t' << t + 1 << '\t'
            << Num(values[cat.Col(family, e, t, 0)]) << '\n';
      }
    }
  }
}

void CostColumns(std::ostream& out, const CostBreakdown& k) {
  out << '\t' << Num(k.production) << '\t' << Num(k.gas_supply) << '\t' << Num(k.unserved) << '\t'
      << Num(k.penalty) << '\t' << Num(k.Cost()) << '\t' << Num(k.Objective()) << '\n';
}

void WriteCosts(const std::filesystem::path& path, const Problem& problem,
                const HedgingResult& result) {
  std::ofstream out = OpenOutput(path);
  out << "scenario\tprobability\tproduction\tgas_supply\tunserved\tpenalty\tcost\tobjective\n";
  const auto& dispatch = result.evaluation.dispatch;
  for (size_t sc = 0; sc < dispatch.size(); ++sc) {
    out << sc << '\t' << Num(problem.scenarios->scenarios[sc].probability);
    CostColumns(out, dispatch[sc].cost);
  }
  out << "expected\t1";
  CostColumns(out, result.evaluation.expected);
}

void WriteTrace(const std::filesystem::path& path, const Problem& problem,
                const HedgingResult& result) {
  const IesNetwork& net = *problem.net;
  const ModelInstance& model = problem.scenario_models.front();
  std::ofstream out = OpenOutput(path);
  out << "iteration\tind\tconservation_error";
  for (size_t sc = 0; sc < problem.scenario_models.size(); ++sc) out << "\tobjective_sc" << sc;
  for (int j = 0; j < problem.num_commit(); ++j) out << "\tcbar_" << ColumnName(net, model, j);
  out << '\n';
  for (const PhTraceRow& row : result.trace) {
    out << row.iteration << '\t' << row.ind << '\t' << Num(row.conservation_error);
    for (double v : row.scenario_objective) out << '\t' << Num(v);
    for (double v : row.cbar) out << '\t' << Num(v);
    out << '\n';
  }
}

double WriteAudit(const std::filesystem::path& path, const Problem& problem,
                  const HedgingResult& result) {
  std::ofstream out = OpenOutput(path);
  out << "scenario\tbus_residual\tgas_residual\tstorage_residual\tlinepack_residual\t"
         "energy_residual\tweymouth_max\tweymouth_mean\n";
  double worst = 0.0;
  const auto& dispatch = result.evaluation.dispatch;
  for (size_t sc = 0; sc < dispatch.size(); ++sc) {
    const ModelInstance& model = problem.scenario_models[sc];
    const ConservationAudit c =
        AuditConservation(*problem.net, *problem.scenarios, model, dispatch[sc].values);
    const RelaxationAudit w = AuditRelaxation(*problem.net, model, dispatch[sc].values);
    worst = std::max(worst, w.max_residual);
    out << sc << '\t' << Num(c.bus_residual) << '\t' << Num(c.gas_residual) << '\t'
        << Num(c.storage_residual) << '\t' << Num(c.linepack_residual) << '\t'
        << Num(c.energy_residual.front()) << '\t' << Num(w.max_residual) << '\t'
        << Num(w.mean_residual) << '\n';
  }
  return worst;
}

void WriteSummary(const std::filesystem::path& path, const Problem& problem,
                  const HedgingResult& result, const PhOptions& ph, double weymouth_max) {
  const IesNetwork& net = *problem.net;
  const NonServed ns = SummarizeNonServed(problem, result);
  const CostBreakdown& k = result.evaluation.expected;
  const bool hedging = result.method == Method::kTph || result.method == Method::kMph;
  std::ofstream out = OpenOutput(path);
  auto row = [&](const std::string& key, const std::string& value) {
    out << key << '\t' << value << '\n';
  };
  out << "key\tvalue\n";
  row("instance", net.name);
  row("network_fingerprint", Fingerprint(SerializeNetwork(net)));
  row("scenarios_fingerprint", Fingerprint(SerializeScenarios(*problem.scenarios)));
  row("scenarios", std::to_string(problem.scenario_models.size()));
  row("method", MethodName(result.method));
  row("status", solver::ToString(result.status));
  row("message", result.message);
  row("expected_cost", Num(k.Cost()));
  row("production_cost", Num(k.production));
  row("gas_supply_cost", Num(k.gas_supply));
  row("unserved_cost", Num(k.unserved));
  row("pressure_penalty", Num(k.penalty));
  row("objective", Num(k.Objective()));
  row("non_served_power_expected_gwh", Num(ns.expected_power));
  row("non_served_power_max_gwh", Num(ns.max_power));
  row("non_served_power_max_scenario", std::to_string(ns.max_power_scenario));
  row("non_served_gas_expected_msm3", Num(ns.expected_gas));
  row("weymouth_max_residual", Num(weymouth_max));
  if (hedging) {
    row("iterations", std::to_string(result.iterations));
    row("final_ind", std::to_string(result.final_ind));
    row("enumeration_cases", std::to_string(result.enumeration_cases));
    row("iteration_limit", result.iteration_limit ? "1" : "0");
    row("epsilon", std::to_string(ph.epsilon));
    row("kappa_coeff", Num(ph.kappa_coeff));
    row("post_average_update", ph.post_average_update ? "1" : "0");
  } else {
    row("nodes", std::to_string(result.nodes));
  }
  const ModelInstance& model = problem.scenario_models.front();
  row("gamma", Num(model.gamma));
  row("linepack_terminal", TerminalName(model.terminal));
  row("mip_gap", Num(problem.solver_options.mip_gap));
  row("backend", problem.backend);
  row("const_rho", Num(net.constants.density));
  row("const_F", Num(net.constants.friction));
  row("const_R", Num(net.constants.gas_constant));
  row("const_T", Num(net.constants.temperature));
  row("const_Z", Num(net.constants.compressibility));
}

void WriteTiming(const std::filesystem::path& path, const HedgingResult& result,
                 const PhaseTimes& times) {
  std::ofstream out = OpenOutput(path);
  out << "phase\tseconds\n";
  out << "load\t" << Num(times.load) << '\n';
  out << "formulation\t" << Num(times.formulation) << '\n';
  out << "solve\t" << Num(times.solve) << '\n';
  out << "total\t" << Num(times.load + times.formulation + times.solve) << '\n';
  for (const PhTraceRow& row : result.trace) {
    out << "iteration_" << row.iteration << '\t' << Num(row.wall_seconds) << '\n';
  }
  out << "workers\t" << times.workers << '\n';
}

double ParseDouble(const std::map<std::string, std::string>& kv, const std::string& key,
                   const std::filesystem::path& source) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw DataError(source.string() + ": missing '" + key + "'");
  char* end = nullptr;
  const double v = std::strtod(it->second.c_str(), &end);
  if (end == it->second.c_str() || *end != '\0') {
    throw DataError(source.string() + ": '" + key + "' is not a number");
  }
  return v;
}

}  // namespace

std::string Num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v + 0.0);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

NonServed SummarizeNonServed(const Problem& problem, const HedgingResult& result) {
  const IesNetwork& net = *problem.net;
  NonServed ns;
  const auto& dispatch = result.evaluation.dispatch;
  for (size_t sc = 0; sc < dispatch.size(); ++sc) {
    const DecisionCatalog& cat = problem.scenario_models[sc].catalog;
    const double p = problem.scenarios->scenarios[sc].probability;
    double power = 0.0, gas = 0.0;
    for (int t = 0; t < net.horizon; ++t) {
      for (size_t l = 0; l < net.buses.size(); ++l) {
        power += dispatch[sc].values[cat.Col(Family::kNp, l, t, 0)];
      }
      for (size_t n = 0; n < net.gas_nodes.size(); ++n) {
        gas += dispatch[sc].values[cat.Col(Family::kNg, n, t, 0)];
      }
    }
    ns.expected_power += p * power;
    ns.expected_gas += p * gas;
    if (power > ns.max_power) {
      ns.max_power = power;
      ns.max_power_scenario = static_cast<int>(sc);
    }
  }
  return ns;
}

void WriteSolveOutputs(const std::filesystem::path& dir, const Problem& problem,
                       const HedgingResult& result, const PhOptions& ph, const PhaseTimes& times) {
  std::filesystem::create_directories(dir);
  const IesNetwork& net = *problem.net;
  WriteCommitment(dir / "commitment.tsv", net, result.commitment);
  for (size_t sc = 0; sc < result.evaluation.dispatch.size(); ++sc) {
    WriteDispatch(dir / ("dispatch_sc" + std::to_string(sc) + ".tsv"), net,
                  problem.scenario_models[sc], result.evaluation.dispatch[sc].values);
  }
  WriteCosts(dir / "costs.tsv", problem, result);
  if (result.method == Method::kTph || result.method == Method::kMph) {
    WriteTrace(dir / "trace.tsv", problem, result);
  }
  const double weymouth_max = WriteAudit(dir / "audit.tsv", problem, result);
  WriteSummary(dir / "summary.tsv", problem, result, ph, weymouth_max);
  WriteTiming(dir / "timing.tsv", result, times);
}

std::map<std::string, std::string> ReadKeyValues(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) continue;
    kv[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return kv;
}

std::vector<CompareRow> CompareRuns(const std::vector<std::filesystem::path>& runs,
                                    std::string* reference) {
  if (runs.size() < 2) throw DataError("compare needs at least two runs");
  std::vector<CompareRow> rows;
  std::string network, scenarios;
  int ref = -1;
  for (const auto& dir : runs) {
    const auto summary = ReadKeyValues(dir / "summary.tsv");
    const auto timing = ReadKeyValues(dir / "timing.tsv");
    const std::string net_fp =
        summary.count("network_fingerprint") ? summary.at("network_fingerprint") : "";
    const std::string sc_fp =
        summary.count("scenarios_fingerprint") ? summary.at("scenarios_fingerprint") : "";
    if (rows.empty()) {
      network = net_fp;
      scenarios = sc_fp;
    } else if (net_fp != network || sc_fp != scenarios) {
      throw DataError("runs are on different instances: " + runs.front().string() + " and " +
                      dir.string());
    }
    CompareRow row;
    row.run = dir.string();
    row.method = summary.count("method") ? summary.at("method") : "?";
    row.seconds = ParseDouble(timing, "total", dir / "timing.tsv");
    row.expected_cost = ParseDouble(summary, "expected_cost", dir / "summary.tsv");
    if (ref < 0 && row.method == MethodName(Method::kExtensive))
      ref = static_cast<int>(rows.size());
    rows.push_back(row);
  }
  if (ref < 0) ref = 0;
  const double base = rows[ref].expected_cost;
  for (CompareRow& row : rows) {
    row.gap = base != 0.0 ? (row.expected_cost - base) / std::abs(base) : 0.0;
  }
  if (reference) *reference = rows[ref].run;
  return rows;
}

void WriteCompareTable(const std::vector<CompareRow>& rows, std::ostream& out) {
  out << std::left << std::setw(15) << "method" << std::right << std::setw(12) << "time_s"
      << std::setw(18) << "expected_cost" << std::setw(12) << "gap_pct" << "  run\n";
  for (const CompareRow& r : rows) {
    std::ostringstream time, cost, gap;
    time << std::fixed << std::setprecision(2) << r.seconds;
    cost << std::setprecision(10) << r.expected_cost;
    gap << std::fixed << std::setprecision(4) << 100.0 * r.gap;
    out << std::left << std::setw(15) << r.method << std::right << std::setw(12) << time.str()
        << std::setw(18) << cost.str() << std::setw(12) << gap.str() << "  " << r.run << '\n';
  }
}

}  // namespace iesuc::cli
