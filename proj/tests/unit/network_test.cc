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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace iesuc {
namespace {

const std::filesystem::path kMinimal = std::filesystem::path(IESUC_DATA_DIR) / "minimal.json";

std::string ReadText(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void Replace(std::string& text, const std::string& from, const std::string& to) {
  const size_t pos = text.find(from);
  ASSERT_NE(pos, std::string::npos) << from;
  text.replace(pos, from.size(), to);
}

bool ReportMentions(const ValidationReport& report, const std::string& needle) {
  for (const auto& issue : report) {
    if ((issue.field + ": " + issue.message).find(needle) != std::string::npos) return true;
  }
  return false;
}

TEST(NetworkTest, LoadsMinimalFixture) {
  const IesNetwork net = LoadNetwork(kMinimal);
  EXPECT_EQ(net.buses.size(), 2u);
  EXPECT_EQ(net.gas_nodes.size(), 2u);
  EXPECT_EQ(net.generators.size(), 1u);
  EXPECT_EQ(net.wells.size(), 1u);
  EXPECT_EQ(net.pipelines.size(), 1u);
  EXPECT_TRUE(Validate(net).empty());
  // Committed at t = 0 without pd0: starts at minimum output.
  EXPECT_DOUBLE_EQ(net.generators[0].InitialOutput(), net.generators[0].p_min);
}

TEST(NetworkTest, OutputBoundViolationNamesGenerator) {
  std::string text = ReadText(kMinimal);
  Replace(text, "\"P_min\": 0.1", "\"P_min\": 0.9");
  try {
    ParseNetwork(text);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("generators[G1]"), std::string::npos) << e.what();
  }
}

TEST(NetworkTest, UnknownBusOnBranchIsRejected) {
  std::string text = ReadText(kMinimal);
  Replace(text, "\"to\": \"B2\"", "\"to\": \"B9\"");
  try {
    ParseNetwork(text);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("unknown bus 'B9'"), std::string::npos) << e.what();
  }
}

TEST(NetworkTest, MalformedFileIsParseError) {
  EXPECT_THROW(ParseNetwork("{\"name\": "), DataError);
  std::string text = ReadText(kMinimal);
  Replace(text, "\"C_NP\": 5.0", "\"C_NP\": 5.0, \"colour\": 1");
  EXPECT_THROW(ParseNetwork(text), DataError);
}

TEST(NetworkTest, CompressionFactorBelowOne) {
  IesNetwork net = LoadNetwork(kMinimal);
  net.compressors.push_back({"C1", "N1", "N2", 0.9});
  EXPECT_TRUE(ReportMentions(Validate(net), "compression factor < 1"));
}

TEST(NetworkTest, DisconnectedGasNode) {
  IesNetwork net = LoadNetwork(kMinimal);
  GasNode lonely = net.gas_nodes[0];
  lonely.id = "N3";
  net.gas_nodes.push_back(lonely);
  EXPECT_TRUE(ReportMentions(Validate(net), "gas graph not connected"));
  EXPECT_EQ(GasIslands(net), (std::vector<int>{0, 0, 1}));
}

TEST(NetworkTest, RoundTripIsIdentity) {
  const IesNetwork net = LoadNetwork(kMinimal);
  const std::string text = SerializeNetwork(net);
  const IesNetwork again = ParseNetwork(text);
  EXPECT_EQ(again, net);
  EXPECT_EQ(SerializeNetwork(again), text);
  EXPECT_TRUE(Validate(again).empty());
}

TEST(NetworkTest, MegawattFilesConvertToCanonicalUnits) {
  const IesNetwork gw = LoadNetwork(kMinimal);
  std::string text = SerializeNetwork(gw);
  Replace(text, "\"power_unit\": \"GW\"", "\"power_unit\": \"MW\"");
  Replace(text, "\"P_max\": 0.4", "\"P_max\": 400.0");
  Replace(text, "\"PF\": 0.5", "\"PF\": 500.0");
  Replace(text, "\"C_PD\": 0.02", "\"C_PD\": 2e-05");
  const IesNetwork mw = ParseNetwork(text);
  EXPECT_DOUBLE_EQ(mw.generators[0].p_max, 0.4);
  EXPECT_DOUBLE_EQ(mw.branches[0].capacity, 0.5);
  EXPECT_NEAR(mw.generators[0].cost, 0.02, 1e-15);
  // Unconverted fields are read as MW.
  EXPECT_NEAR(mw.generators[0].p_min, 1e-4, 1e-18);
}

TEST(ContTest, FixtureConstantsMatchDirectEvaluation) {
  const PhysicalConstants k{0.7156, 0.01, 0.0577, 281.15, 0.8};
  const Pipeline pipe{"P", "a", "b", 0.6, 5e4};
  // Same formula, evaluated step by step in long double.
  long double num = 0.617L;
  for (int i = 0; i < 5; ++i) num *= 0.6L;
  const long double den = 5e4L * 0.01L * 0.0577L * 281.15L * 0.8L * 0.7156L * 0.7156L;
  const double expected = static_cast<double>(std::sqrt(num / den));
  EXPECT_NEAR(ComputeCont(pipe, k), expected, 1e-15);
  EXPECT_NEAR(ComputeCont(pipe, k), 3.80e-3, 1e-5);
}

TEST(ContTest, Homogeneity) {
  const PhysicalConstants k;
  const Pipeline base{"P", "a", "b", 0.6, 5e4};
  Pipeline wide = base;
  wide.diameter *= 2;
  Pipeline longer = base;
  longer.length *= 4;
  EXPECT_NEAR(ComputeCont(wide, k) / ComputeCont(base, k), std::pow(2.0, 2.5), 1e-12);
  EXPECT_NEAR(ComputeCont(longer, k) / ComputeCont(base, k), 0.5, 1e-12);
}

TEST(ContTest, MonotoneInEveryArgument) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> pos(0.1, 10.0);
  std::uniform_real_distribution<double> grow(1.001, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const PhysicalConstants k{pos(rng), pos(rng), pos(rng), pos(rng), pos(rng)};
    const Pipeline p{"P", "a", "b", pos(rng), 1000 * pos(rng)};
    const double c = ComputeCont(p, k);
    const double g = grow(rng);
    Pipeline q = p;
    q.diameter *= g;
    EXPECT_GT(ComputeCont(q, k), c);
    q = p;
    q.length *= g;
    EXPECT_LT(ComputeCont(q, k), c);
    double PhysicalConstants::* fields[] = {
        &PhysicalConstants::density, &PhysicalConstants::friction, &PhysicalConstants::gas_constant,
        &PhysicalConstants::temperature, &PhysicalConstants::compressibility};
    for (auto field : fields) {
      PhysicalConstants kk = k;
      kk.*field *= g;
      EXPECT_LT(ComputeCont(p, kk), c);
    }
  }
}

TEST(LinepackTest, InitialLinepackUsesMeanInitialPressure) {
  const IesNetwork net = LoadNetwork(kMinimal);
  const Pipeline& pipe = net.pipelines[0];
  const PhysicalConstants& k = net.constants;
  const double coef = 1e-6 * 0.78 * 0.8 * 0.8 * 20000 /
                      (k.density * k.gas_constant * k.temperature * k.compressibility);
  EXPECT_NEAR(LinepackCoefficient(pipe, k), coef, 1e-15);
  EXPECT_NEAR(InitialLinepack(net, pipe), coef * 59.0, 1e-14);
}

TEST(FingerprintTest, KnownVectors) {
  EXPECT_EQ(Fingerprint(""), "cbf29ce484222325");
  EXPECT_EQ(Fingerprint("a"), "af63dc4c8601ec8c");
}

}  // namespace
}  // namespace iesuc
