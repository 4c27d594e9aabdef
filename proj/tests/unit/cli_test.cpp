// Copyright 2026 The qmask Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmask_tools/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "qmask/spec_io.hpp"

namespace qmask::cli {
namespace {

namespace fs = std::filesystem;

std::string fixture(const std::string& name) { return std::string(QMASK_FIXTURE_DIR) + "/" + name; }

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "qmask_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

TEST(Cli, ValidateFixture) {
  const auto r = call({"validate", fixture("example1.json")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "all invariants satisfied\n");
}

TEST(Cli, ValidateMissingFileIsDomainError) {
  const auto r = call({"validate", fixture("missing.json")});
  EXPECT_EQ(r.code, kExitDomainError);
  EXPECT_NE(r.err.find("error: "), std::string::npos);
}

TEST(Cli, ProjectionExample) {
  const auto r = call({"example", "projection", "--epsilon", "0.5", "--alpha", "0.5"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "R=0.5000000000 L=0.3112781245\n");
  const auto e = call({"example", "projection", "--epsilon", "0.5", "--alpha", "0.5", "--channel",
                       fixture("example2.json")});
  EXPECT_EQ(e.out, "R=0.5000000000 L=0.3112781245\nevaluated R=0.5000000000 L=0.3112781245\n");
}

TEST(Cli, DepolarizingExample) {
  const auto r = call({"example", "depolarizing", "--epsilon", "0.5"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("cancellation_max_deviation="), std::string::npos);
  EXPECT_NE(r.out.find("correction_strategy R="), std::string::npos);
}

TEST(Cli, OutOfRangeParameterIsDomainError) {
  EXPECT_EQ(call({"example", "projection", "--alpha", "0.7"}).code, kExitDomainError);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(call({}).code, kExitUsage);
  EXPECT_EQ(call({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(call({"region", "--channel", fixture("example3_meas.json")}).code, kExitUsage);
  EXPECT_EQ(call({"simulate", "--channel", fixture("modadd.json"), "--strategy",
                  fixture("strategies/modadd.json"), "--rate", "0.5"})
                .code,
            kExitUsage);
  EXPECT_EQ(call({"region", "--channel", fixture("example3_meas.json"), "--seed", "1", "--budgets",
                  "0:x:1"})
                .code,
            kExitUsage);
  EXPECT_EQ(call({"simulate", "--channel", fixture("modadd.json"), "--strategy",
                  fixture("strategies/modadd.json"), "--rate", "0.5", "--seed", "1", "--encoder",
                  "other"})
                .code,
            kExitUsage);
}

TEST(Cli, HelpListsFlagsWithUnits) {
  for (const char* cmd : {"region", "capacity", "simulate"}) {
    const auto r = call({cmd, "--help"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_NE(r.out.find("--seed"), std::string::npos) << cmd;
    EXPECT_NE(r.out.find("bits"), std::string::npos) << cmd;
    EXPECT_NE(r.out.find("--threads"), std::string::npos) << cmd;
  }
}

TEST(Cli, BudgetGrid) {
  const auto g = parse_budget_grid("0:2:0.1");
  ASSERT_EQ(g.size(), 21u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 2.0);
  EXPECT_EQ(parse_budget_grid("0.5:0.5:1").size(), 1u);
  EXPECT_EQ(parse_budget_grid("0:1:0.3").size(), 4u);
  EXPECT_THROW(parse_budget_grid("1:0:0.1"), std::exception);
  EXPECT_THROW(parse_budget_grid("0:1"), std::exception);
  EXPECT_THROW(parse_budget_grid("0:1:0"), std::exception);
}

TEST(Cli, RegionSweepIsMonotone) {
  const fs::path out = scratch("region.csv");
  const auto r = call({"region", "--channel", fixture("example3_meas.json"), "--budgets", "0:2:0.1",
                       "--restarts", "16", "--seed", "7", "--out", out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream csv(read_file(out.string()));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "budget_bits,R_bits,L_bits,n,seed");
  int rows = 0;
  double previous = -1.0;
  while (std::getline(csv, line)) {
    ++rows;
    std::istringstream fields(line);
    std::string budget, rate, leak;
    std::getline(fields, budget, ',');
    std::getline(fields, rate, ',');
    std::getline(fields, leak, ',');
    EXPECT_GE(std::stod(rate), previous);
    EXPECT_LE(std::stod(leak), std::stod(budget) + 1e-6);
    previous = std::stod(rate);
  }
  EXPECT_EQ(rows, 21);
}

TEST(Cli, CapacityWritesStrategy) {
  const fs::path strategy = scratch("strategy.json");
  const auto r = call({"capacity", "--channel", fixture("example3_meas.json"), "--budget", "2",
                       "--restarts", "2", "--seed", "3", "--strategy-out", strategy.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.substr(0, 19), "budget=2.000000000 ");
  EXPECT_NO_THROW(load_strategy(strategy.string()));
}

TEST(Cli, SimulateIdenticalAcrossThreads) {
  const fs::path a = scratch("sim1.json");
  const fs::path b = scratch("sim4.json");
  const std::vector<std::string> base{"simulate", "--channel", fixture("modadd.json"), "--strategy",
                                      fixture("strategies/modadd.json"), "--n", "8", "--rate",
                                      "0.25", "--trials", "300", "--seed", "11"};
  auto one = base;
  one.insert(one.end(), {"--threads", "1", "--out", a.string()});
  auto four = base;
  four.insert(four.end(), {"--threads", "4", "--out", b.string()});
  ASSERT_EQ(call(one).code, kExitOk);
  ASSERT_EQ(call(four).code, kExitOk);
  EXPECT_EQ(read_file(a.string()), read_file(b.string()));
}

TEST(Cli, CorrectionSimulationHasNoErrors) {
  const auto r = call({"simulate", "--channel", fixture("modadd.json"), "--strategy",
                       fixture("strategies/modadd.json"), "--n", "8", "--rate", "0.875", "--seed",
                       "5", "--encoder", "correction"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("\"error_rate\": 0.0"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("\"leakage_bits_per_letter\": 0.0"), std::string::npos) << r.out;
}

TEST(Cli, AtomicWriteReplacesFile) {
  const fs::path p = scratch("atomic.txt");
  write_file_atomic(p.string(), "first");
  write_file_atomic(p.string(), "second");
  EXPECT_EQ(read_file(p.string()), "second");
  for (const auto& entry : fs::directory_iterator(p.parent_path())) {
    EXPECT_EQ(entry.path().string().find(".tmp."), std::string::npos);
  }
}

}  // namespace
}  // namespace qmask::cli
