// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The irsloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Drives the installed command line tool as a subprocess.

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "irsloc/crlb.hpp"
#include "irsloc/experiments.hpp"
#include "irsloc/scenario_io.hpp"

namespace irsloc {
namespace {

namespace fs = std::filesystem;

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

fs::path scratch() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  fs::path dir = fs::temp_directory_path() /
                 (std::string("irsloc_cli_") + info->test_suite_name() + "_" + info->name());
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// `env` is a shell prefix such as "LOC_SEED=9".
Run run(const std::string& args, const std::string& env = "") {
  const fs::path err = fs::temp_directory_path() / "irsloc_cli_stderr.txt";
  const std::string cmd =
      env + " " + std::string(IRSLOC_CLI_PATH) + " " + args + " 2> " + err.string();
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err);
  return r;
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

TEST(Cli, Bounds) {
  const auto r = run("bounds K=10 M=4");
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out,
            "K,M,interference,N_min,N,K_max\n"
            "10,4,none,5,5,10\n"
            "10,4,full,20,20,10\n");
  EXPECT_EQ(run("bounds --K 10 --M 4").out, r.out);
}

TEST(Cli, ErrorsAreJsonOnStderr) {
  const auto usage = run("bounds K=10");
  EXPECT_EQ(usage.status, 2);
  const auto j = nlohmann::json::parse(usage.err);
  EXPECT_EQ(j.at("error"), "UsageError");
  EXPECT_TRUE(usage.out.empty());

  const auto missing = run("optimize-single --scenario /nonexistent/s.json");
  EXPECT_EQ(missing.status, 1);
  EXPECT_EQ(nlohmann::json::parse(missing.err).at("error"), "ParseError");

  const auto flag = run("frobnicate");
  EXPECT_EQ(flag.status, 2);
  EXPECT_EQ(nlohmann::json::parse(flag.err).at("error"), "UsageError");
}

TEST(Cli, InvalidScenarioNamesField) {
  const auto dir = scratch();
  auto doc = scenario_to_json(default_scenario());
  doc["r_e_m"] = -1;
  std::ofstream(dir / "bad.json") << doc.dump();
  const auto r = run("crlb --scenario " + (dir / "bad.json").string());
  EXPECT_EQ(r.status, 1);
  const auto j = nlohmann::json::parse(r.err);
  EXPECT_EQ(j.at("error"), "ValidationError");
  EXPECT_NE(j.at("message").get<std::string>().find("r_e_m"), std::string::npos);
}

TEST(Cli, OptimizeSingleOnRingMeetsBound) {
  const auto dir = scratch();
  const Scenario ring = symmetric_ring_scenario(3, default_scenario());
  write_scenario(ring, dir / "ring3.json");
  const auto r = run("optimize-single --scenario " + (dir / "ring3.json").string());
  ASSERT_EQ(r.status, 0) << r.err;
  const auto rows = csv(r.out);
  ASSERT_EQ(rows.size(), 2u);
  ASSERT_EQ(rows[0][1], "crlb");
  const double crlb = std::stod(rows[1][1]);
  const double bound = std::stod(rows[1][2]);
  EXPECT_NEAR(crlb, bound, 1e-6 * bound);
  EXPECT_NEAR(bound, analytic_lower_bound(ring.radio(), 1600, ring.height_gap()), 1e-12 * bound);
  EXPECT_EQ(rows[1][3], "3");
}

TEST(Cli, ManifestAndReproducibility) {
  const auto dir = scratch();
  const std::string args = "stats --bs 4 --count 10 --max-iter 100 --seed 17 --out ";
  ASSERT_EQ(run(args + (dir / "a").string()).status, 0);
  ASSERT_EQ(run(args + (dir / "b").string()).status, 0);
  EXPECT_EQ(slurp(dir / "a" / "results.csv"), slurp(dir / "b" / "results.csv"));
  EXPECT_EQ(slurp(dir / "a" / "manifest.json"), slurp(dir / "b" / "manifest.json"));
  const auto m = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
  EXPECT_EQ(m.at("command"), "stats");
  EXPECT_EQ(m.at("seed"), 17);
  EXPECT_EQ(m.at("config_hash").get<std::string>().rfind("fnv1a64:", 0), 0u);
  EXPECT_EQ(m.at("config_hash").get<std::string>().size(), 8u + 16u);
  EXPECT_FALSE(m.at("version").get<std::string>().empty());
  EXPECT_EQ(m.at("outputs"), nlohmann::json::array({"results.csv"}));
}

TEST(Cli, SeedFromEnvironment) {
  const std::string args = "stats --bs 4 --count 5 --max-iter 50";
  const auto flag = run("--seed 9 " + args);
  ASSERT_EQ(flag.status, 0) << flag.err;
  EXPECT_EQ(run(args, "LOC_SEED=9").out, flag.out);
  EXPECT_EQ(run("--seed 9 " + args, "LOC_SEED=4").out, flag.out);
}

TEST(Cli, PowerSweepMseFallsWithPower) {
  const auto dir = scratch();
  write_scenario(default_scenario().with_targets({{60, 80}, {140, 60}}), dir / "s.json");
  const auto r = run("sweep power 0.05..1.0:5 --scheme proposed --trials 200 --seed 3 --scenario " +
                     (dir / "s.json").string());
  ASSERT_EQ(r.status, 0) << r.err;
  const auto rows = csv(r.out);
  ASSERT_EQ(rows.size(), 6u);
  std::size_t mse_col = 0;
  while (rows[0][mse_col] != "mse") ++mse_col;
  double prev = INFINITY;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double mse = std::stod(rows[i][mse_col]);
    EXPECT_LT(mse, prev) << "row " << i;
    prev = mse;
  }
}

TEST(Cli, ScenarioCommandIsLoadable) {
  const auto dir = scratch();
  ASSERT_EQ(run("scenario --out " + (dir / "d.json").string()).status, 0);
  EXPECT_EQ(load_scenario(dir / "d.json"), default_scenario());
}

}  // namespace
}  // namespace irsloc
