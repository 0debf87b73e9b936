// Copyright 2026 The LETW Authors.
//
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

#include <gtest/gtest.h>

#include <string>

#include "cli_support.hpp"
#include "letw/io.hpp"

namespace letw {
namespace {

using testing::blocks;
using testing::read_file;
using testing::repeat;
using testing::run_cli;
using testing::telemetry_lines;
using testing::TempDir;
using testing::write_file;

TEST(CliSimulateTest, RejectsNonPositiveSessions) {
  const auto r = run_cli({"simulate", "--sessions", "0"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("sessions must be positive"), std::string::npos);
  EXPECT_EQ(run_cli({"simulate", "--sessions", "-5"}).code, cli::kExitUsage);
}

TEST(CliSimulateTest, AllPoliciesTableAndTrustOrdering) {
  TempDir dir;
  const auto out = dir.file("all.json");
  const auto r = run_cli({"simulate", "--sessions", "20000", "--policy", "all", "--out", out});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("No governance"), std::string::npos);
  EXPECT_NE(r.out.find("Static messaging"), std::string::npos);
  EXPECT_NE(r.out.find("LETW governor"), std::string::npos);
  const Json doc = Json::parse(read_file(out));
  const SimResult none = sim_result_from_json(doc["results"]["none"]);
  const SimResult stat = sim_result_from_json(doc["results"]["static"]);
  const SimResult letw = sim_result_from_json(doc["results"]["letw"]);
  EXPECT_GE(letw.mean_trust, stat.mean_trust);
  EXPECT_GE(stat.mean_trust, none.mean_trust);
  EXPECT_EQ(doc["config"]["seed"], 42);
  EXPECT_TRUE(doc.contains("model"));
}

TEST(CliSimulateTest, ConfigFileAndDeterminism) {
  TempDir dir;
  const auto cfg = dir.file("params.json");
  write_file(cfg, R"({"sessions": 5000, "params": {"k": 0.5}, "policy": {"kind": "letw"}})");
  const auto a = dir.file("a.json"), b = dir.file("b.json");
  ASSERT_EQ(run_cli({"simulate", "--config", cfg, "--seed", "42", "--out", a}).code, 0);
  ASSERT_EQ(run_cli({"--config", cfg, "--seed", "42", "--out", b, "simulate"}).code, 0);
  EXPECT_EQ(read_file(a), read_file(b));
  const Json doc = Json::parse(read_file(a));
  EXPECT_EQ(doc["config"]["params"]["k"], 0.5);
  EXPECT_EQ(doc["results"]["letw"]["sessions"], 5000);
  const auto c = dir.file("c.json");
  ASSERT_EQ(run_cli({"simulate", "--config", cfg, "--seed", "7", "--out", c}).code, 0);
  EXPECT_NE(read_file(a), read_file(c));
}

TEST(CliSimulateTest, BurstScenario) {
  const auto r = run_cli({"simulate", "--scenario", "burst", "--sessions", "5000"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("scenario=burst"), std::string::npos);
  EXPECT_EQ(run_cli({"simulate", "--scenario", "storm"}).code, cli::kExitUsage);
}

TEST(CliSimulateTest, ConfigErrorsExitTwo) {
  TempDir dir;
  const auto cfg = dir.file("bad.json");
  write_file(cfg, R"({"params": {"beta": -1}})");
  EXPECT_EQ(run_cli({"simulate", "--config", cfg}).code, cli::kExitUsage);
  write_file(cfg, "{not json");
  EXPECT_EQ(run_cli({"simulate", "--config", cfg}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"simulate", "--config", dir.file("missing.json")}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"simulate", "--policy", "random"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"explode"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({}).code, cli::kExitUsage);
}

TEST(CliReplayTest, SteadyFastStreamIsAllInstant) {
  TempDir dir;
  const auto tel = dir.file("t.jsonl"), out = dir.file("d.jsonl");
  write_file(tel, telemetry_lines(repeat(1.0, 50)));
  const auto r = run_cli({"replay", "--telemetry", tel, "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("instant=100.00%"), std::string::npos) << r.out;
  std::istringstream lines(read_file(out));
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    const DecisionRecord d = parse_decision(line);
    EXPECT_EQ(d.decision.mode, Mode::kInstant);
    EXPECT_EQ(d.session_id, "s" + std::to_string(n));
    ++n;
  }
  EXPECT_EQ(n, 50);
}

TEST(CliReplayTest, RampMakesExactlyTwoTransitions) {
  TempDir dir;
  std::vector<double> ramp;
  for (int i = 0; i <= 30; ++i) ramp.push_back(1.0 + 0.1 * i);
  const auto tel = dir.file("ramp.jsonl"), out = dir.file("d.jsonl");
  write_file(tel, telemetry_lines(ramp));
  const auto r = run_cli({"replay", "--telemetry", tel, "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("transitions=2"), std::string::npos) << r.out;
  std::istringstream lines(read_file(out));
  std::string line;
  std::vector<Mode> modes;
  while (std::getline(lines, line)) modes.push_back(parse_decision(line).decision.mode);
  ASSERT_EQ(modes.size(), ramp.size());
  EXPECT_EQ(modes.front(), Mode::kInstant);
  EXPECT_EQ(modes.back(), Mode::kDeferred);
  int changes = 0;
  for (std::size_t i = 1; i < modes.size(); ++i) changes += modes[i] != modes[i - 1];
  EXPECT_EQ(changes, 2);
}

TEST(CliReplayTest, MalformedLineNamesLineNumber) {
  TempDir dir;
  std::string content = telemetry_lines(repeat(1.0, 6)) + "{broken\n" +
                        telemetry_lines(repeat(1.0, 2));
  const auto tel = dir.file("bad.jsonl");
  write_file(tel, content);
  const auto r = run_cli({"replay", "--telemetry", tel});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("line 7"), std::string::npos) << r.err;
  const auto skipped = run_cli({"replay", "--telemetry", tel, "--skip-bad"});
  EXPECT_EQ(skipped.code, 0);
  EXPECT_NE(skipped.err.find("decisions=8"), std::string::npos) << skipped.err;
}

TEST(CliReplayTest, SloEscalationHoldsSoft) {
  TempDir dir;
  // The window of 10 fills with 2.6 s confirmations; after three breaching
  // windows the fast tail still replays as Soft.
  const auto tel = dir.file("t.jsonl"), out = dir.file("d.jsonl");
  write_file(tel, telemetry_lines(blocks({repeat(2.6, 30), repeat(0.5, 10)})));
  ASSERT_EQ(run_cli({"replay", "--telemetry", tel, "--window", "10", "--slo", "--out", out}).code,
            0);
  std::istringstream lines(read_file(out));
  std::string line;
  DecisionRecord last;
  while (std::getline(lines, line)) last = parse_decision(line);
  EXPECT_EQ(last.decision.mode, Mode::kSoft);
  EXPECT_EQ(last.decision.reason, Reason::kSloEscalation);
}

TEST(CliReportTest, EmpiricalQuantilesMapToModes) {
  TempDir dir;
  const auto tel = dir.file("t.jsonl"), out = dir.file("r.json");
  // Nearest-rank over 100 events: rank 50 -> 1.4, rank 90 -> 2.2, rank 99 -> 4.7.
  write_file(tel, telemetry_lines(blocks({repeat(1.0, 49), repeat(1.4, 1), repeat(1.8, 39),
                                          repeat(2.2, 1), repeat(3.0, 8), repeat(4.7, 1),
                                          repeat(6.0, 1)})));
  const auto r = run_cli({"report", "--telemetry", tel, "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json doc = Json::parse(read_file(out));
  ASSERT_EQ(doc["rows"].size(), 3u);
  EXPECT_DOUBLE_EQ(doc["rows"][0]["latency_s"].get<double>(), 1.4);
  EXPECT_DOUBLE_EQ(doc["rows"][1]["latency_s"].get<double>(), 2.2);
  EXPECT_DOUBLE_EQ(doc["rows"][2]["latency_s"].get<double>(), 4.7);
  EXPECT_EQ(doc["rows"][0]["mode"], "instant");
  EXPECT_EQ(doc["rows"][1]["mode"], "soft");
  EXPECT_EQ(doc["rows"][2]["mode"], "deferred");
}

TEST(CliReportTest, SingleEventAndEmptyFile) {
  TempDir dir;
  const auto one = dir.file("one.jsonl"), out = dir.file("r.json");
  write_file(one, telemetry_lines({2.345}));
  ASSERT_EQ(run_cli({"report", "--telemetry", one, "--out", out}).code, 0);
  const Json doc = Json::parse(read_file(out));
  for (const auto& row : doc["rows"]) EXPECT_DOUBLE_EQ(row["latency_s"].get<double>(), 2.345);

  const auto empty = dir.file("empty.jsonl");
  write_file(empty, "");
  EXPECT_EQ(run_cli({"report", "--telemetry", empty}).code, cli::kExitRuntime);
}

TEST(CliReportTest, RailReportWithoutTelemetry) {
  const auto r = run_cli({"report"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("source=rail"), std::string::npos);
  EXPECT_NE(r.out.find("deferred"), std::string::npos);
}

TEST(CliSloTest, CompliantStream) {
  TempDir dir;
  std::vector<double> v;
  for (int i = 0; i < 512; ++i) v.push_back(i % 2 ? 0.9 : 0.7);
  const auto tel = dir.file("ok.jsonl");
  write_file(tel, telemetry_lines(v));
  const auto r = run_cli({"slo", "--telemetry", tel});
  EXPECT_EQ(r.code, cli::kExitOk) << r.out;
  EXPECT_NE(r.out.find("SLO escalation: no"), std::string::npos);
}

TEST(CliSloTest, ThreeBreachingWindowsEscalate) {
  TempDir dir;
  const auto tel = dir.file("hot.jsonl"), out = dir.file("slo.json");
  write_file(tel, telemetry_lines(repeat(2.6, 30)));
  const auto r = run_cli({"slo", "--telemetry", tel, "--window", "10", "--out", out});
  EXPECT_EQ(r.code, cli::kExitSloEscalated);
  const Json doc = Json::parse(read_file(out));
  EXPECT_TRUE(doc["escalated"].get<bool>());
  EXPECT_EQ(doc["escalation_windows"], Json::array({2}));
  EXPECT_EQ(doc["windows"][2]["alerts"], Json::array({"p90"}));
  EXPECT_EQ(doc["windows"][1]["escalated"], false);
}

TEST(CliSloTest, TwoBreachingWindowsThenCleanDoNotEscalate) {
  TempDir dir;
  const auto tel = dir.file("warm.jsonl");
  write_file(tel, telemetry_lines(blocks({repeat(2.6, 20), repeat(0.8, 10), repeat(2.6, 20)})));
  EXPECT_EQ(run_cli({"slo", "--telemetry", tel, "--window", "10"}).code, cli::kExitOk);
}

TEST(CliSloTest, BadFlags) {
  TempDir dir;
  const auto tel = dir.file("t.jsonl");
  write_file(tel, telemetry_lines({1.0}));
  EXPECT_EQ(run_cli({"slo", "--telemetry", tel, "--window", "0"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"slo", "--telemetry", tel, "--window", "abc"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"slo"}).code, cli::kExitUsage);
}

TEST(CliFitTest, Examples) {
  TempDir dir;
  const auto out = dir.file("fit.json");
  auto r = run_cli({"fit", "--points", "0.5:0.16,2.5:0.104", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  Json doc = Json::parse(read_file(out));
  EXPECT_NEAR(doc["alpha"].get<double>(), -1.534398, 1e-6);
  EXPECT_NEAR(doc["beta"].get<double>(), 0.247661, 1e-6);

  r = run_cli({"fit", "--hazard-anchor", "1:7", "--gamma", "0.38", "--out", out});
  ASSERT_EQ(r.code, 0);
  doc = Json::parse(read_file(out));
  EXPECT_NEAR(doc["lambda0"].get<double>(), 0.067717, 1e-6);
  EXPECT_FALSE(doc.contains("alpha"));

  r = run_cli({"fit", "--points", "1:0.5,2:0.5", "--out", out});
  ASSERT_EQ(r.code, 0);
  doc = Json::parse(read_file(out));
  EXPECT_EQ(doc["beta"].get<double>(), 0.0);
  EXPECT_EQ(doc["alpha"].get<double>(), 0.0);
}

TEST(CliFitTest, UnparseablePoints) {
  EXPECT_EQ(run_cli({"fit", "--points", "abc"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"fit", "--points", "1:0.5"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"fit", "--points", "1:0.5,1:0.6"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"fit", "--points", "1:0.5x,2:0.3"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"fit"}).code, cli::kExitUsage);
}

}  // namespace
}  // namespace letw
