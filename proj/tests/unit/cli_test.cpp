// Copyright 2026 The tptnd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "tptnd/cli.h"

namespace tptnd {
namespace {

namespace fs = std::filesystem;

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation tool(std::vector<std::string> args) {
  args.insert(args.begin(), "tptnd");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("tptnd_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  fs::path dir_;
};

std::string golden(const std::string& name) {
  return (fs::path(TPTND_SOURCE_DIR) / "tests" / "golden" / name).string();
}

constexpr const char* kDie =
    "dist Die { x_d : 1 @ 1/6; x_d : 2 @ 1/6; x_d : 3 @ 1/6; x_d : 4 @ 1/6; x_d : 5 @ 1/6;"
    " x_d : 6 @ 1/6 }\n";

TEST_F(CliTest, CheckAccepted) {
  const std::string f = write("ok.tptnd", std::string(kDie) +
                                              "derivation e = (rule expectation Die |- d[6] : 1 ~ 1/6)\n");
  const Invocation r = tool({"check", f});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, f + ": accepted (1 derivations, 0 open assumptions)\n");
  EXPECT_EQ(r.err, "");
}

TEST_F(CliTest, CheckRejectedListsFailures) {
  const std::string f = write("bad.tptnd", std::string(kDie) +
                                               "derivation e = (rule expectation Die |- d[6] : 1 ~ 1/5)\n");
  const Invocation r = tool({"check", f});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find(f + ": rejected"), std::string::npos);
  EXPECT_NE(r.out.find("  e [expectation] ArithmeticMismatch"), std::string::npos) << r.out;
}

TEST_F(CliTest, ParseErrorsCarryPosition) {
  const std::string f = write("broken.tptnd", "dist G {\n  x : H @ 1/2\n  x : T @ 1/2 }\n");
  const Invocation r = tool({"check", f});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err.rfind(f + ":3:", 0), 0u) << r.err;
  EXPECT_NE(r.err.find("SyntaxError"), std::string::npos);
}

TEST_F(CliTest, ParseErrorOutranksRejection) {
  const std::string bad = write("a.tptnd", std::string(kDie) +
                                               "derivation e = (rule expectation Die |- d[6] : 1 ~ 1/5)\n");
  const std::string broken = write("b.tptnd", "dist {");
  EXPECT_EQ(tool({"check", bad, broken}).code, 2);
}

TEST_F(CliTest, UnreadableFileIsAConfigFailure) {
  const Invocation r = tool({"check", (dir_ / "missing.tptnd").string()});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("cannot read"), std::string::npos);
}

TEST_F(CliTest, EmptyFileIsAccepted) {
  EXPECT_EQ(tool({"check", write("empty.tptnd", "-- nothing here\n")}).code, 0);
}

TEST(Cli, CheckKeepsInputOrder) {
  const std::vector<std::string> files{golden("fair_die.tptnd"), golden("coin.tptnd"),
                                       golden("conj.tptnd")};
  std::vector<std::string> args{"check"};
  args.insert(args.end(), files.begin(), files.end());
  const Invocation r = tool(args);
  EXPECT_EQ(r.code, 0);
  std::size_t at = 0;
  for (const auto& f : files) {
    const std::size_t next = r.out.find(f + ": accepted", at);
    ASSERT_NE(next, std::string::npos) << r.out;
    at = next + 1;
  }
}

TEST(Cli, CheckJson) {
  const Invocation r = tool({"check", "--format", "json", golden("priorupdate.tptnd")});
  EXPECT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["tool"], "tptnd");
  EXPECT_EQ(doc["command"], "check");
  EXPECT_EQ(doc["verdict"], "accepted");
  EXPECT_TRUE(doc["seed"].is_null());
  ASSERT_EQ(doc["files"].size(), 1u);
  EXPECT_EQ(doc["files"][0]["report"]["verdict"], "accepted");
  EXPECT_EQ(doc["files"][0]["report"]["stats"]["bayes_E"], 1);
}

TEST_F(CliTest, CheckJsonReportsParseErrors) {
  const Invocation r = tool({"check", "--format", "json", write("x.tptnd", "judgement j = |- x : H @ 2;")});
  EXPECT_EQ(r.code, 2);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["verdict"], "error");
  EXPECT_EQ(doc["files"][0]["error"]["kind"], "RangeError");
  EXPECT_EQ(doc["files"][0]["error"]["line"], 1);
}

TEST(Cli, StrategyFlagChangesTheVerdict) {
  // 5/10 against 1/6 fails the exact test but passes a loose epsilon.
  EXPECT_EQ(tool({"trust", "--a", "1/6", "--k", "5", "--n", "10"}).code, 1);
  EXPECT_EQ(tool({"trust", "--a", "1/6", "--k", "5", "--n", "10", "--strategy", "eps:0.4"}).code, 0);
}

TEST(Cli, Trust) {
  Invocation r = tool({"trust", "--a", "1/6", "--k", "5", "--n", "10"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "UTRUST, interval [0.187,0.813]\n");
  r = tool({"trust", "--a", "0.3", "--k", "8", "--n", "30"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "TRUST, interval [0.123,0.459]\n");
  r = tool({"trust", "--a", "0.5", "--k", "5", "--n", "10", "--strategy", "eps:0.05"});
  EXPECT_EQ(r.out, "TRUST, interval [0.450,0.550]\n");
}

TEST(Cli, TrustJson) {
  const Invocation r = tool({"trust", "--a", "1/2", "--k", "5", "--n", "10", "--format", "json",
                      "--strategy", "wald:0.95"});
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["verdict"], "TRUST");
  EXPECT_EQ(doc["strategy"], "wald:19/20");
  EXPECT_NEAR(doc["interval"][0].get<double>(), 0.5 - 1.959963984540054 * std::sqrt(0.025), 1e-9);
}

TEST(Cli, TrustFlagErrors) {
  EXPECT_EQ(tool({"trust", "--a", "1.5", "--k", "1", "--n", "2"}).code, 3);
  EXPECT_EQ(tool({"trust", "--a", "0.5", "--k", "3", "--n", "2"}).code, 3);
  EXPECT_EQ(tool({"trust", "--a", "0.5", "--k", "0", "--n", "0"}).code, 3);
  EXPECT_EQ(tool({"trust", "--a", "0.5", "--k", "1", "--n", "2", "--strategy", "bogus"}).code, 3);
  EXPECT_EQ(tool({"trust", "--a", "0.5", "--k", "1"}).code, 3);
  EXPECT_EQ(tool({}).code, 3);
  EXPECT_EQ(tool({"frobnicate"}).code, 3);
}

TEST(Cli, Bayes) {
  const std::vector<std::string> base{"bayes", "--hyp", "0.5:2/5", "--hyp", "0.8:1/5",
                                      "--hyp", "0.9:2/5", "--k", "2", "--n", "3"};
  std::vector<std::string> args = base;
  args.insert(args.end(), {"--i", "0"});
  Invocation r = tool(args);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0.462963\n");
  r = tool(base);
  EXPECT_EQ(r.out,
            "0 a=1/2 prior=2/5 posterior=0.462963\n"
            "1 a=4/5 prior=1/5 posterior=0.237037\n"
            "2 a=9/10 prior=2/5 posterior=0.300000\n");
}

TEST(Cli, BayesErrors) {
  EXPECT_EQ(tool({"bayes", "--hyp", "0.5:1/2", "--k", "1", "--n", "2"}).code, 3);
  EXPECT_EQ(tool({"bayes", "--hyp", "0.5", "--k", "1", "--n", "2"}).code, 3);
  EXPECT_EQ(tool({"bayes", "--hyp", "0.5:1", "--k", "1", "--n", "2", "--i", "1"}).code, 3);
}

TEST(Cli, SimulateIsSeeded) {
  const std::string f = golden("fair_die.tptnd");
  EXPECT_EQ(tool({"simulate", f}).code, 3);
  const Invocation a = tool({"simulate", f, "--seed", "7", "--trials", "600"});
  const Invocation b = tool({"simulate", f, "--seed", "7", "--trials", "600"});
  const Invocation c = tool({"simulate", f, "--seed", "8", "--trials", "600"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
  EXPECT_NE(a.out.find("600 trials"), std::string::npos) << a.out;
}

TEST(Cli, SimulateJsonCountsAddUp) {
  const Invocation r = tool({"simulate", golden("fair_die.tptnd"), "--seed", "1", "--format", "json"});
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["seed"], 1);
  EXPECT_EQ(doc["generator"], "splitmix64");
  ASSERT_FALSE(doc["files"][0]["processes"].empty());
  for (const auto& p : doc["files"][0]["processes"]) {
    std::int64_t total = 0;
    for (const auto& o : p["outcomes"]) total += o["successes"].get<std::int64_t>();
    EXPECT_EQ(total, p["trials"].get<std::int64_t>());
  }
}

TEST(Cli, VersionAndHelp) {
  Invocation r = tool({"--version"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "tptnd 0.1.0\n");
  r = tool({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("simulate"), std::string::npos);
}

TEST(Cli, EnvironmentStrategy) {
  ::setenv("TPTND_STRATEGY", "eps:0.4", 1);
  EXPECT_EQ(tool({"trust", "--a", "1/6", "--k", "5", "--n", "10"}).code, 0);
  EXPECT_EQ(tool({"trust", "--a", "1/6", "--k", "5", "--n", "10", "--strategy", "exact:0.95"}).code, 1);
  ::setenv("TPTND_STRATEGY", "nonsense", 1);
  EXPECT_EQ(tool({"trust", "--a", "1/6", "--k", "5", "--n", "10"}).code, 3);
  ::unsetenv("TPTND_STRATEGY");
  EXPECT_EQ(cli::default_strategy(), ThresholdStrategy{});
}

}  // namespace
}  // namespace tptnd
