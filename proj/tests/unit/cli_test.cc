// Copyright 2026 The Authors.
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


#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "simexplain/evaluation.h"
#include "simexplain/serialization.h"

namespace simexplain {
namespace {

namespace fs = std::filesystem;

// Runs the CLI with stdout and stderr discarded; returns the exit status.
int cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + SIMEXPLAIN_CLI_PATH + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Output document minus the output path it records about itself.
Json without_out_path(const fs::path& p) {
  Json j = Json::parse(slurp(p));
  j["run_config"]["outputs"].erase("out");
  return j;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           (std::string("simexplain_cli_") +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    ASSERT_EQ(cli("gen-synthetic --dim 3 --num-pairs 12 --num-training 40 --seed 5 --out-dir " +
                  dir_.string()),
              0);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string data_args() const {
    return "--pairs " + (dir_ / "pairs.csv").string() + " --training " +
           (dir_ / "training.csv").string() + " --oracle mahalanobis:" +
           (dir_ / "a_star.json").string();
  }
  fs::path out(const std::string& name) const { return dir_ / name; }

  fs::path dir_;
};

TEST_F(CliTest, ExplainFeaturesDeterministic) {
  for (const char* mode : {"full", "diag", "global", "lime", "jslime"}) {
    const std::string args = "explain-features --mode " + std::string(mode) +
                             " --index 0 --seed 3 " + data_args() + " --out ";
    ASSERT_EQ(cli(args + out("a.json").string()), 0) << mode;
    ASSERT_EQ(cli(args + out("b.json").string()), 0) << mode;
    EXPECT_EQ(without_out_path(out("a.json")), without_out_path(out("b.json"))) << mode;
  }
}

TEST_F(CliTest, AnalogyAndAblateDeterministic) {
  for (const std::string cmd : {"explain-analogies --method abe", "explain-analogies --method dirsim",
                                "ablate --drop diversity"}) {
    const std::string args = cmd + " --index 1 -k 3 " + data_args() + " --out ";
    ASSERT_EQ(cli(args + out("a.json").string()), 0) << cmd;
    ASSERT_EQ(cli(args + out("b.json").string()), 0) << cmd;
    EXPECT_EQ(without_out_path(out("a.json")), without_out_path(out("b.json"))) << cmd;
  }
}

TEST_F(CliTest, EvaluateDeterministicAndReadable) {
  const std::string args = "evaluate --methods fbfull,abe --k-max 3 --neighborhood-size 30 " +
                           data_args() + " --out ";
  ASSERT_EQ(cli(args + out("a.csv").string()), 0);
  ASSERT_EQ(cli(args + out("b.csv").string() + " --threads 3"), 0);
  EXPECT_EQ(slurp(out("a.csv")), slurp(out("b.csv")));
  auto rows = read_results_csv(out("a.csv"));
  EXPECT_FALSE(rows.empty());
  EXPECT_TRUE(fs::exists(out("a.csv.run.json")));
}

TEST_F(CliTest, ExitCodes) {
  // Validation: missing input, unknown option value, bad index.
  EXPECT_EQ(cli("explain-features --pairs " + out("nope.csv").string() +
                " --oracle mahalanobis:" + out("a_star.json").string()),
            2);
  EXPECT_EQ(cli("explain-features --mode sideways " + data_args()), 2);
  EXPECT_EQ(cli("explain-features --index 999 " + data_args() + " --out " + out("x.json").string()),
            2);
  // Oracle failure: a black box answering null.
  EXPECT_EQ(cli("explain-features --index 0 --pairs " + out("pairs.csv").string() +
                " --oracle 'command:" + FAKE_ORACLE_PATH + " --nan' --out " +
                out("x.json").string()),
            3);
  // Non-convergence under --strict.
  EXPECT_EQ(cli("explain-features --index 0 --max-iters 1 --strict " + data_args() + " --out " +
                out("x.json").string()),
            4);
  EXPECT_EQ(cli("explain-features --index 0 --max-iters 1 " + data_args() + " --out " +
                out("x.json").string()),
            0);
}

TEST_F(CliTest, SeedFlagOverridesEnvironment) {
  const std::string args = "explain-features --index 0 " + data_args() + " --out ";
  ASSERT_EQ(cli(args + out("env.json").string(), "SIMEXPLAIN_SEED=77"), 0);
  ASSERT_EQ(cli(args + out("flag.json").string() + " --seed 77"), 0);
  ASSERT_EQ(cli(args + out("both.json").string() + " --seed 78", "SIMEXPLAIN_SEED=77"), 0);
  auto seed_of = [&](const std::string& name) {
    return Json::parse(slurp(out(name))).at("run_config").at("seed").get<std::uint64_t>();
  };
  EXPECT_EQ(seed_of("env.json"), 77u);
  EXPECT_EQ(seed_of("both.json"), 78u);
  Json env = Json::parse(slurp(out("env.json")));
  Json flag = Json::parse(slurp(out("flag.json")));
  EXPECT_EQ(env.at("explanations"), flag.at("explanations"));
}

}  // namespace
}  // namespace simexplain
