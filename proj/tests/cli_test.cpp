// Copyright 2026 The tomolab Authors
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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "tomolab/bench.hpp"
#include "tomolab/serialize.hpp"

namespace tomolab {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("tomolab_cli_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Runs the CLI inside the test directory; stdout and stderr are captured.
  int run(const std::string& args, const std::string& env = "") {
    const std::string cmd = "cd '" + dir_.string() + "' && " + env + (env.empty() ? "" : " ") + "'" +
                            TOMOLAB_CLI_PATH + "' " + args + " > stdout.txt 2> stderr.txt";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string file(const std::string& name) const { return read_text(dir_ / name); }

  fs::path dir_;
};

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("frobnicate"), 1);
  EXPECT_NE(file("stderr.txt").find("Usage"), std::string::npos);
  EXPECT_EQ(run("qst-run --no-such-flag"), 1);
  EXPECT_EQ(run("--help"), 0);
}

TEST_F(CliTest, BuildThenCheck) {
  ASSERT_EQ(run("povm-build --name mub --dim 4 --out mub4.json"), 0);
  const Povm loaded = load_povm(dir_ / "mub4.json");
  EXPECT_EQ(loaded.num_settings(), 5u);
  EXPECT_TRUE(fs::exists(dir_ / "mub4.json.manifest.json"));
  ASSERT_EQ(run("povm-check --file mub4.json --pairs 20 --states 3"), 0);
  const Json report = Json::parse(file("stdout.txt"));
  EXPECT_EQ(report.at("rank").get<int>(), 16);
  EXPECT_TRUE(report.at("fully_ic").get<bool>());
}

TEST_F(CliTest, CheckRejectsIncompletePovm) {
  Json j = povm_to_json(build_standard_basis(2));
  j["settings"][0]["effects"][0] = matrix_to_json(MatrixXc(1.01 * MatrixXc::Identity(2, 2)));
  write_text_atomic(dir_ / "bad.json", j.dump());
  EXPECT_EQ(run("povm-check --file bad.json"), 1);
  EXPECT_NE(file("stderr.txt").find("completeness residual"), std::string::npos);
  EXPECT_EQ(run("povm-check --file missing.json"), 1);
  EXPECT_EQ(run("povm-build --name nope --dim 4 --out x.json"), 1);
}

TEST_F(CliTest, QstRunIsDeterministicAcrossWorkers) {
  const std::string config = R"({"dim": 4, "povms": ["mub", "psi"], "n_states": 4})";
  write_text_atomic(dir_ / "config.in.json", config);
  ASSERT_EQ(run("qst-run --config config.in.json --seed 7 --jobs 1 --out-dir a"), 0);
  ASSERT_EQ(run("qst-run --config config.in.json --seed 7 --jobs 3 --out-dir b"), 0);
  EXPECT_EQ(file("a/trials.csv"), file("b/trials.csv"));
  EXPECT_EQ(file("a/aggregate.csv"), file("b/aggregate.csv"));
  EXPECT_EQ(file("config.in.json"), config);
  const Json manifest = Json::parse(file("a/manifest.json"));
  EXPECT_EQ(manifest.at("seed").get<int>(), 7);
  EXPECT_EQ(manifest.at("config_hash").get<std::string>().size(), 16u);
  EXPECT_FALSE(manifest.at("version").get<std::string>().empty());
  // The emitted config reproduces the run.
  EXPECT_EQ(config_to_json(config_from_json(read_json(dir_ / "a/config.json"))).dump(),
            read_json(dir_ / "a/config.json").dump());
}

TEST_F(CliTest, SeedPrecedence) {
  ASSERT_EQ(run("qst-run --povm mub --dim 4 --n-states 2 --out-dir env", "TOMOLAB_SEED=5"), 0);
  EXPECT_EQ(Json::parse(file("env/manifest.json")).at("seed").get<int>(), 5);
  ASSERT_EQ(run("qst-run --povm mub --dim 4 --n-states 2 --seed 9 --out-dir flag", "TOMOLAB_SEED=5"), 0);
  EXPECT_EQ(Json::parse(file("flag/manifest.json")).at("seed").get<int>(), 9);
  write_text_atomic(dir_ / "c.json", R"({"dim": 4, "povms": ["mub"], "n_states": 2, "seed": 11})");
  ASSERT_EQ(run("qst-run --config c.json --out-dir cfg", "TOMOLAB_SEED=5"), 0);
  EXPECT_EQ(Json::parse(file("cfg/manifest.json")).at("seed").get<int>(), 11);
  EXPECT_EQ(run("qst-run --povm mub --dim 4 --n-states 2", "TOMOLAB_SEED=abc"), 1);
}

TEST_F(CliTest, SweepWritesOneRowPerBasisCount) {
  ASSERT_EQ(run("qst-sweep --povm mub --dim 16 --n-max 17 --n-states 1 --out-dir s"), 0);
  std::istringstream plot(file("s/sweep_mub.dat"));
  std::string line;
  int rows = 0;
  std::getline(plot, line);
  EXPECT_EQ(line, "N,mean_infidelity");
  while (std::getline(plot, line)) ++rows;
  EXPECT_EQ(rows, 17);
}

TEST_F(CliTest, TofSynthesizeAndRefit) {
  ASSERT_EQ(run("tof-fit --populations 0.5,0.5,0,0,0,0,0,0,0,0,0,0,0,0,0,0 --out-dir t"), 0);
  const Json fit = Json::parse(file("t/tof_fit.json"));
  EXPECT_NEAR(fit.at("weights")[0].get<double>(), 0.5, 1e-8);
  ASSERT_EQ(run("tof-fit --signal t/tof_signal.csv --out-dir u"), 0);
  EXPECT_NEAR(Json::parse(file("u/tof_fit.json")).at("weights")[1].get<double>(), 0.5, 1e-8);
  EXPECT_EQ(run("tof-fit --out-dir v"), 1);
  EXPECT_EQ(run("tof-fit --populations 1,2 --out-dir v"), 1);
}

}  // namespace
}  // namespace tomolab
