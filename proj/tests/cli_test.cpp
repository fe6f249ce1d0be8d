// Copyright 2026 The a3ct Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::path(::testing::TempDir()) /
            ("a3ct_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  RunResult Run(const std::string& args, const fs::path& output_root) const {
    const fs::path out = root_ / "stdout.txt";
    const fs::path err = root_ / "stderr.txt";
    const std::string cmd = "A3CT_OUTPUT_ROOT='" + output_root.string() + "' '" A3CT_CLI_PATH "' " +
                            args + " >'" + out.string() + "' 2>'" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = Slurp(out);
    r.err = Slurp(err);
    return r;
  }
  RunResult Run(const std::string& args) const { return Run(args, root_); }

  fs::path WriteConfig(const std::string& name, const std::string& text) const {
    const fs::path p = root_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path root_;
};

constexpr const char* kPipeline = R"(
[train]
epochs = 3
n_steps = 25
n_workers = 2
seed = 4
checkpoint_every = 1
reward_scale = 0.01

[env]
episode_length = 60

[arch]
name = "5"

[data]
synth_bars = 400
synth_test_bars = 150
train_csv = "train.csv"
test_csv = "test.csv"
synth_output = "train.csv"
synth_test_output = "test.csv"
checkpoint = "runs/train_5_seed4/model"
)";

TEST_F(CliTest, HelpAndUsage) {
  EXPECT_EQ(Run("--help").code, 0);
  EXPECT_EQ(Run("").code, 1);
  EXPECT_EQ(Run("frobnicate").code, 1);
  EXPECT_EQ(Run("--workers 0 gradcheck").code, 1);
}

TEST_F(CliTest, GradcheckModelFivePasses) {
  const auto cfg = WriteConfig("g.toml", "[arch]\nname = \"5\"\n");
  const auto r = Run("--config '" + cfg.string() + "' gradcheck");
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("max relative error"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("32260 parameters"), std::string::npos) << r.out;
}

TEST_F(CliTest, UnknownConfigKeyExitsWithConfigError) {
  const auto cfg = WriteConfig("bad.toml", "[train]\nlearnig_rate = 0.1\n");
  const auto r = Run("--config '" + cfg.string() + "' train");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("learnig_rate"), std::string::npos) << r.err;
}

TEST_F(CliTest, MissingConfigFileIsIoError) {
  EXPECT_EQ(Run("--config '" + (root_ / "nope.toml").string() + "' train").code, 3);
}

TEST_F(CliTest, TrainThenBacktestProducesAllArtifacts) {
  const auto cfg = WriteConfig("p.toml", kPipeline);
  const std::string c = "--config '" + cfg.string() + "' ";
  auto r = Run(c + "synth");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(root_ / "train.csv"));
  EXPECT_TRUE(fs::exists(root_ / "test.csv"));

  r = Run(c + "train");
  ASSERT_EQ(r.code, 0) << r.err;
  const fs::path run = root_ / "runs" / "train_5_seed4";
  for (const char* f : {"model.json", "model.bin", "curve.csv", "run_manifest.json",
                        "checkpoints/epoch_00001.json", "checkpoints/epoch_00003.bin"}) {
    EXPECT_TRUE(fs::exists(run / f)) << f;
  }
  EXPECT_NE(r.out.find(run.string()), std::string::npos) << r.out;

  r = Run(c + "backtest");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("Sharpe ratio"), std::string::npos) << r.out;
  fs::path report_dir;
  for (const auto& e : fs::directory_iterator(root_ / "runs")) {
    if (e.path().filename().string().rfind("backtest_", 0) == 0) report_dir = e.path();
  }
  ASSERT_FALSE(report_dir.empty());
  EXPECT_NE(report_dir.filename().string().find("train_5_seed4.model"), std::string::npos);
  for (const char* f : {"equity.csv", "transactions.csv", "positions.csv", "report.json",
                        "report.txt", "run_manifest.json"}) {
    EXPECT_TRUE(fs::exists(report_dir / f)) << f;
  }
  const std::string manifest = Slurp(report_dir / "run_manifest.json");
  EXPECT_NE(manifest.find("\"equity.csv\""), std::string::npos) << manifest;
  EXPECT_NE(manifest.find("\"config_hash\""), std::string::npos) << manifest;

  const auto rcfg = WriteConfig(
      "r.toml", std::string(kPipeline) + "report_dir = \"" + report_dir.string() + "\"\n");
  r = Run("--config '" + rcfg.string() + "' report");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("Fraction of winning transactions"), std::string::npos) << r.out;
}

TEST_F(CliTest, BacktestWithMismatchedFeatureDimNamesIt) {
  const auto cfg = WriteConfig("p.toml", kPipeline);
  const std::string c = "--config '" + cfg.string() + "' ";
  ASSERT_EQ(Run(c + "synth").code, 0);
  ASSERT_EQ(Run(c + "train").code, 0);
  std::string text = kPipeline;
  text.replace(text.find("name = \"5\""), 10, "name = \"5\"\nfeature_dim = 12");
  const auto bad = WriteConfig("m.toml", text);
  const auto r = Run("--config '" + bad.string() + "' backtest");
  EXPECT_EQ(r.code, 5) << r.err;
  EXPECT_NE(r.err.find("feature_dim"), std::string::npos) << r.err;
}

TEST_F(CliTest, CorruptCheckpointExitsWithChecksumCode) {
  const auto cfg = WriteConfig("p.toml", kPipeline);
  const std::string c = "--config '" + cfg.string() + "' ";
  ASSERT_EQ(Run(c + "synth").code, 0);
  ASSERT_EQ(Run(c + "train").code, 0);
  const fs::path bin = root_ / "runs" / "train_5_seed4" / "model.bin";
  fs::resize_file(bin, fs::file_size(bin) / 2);
  const auto r = Run(c + "backtest");
  EXPECT_EQ(r.code, 4) << r.err;
  EXPECT_NE(r.err.find("checksum"), std::string::npos) << r.err;
}

TEST_F(CliTest, DeterministicRerunsReproduceManifests) {
  const auto cfg = WriteConfig("p.toml", kPipeline);
  const std::string c = "--config '" + cfg.string() + "' --deterministic --seed 11 ";
  std::string manifests[2];
  for (int i = 0; i < 2; ++i) {
    const fs::path out = root_ / ("rep" + std::to_string(i));
    fs::create_directories(out);
    ASSERT_EQ(Run(c + "synth", out).code, 0);
    auto r = Run(c + "train", out);
    ASSERT_EQ(r.code, 0) << r.err;
    manifests[i] = Slurp(out / "runs" / "train_5_seed11" / "run_manifest.json");
  }
  EXPECT_FALSE(manifests[0].empty());
  EXPECT_EQ(manifests[0], manifests[1]);
  EXPECT_NE(manifests[0].find("\"deterministic\": true"), std::string::npos) << manifests[0];
  EXPECT_NE(manifests[0].find("model.bin"), std::string::npos);
}

}  // namespace
