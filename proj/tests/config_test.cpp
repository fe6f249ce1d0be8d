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

#include <filesystem>
#include <fstream>

#include "a3ct/config.hpp"
#include "a3ct/error.hpp"

namespace a3ct {
namespace {

std::string ConfigError(std::string_view text) {
  try {
    ParseConfig(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "config accepted:\n" << text;
  return {};
}

TEST(Config, EmptyTrainSectionKeepsDefaults) {
  const auto c = ParseConfig("[train]\n");
  EXPECT_EQ(c.train.n_steps, 200);
  EXPECT_EQ(c.train.n_workers, 10);
  EXPECT_EQ(c.train.learning_rate, 1e-3);
  EXPECT_EQ(c.train.epochs, 1000);
  EXPECT_EQ(c.train.rmsprop_decay, 0.99);
  EXPECT_EQ(c.train.rmsprop_epsilon, 1e-8);
  EXPECT_EQ(c.train.grad_clip_norm, 40.0);
  EXPECT_EQ(c.train.entropy_coeff, 0.0);
  EXPECT_EQ(c.train.advantage, AdvantageMode::kMultiStep);
  EXPECT_EQ(c.env.fee_per_operation, 1.25);
  EXPECT_EQ(c.env.train_fee_multiplier, 1.0);
  EXPECT_EQ(c.env.repetition_penalty, 0.0);
  EXPECT_EQ(c.env.episode_length, 200);
  EXPECT_EQ(c.arch.feature_dim, 10);
  EXPECT_FALSE(c.deterministic);
}

TEST(Config, NamedArchitectureResolves) {
  const auto c = ParseConfig("[arch]\nname = \"5coolV\"\n");
  EXPECT_EQ(c.arch.name, "5coolV");
  EXPECT_EQ(c.arch.depth, 6);
  EXPECT_EQ(c.arch.dropout, 0.5);
  EXPECT_EQ(c.arch.lstm, 64);
  EXPECT_EQ(c.arch.dense_v, 32);
  EXPECT_FALSE(c.arch.dense.has_value());
  EXPECT_FALSE(c.arch.dense_a.has_value());
  EXPECT_EQ(c.env.depth, 6);
}

TEST(Config, NamedArchitectureWithFeatureDim) {
  const auto c = ParseConfig("[arch]\nname = \"9\"\nfeature_dim = 12\n");
  EXPECT_EQ(c.arch.feature_dim, 12);
  EXPECT_EQ(c.env.feature_dim, 12);
  EXPECT_EQ(c.arch.lstm, 64);
}

TEST(Config, ExplicitArchitecture) {
  const auto c = ParseConfig(
      "[arch]\nname = \"mine\"\ndepth = 3\ndense = 16\ndropout = 0.2\nlstm = 8\ndense_a = 4\n");
  EXPECT_EQ(c.arch.name, "mine");
  EXPECT_EQ(c.arch.depth, 3);
  EXPECT_EQ(c.arch.dense, 16);
  EXPECT_EQ(c.arch.dropout, 0.2);
  EXPECT_EQ(c.arch.lstm, 8);
  EXPECT_EQ(c.arch.dense_a, 4);
  EXPECT_FALSE(c.arch.dense_v.has_value());
}

TEST(Config, GammaOutOfRangeNamesConstraint) {
  const auto what = ConfigError("[train]\ngamma = 1.5\n");
  EXPECT_NE(what.find("gamma"), std::string::npos) << what;
  EXPECT_NE(what.find("gamma ∈ [0,1]"), std::string::npos) << what;
  EXPECT_NE(what.find("line 2"), std::string::npos) << what;
}

TEST(Config, UnknownKeysAndSectionsAreErrors) {
  EXPECT_NE(ConfigError("[train]\nlearnig_rate = 0.1\n").find("learnig_rate"), std::string::npos);
  EXPECT_NE(ConfigError("[optim]\nlr = 1\n").find("optim"), std::string::npos);
  ConfigError("seed = 3\n");
  ConfigError("[train]\nseed = 1\nseed = 2\n");
  ConfigError("[train\nseed = 1\n");
  ConfigError("[train]\nseed\n");
}

TEST(Config, TypeErrors) {
  EXPECT_NE(ConfigError("[train]\nn_steps = \"many\"\n").find("expected"), std::string::npos);
  ConfigError("[train]\nn_steps = 2.5\n");
  ConfigError("[data]\ntrain_csv = 5\n");
  ConfigError("[train]\nalpha = abc\n");
}

TEST(Config, ConstraintViolations) {
  ConfigError("[train]\nn_workers = 0\n");
  ConfigError("[train]\nlearning_rate = 0\n");
  ConfigError("[train]\nalpha = 1.5\n");
  ConfigError("[train]\nadvantage = \"gae\"\n");
  ConfigError("[env]\ntrain_fee_multiplier = 0.5\n");
  ConfigError("[env]\nepisode_length = 0\n");
  ConfigError("[data]\nsynth_kind = \"square\"\n");
  ConfigError("[data]\nsynth_amplitude = 1.0\n");
  ConfigError("[arch]\ndepth = 0\n");
  ConfigError("[arch]\ndropout = 1.0\ndepth = 2\n");
}

TEST(Config, ArchitectureResolutionErrors) {
  EXPECT_NE(ConfigError("[arch]\nname = \"5\"\nlstm = 32\n").find("named architecture"),
            std::string::npos);
  EXPECT_NE(ConfigError("[arch]\nname = \"77\"\n").find("unknown architecture"), std::string::npos);
}

TEST(Config, CommentsAndWhitespace) {
  const auto c = ParseConfig(
      "# experiment\n"
      "  [train]  \n"
      "seed = 17   # inline\n"
      "\n"
      "[data]\n"
      "train_csv = \"a#b.csv\"  # hash inside quotes survives\n"
      "synth_kind = \"trend\"\n"
      "days = 90\n");
  EXPECT_EQ(c.train.seed, 17u);
  EXPECT_EQ(c.data.train_csv, "a#b.csv");
  EXPECT_EQ(c.data.synth_kind, SyntheticKind::kTrend);
  EXPECT_EQ(c.data.days, 90.0);
}

TEST(Config, CanonicalFormReparsesToSameConfig) {
  const auto c = ParseConfig(
      "[train]\nseed = 3\nlearning_rate = 0.0005\nadvantage = \"one_step\"\n"
      "[env]\nrepetition_penalty = 0.25\n"
      "[arch]\nname = \"12\"\n"
      "[data]\ntrain_csv = \"x.csv\"\nsynth_amplitude = 0.05\n");
  const auto text = c.Canonical();
  const auto again = ParseConfig(text);
  EXPECT_EQ(again.Canonical(), text);
  EXPECT_EQ(again.Hash(), c.Hash());
  EXPECT_EQ(again.train.learning_rate, 0.0005);
  EXPECT_EQ(again.arch.dense_a, 32);
  auto other = c;
  other.train.seed = 4;
  EXPECT_NE(other.Hash(), c.Hash());
}

TEST(Config, ValidateCatchesOverrides) {
  auto c = ParseConfig("[train]\n");
  c.train.n_workers = 0;
  try {
    c.Validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
}

TEST(Config, LoadFromFile) {
  const auto path = std::filesystem::path(::testing::TempDir()) / "a3ct_config_test.toml";
  {
    std::ofstream out(path);
    out << "[train]\nepochs = 3\n";
  }
  EXPECT_EQ(LoadConfig(path).train.epochs, 3);
  std::filesystem::remove(path);
  try {
    LoadConfig(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

}  // namespace
}  // namespace a3ct
