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

#include <cmath>
#include <numeric>
#include <random>

#include "a3ct/error.hpp"
#include "a3ct/market_env.hpp"
#include "oracles.hpp"

namespace a3ct {
namespace {

BarSeries FromCloses(const std::vector<double>& closes, std::int64_t t0 = 0) {
  BarSeries s;
  for (std::size_t i = 0; i < closes.size(); ++i) {
    const double open = i == 0 ? closes[0] : closes[i - 1];
    s.bars.push_back(Bar{t0 + static_cast<std::int64_t>(i), open,
                         std::max(open, closes[i]), std::min(open, closes[i]), closes[i],
                         1.0});
  }
  return s;
}

struct Fixture {
  std::shared_ptr<const BarSeries> series;
  std::shared_ptr<const FeatureMatrix> features;
  MarketEnv env;

  Fixture(BarSeries s, EnvConfig cfg)
      : series(std::make_shared<const BarSeries>(std::move(s))),
        features(std::make_shared<const FeatureMatrix>(*series, cfg.feature_dim)),
        env(series, features, cfg) {}
};

std::vector<double> Closes(const BarSeries& s) {
  std::vector<double> c;
  for (const auto& b : s.bars) c.push_back(b.close);
  return c;
}

std::vector<std::int64_t> Times(const BarSeries& s) {
  std::vector<std::int64_t> t;
  for (const auto& b : s.bars) t.push_back(b.timestamp);
  return t;
}

std::vector<double> DyadicWalk(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> step(-4, 4);
  std::vector<double> c{1000.0};
  for (std::size_t i = 1; i < n; ++i) c.push_back(c.back() + 0.25 * step(rng));
  return c;
}

TEST(PortfolioValue, Examples) {
  EXPECT_EQ(PortfolioValue(100, 0, 12345.0), 100.0);
  EXPECT_EQ(PortfolioValue(100, 1, 50), 150.0);
  EXPECT_EQ(PortfolioValue(100, -1, 50), 50.0);
}

TEST(ComputeReward, Examples) {
  EnvConfig cfg;
  EXPECT_EQ(ComputeReward(110, 100, 1, 1, 5, cfg), 10.0);
  EXPECT_EQ(ComputeReward(110, 100, 0, 1, 1, cfg), 8.75);
  EXPECT_EQ(ComputeReward(100, 100, -1, 1, 1, cfg), -2.5);
}

TEST(ComputeReward, MultiplierAndPenalty) {
  EnvConfig cfg;
  cfg.train_fee_multiplier = 2.0;
  cfg.repetition_penalty = 0.5;
  cfg.repetition_grace = 3;
  EXPECT_EQ(ComputeReward(0, 0, 1, 0, 1, cfg), -2.5);
  EXPECT_EQ(ComputeReward(0, 0, 1, 1, 3, cfg), 0.0);
  EXPECT_EQ(ComputeReward(0, 0, 1, 1, 7, cfg), -2.0);
}

TEST(Features, ThreeBarToy) {
  BarSeries s;
  s.bars = {Bar{0, 100, 101, 99, 100, 10}, Bar{1, 100, 112, 100, 110, 20},
            Bar{2, 110, 111, 98, 99, 30}};
  const auto f0 = RawFeatures(s, 0, 10);
  const std::vector<double> e0 = {0, 2.0 / 100, 0, 0, 0, 1, 0, 0, 0, 0};
  for (std::size_t j = 0; j < 10; ++j) EXPECT_DOUBLE_EQ(f0[j], e0[j]) << j;

  const double two_pi = 2.0 * std::acos(-1.0);
  const auto f2 = RawFeatures(s, 2, 10);
  const double vol_sd = std::sqrt((100.0 + 0.0 + 100.0) / 3.0);
  const std::vector<double> e2 = {std::log(99.0 / 110.0),
                                  13.0 / 99.0,
                                  -11.0 / 99.0,
                                  10.0 / vol_sd,
                                  std::sin(two_pi * 2 / 1440),
                                  std::cos(two_pi * 2 / 1440),
                                  std::log(110.0 / 100.0),
                                  0,
                                  0,
                                  0};
  for (std::size_t j = 0; j < 10; ++j) EXPECT_NEAR(f2[j], e2[j], 1e-15) << j;
  EXPECT_DOUBLE_EQ(RawFeatures(s, 1, 10)[3], 1.0);
}

TEST(Features, ConstantPriceGivesZeroReturns) {
  const auto s = FromCloses(std::vector<double>(50, 123.0));
  for (std::size_t t = 0; t < s.size(); ++t) {
    const auto f = RawFeatures(s, t, 10);
    for (std::size_t j : {0u, 1u, 2u, 6u, 7u, 8u, 9u}) EXPECT_EQ(f[j], 0.0);
  }
}

TEST(Features, LeadingSlotsZeroPadded) {
  const auto s = FromCloses({100, 101, 102, 103, 104});
  const auto state = MakeState(s, 1, 4, 10);
  ASSERT_EQ(state.size(), 40u);
  for (std::size_t i = 0; i < 20; ++i) EXPECT_EQ(state[i], 0.0);
  const auto f0 = RawFeatures(s, 0, 10);
  const auto f1 = RawFeatures(s, 1, 10);
  for (std::size_t j = 0; j < 10; ++j) {
    EXPECT_EQ(state[20 + j], f0[j]);
    EXPECT_EQ(state[30 + j], f1[j]);
  }
  EXPECT_THROW(MakeState(s, 5, 1, 10), Error);
}

TEST(Features, MatrixAgreesWithDirectStateAndAppliesScales) {
  SyntheticParams p;
  p.bars = 300;
  const auto s = GenerateSynthetic(SyntheticKind::kRandomWalk, p, 2);
  const FeatureMatrix raw(s, 10);
  for (std::size_t t : {0u, 3u, 150u, 299u}) EXPECT_EQ(MakeState(raw, t, 6), MakeState(s, t, 6, 10));
  const auto scales = FitFeatureScales(s, 10);
  const FeatureMatrix scaled(s, 10, scales);
  for (std::size_t j = 0; j < 10; ++j) {
    double ss = 0.0;
    for (std::size_t t = 0; t < s.size(); ++t) ss += scaled.row(t)[j] * scaled.row(t)[j];
    EXPECT_NEAR(std::sqrt(ss / 300.0), 1.0, 1e-12) << j;
  }
  for (std::size_t t = 0; t < s.size(); ++t) {
    for (double v : scaled.row(t)) EXPECT_TRUE(std::isfinite(v));
  }
}

TEST(Features, AuxiliaryColumnsFillExtraDimensions) {
  auto s = FromCloses({100, 101, 102});
  s.aux_names = {"a", "b"};
  s.aux = {{1, 2}, {3, 4}, {5, 6}};
  const auto f = RawFeatures(s, 1, 12);
  EXPECT_EQ(f[10], 3.0);
  EXPECT_EQ(f[11], 4.0);
  try {
    RawFeatures(s, 1, 13);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMismatch);
  }
}

TEST(MarketEnv, ResetSetsStartCapital) {
  EnvConfig cfg;
  cfg.start_capital = 5000;
  Fixture fx(FromCloses({10, 11, 12, 13}), cfg);
  const auto s1 = fx.env.Reset(1);
  EXPECT_EQ(fx.env.state().portfolio_value, 5000.0);
  EXPECT_EQ(fx.env.state().position, 0);
  EXPECT_EQ(fx.env.state().run_length, 0);
  EXPECT_EQ(fx.env.Reset(1), s1);
  EXPECT_THROW(fx.env.Reset(3), Error);
}

TEST(MarketEnv, EpisodeEndsExactlyAtSeriesEnd) {
  EnvConfig cfg;
  cfg.episode_length = 1000;
  Fixture fx(FromCloses(DyadicWalk(50, 1)), cfg);
  constexpr std::size_t kSteps = 7;
  fx.env.Reset(49 - kSteps);
  for (std::size_t k = 0; k < kSteps; ++k) {
    const auto r = fx.env.Step(0);
    EXPECT_EQ(r.done, k + 1 == kSteps);
  }
  EXPECT_EQ(fx.env.state().cursor, 49u);
  EXPECT_THROW(fx.env.Step(0), Error);
}

TEST(MarketEnv, EpisodeLengthLimit) {
  EnvConfig cfg;
  cfg.episode_length = 3;
  Fixture fx(FromCloses(DyadicWalk(50, 1)), cfg);
  fx.env.Reset(0);
  EXPECT_FALSE(fx.env.Step(1).done);
  EXPECT_FALSE(fx.env.Step(1).done);
  EXPECT_TRUE(fx.env.Step(1).done);
  try {
    fx.env.Step(1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kState);
  }
}

TEST(MarketEnv, RejectsActionOutsideSet) {
  Fixture fx(FromCloses({10, 11, 12}), EnvConfig{});
  fx.env.Reset(0);
  EXPECT_THROW(fx.env.Step(2), Error);
  EXPECT_THROW(fx.env.Step(-2), Error);
}

TEST(MarketEnv, NeutralPolicyKeepsCashAndEarnsNothing) {
  EnvConfig cfg;
  cfg.start_capital = 777;
  cfg.episode_length = 100000;
  SyntheticParams p;
  p.bars = 400;
  Fixture fx(GenerateSynthetic(SyntheticKind::kRandomWalk, p, 4), cfg);
  fx.env.Reset(0);
  double total = 0.0;
  bool done = false;
  while (!done) {
    const auto r = fx.env.Step(0);
    total += r.reward;
    done = r.done;
  }
  EXPECT_EQ(total, 0.0);
  EXPECT_EQ(fx.env.state().cash, 777.0);
  EXPECT_EQ(fx.env.state().operations, 0);
}

TEST(MarketEnv, ScriptedPathMatchesLedgerOracle) {
  const std::vector<double> closes = {100, 101.5, 99.25, 102, 102, 98.5, 97.75, 99, 100.5, 101, 103};
  const std::vector<int> actions = {0, 1, 1, 0, -1, -1, 0, 1, -1, -1};
  EnvConfig cfg;
  cfg.start_capital = 1000;
  cfg.episode_length = 10;
  Fixture fx(FromCloses(closes), cfg);
  fx.env.Reset(0);
  std::vector<double> rewards;
  for (int a : actions) rewards.push_back(fx.env.Step(a).reward);
  const auto L = oracle::Replay(closes, Times(*fx.series), actions, 1.25, 1.0, 0.0, 60, 1000);
  EXPECT_EQ(rewards, L.rewards);
  EXPECT_EQ(fx.env.state().cash, L.cash);
  EXPECT_EQ(fx.env.state().position, L.position);
  EXPECT_EQ(fx.env.state().portfolio_value, L.marked_values.back());
  EXPECT_EQ(fx.env.state().commission_paid, L.commission);
  EXPECT_EQ(fx.env.state().operations, L.operations);
  EXPECT_TRUE(fx.env.done());
}

TEST(MarketEnv, RandomPathsMatchOracleWithMultiplierAndPenalty) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto closes = DyadicWalk(120, 100 + trial);
    std::vector<int> actions;
    std::uniform_int_distribution<int> pick(-1, 1);
    std::bernoulli_distribution hold(0.8);
    int a = 0;
    for (int k = 0; k < 119; ++k) {
      if (!hold(rng)) a = pick(rng);
      actions.push_back(a);
    }
    EnvConfig cfg;
    cfg.train_fee_multiplier = 3.0;
    cfg.repetition_penalty = 0.25;
    cfg.repetition_grace = 5;
    cfg.episode_length = 119;
    Fixture fx(FromCloses(closes), cfg);
    fx.env.Reset(0);
    std::vector<double> rewards;
    for (int x : actions) rewards.push_back(fx.env.Step(x).reward);
    const auto L = oracle::Replay(closes, Times(*fx.series), actions, 1.25, 3.0, 0.25, 5, 0);
    EXPECT_EQ(rewards, L.rewards) << trial;
    EXPECT_EQ(fx.env.state().cash, L.cash) << trial;
  }
}

TEST(MarketEnv, BuyAndHoldOnRisingPrices) {
  std::vector<double> closes;
  for (int i = 0; i < 40; ++i) closes.push_back(500 + 0.5 * i * i);
  EnvConfig cfg;
  cfg.episode_length = 39;
  Fixture fx(FromCloses(closes), cfg);
  fx.env.Reset(0);
  double total = 0.0;
  for (int k = 0; k < 39; ++k) total += fx.env.Step(1).reward;
  EXPECT_EQ(total, closes.back() - closes.front() - 1.25);
}

// Identity, telescoping and commission conservation over a long random run.
TEST(MarketEnv, AccountingInvariantsOverLongRun) {
  constexpr std::size_t kBars = 100001;
  SyntheticParams p;
  p.bars = kBars;
  p.sigma = 0.001;
  const auto s = GenerateSynthetic(SyntheticKind::kRandomWalk, p, 8);
  EnvConfig cfg;
  cfg.episode_length = static_cast<int>(kBars);
  cfg.feature_dim = 1;
  Fixture fx(s, cfg);
  fx.env.Reset(0);
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> pick(-1, 1);
  double total = 0.0;
  long abs_changes = 0;
  int prev = 0;
  const double c0 = fx.env.state().portfolio_value;
  double max_identity_err = 0.0;
  while (!fx.env.done()) {
    const int a = pick(rng);
    total += fx.env.Step(a).reward;
    abs_changes += std::abs(a - prev);
    prev = a;
    const auto& st = fx.env.state();
    const double identity = st.cash + st.position * s[st.cursor].close;
    max_identity_err = std::max(max_identity_err, std::abs(identity - st.portfolio_value));
  }
  const auto& st = fx.env.state();
  EXPECT_EQ(st.steps, static_cast<int>(kBars - 1));
  EXPECT_LE(max_identity_err, 1e-9);
  EXPECT_EQ(st.operations, abs_changes);
  EXPECT_EQ(st.commission_paid, 1.25 * static_cast<double>(abs_changes));
  const double telescoped = (st.portfolio_value - c0) - 1.25 * static_cast<double>(abs_changes);
  EXPECT_NEAR(total, telescoped, 1e-9 * std::max(1.0, std::abs(telescoped)) + 1e-6);
}

TEST(MarketEnv, TelescopingIsExactOnDyadicPrices) {
  const auto closes = DyadicWalk(2001, 3);
  EnvConfig cfg;
  cfg.episode_length = 2000;
  Fixture fx(FromCloses(closes), cfg);
  fx.env.Reset(0);
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> pick(-1, 1);
  double total = 0.0;
  long changes = 0;
  int prev = 0;
  while (!fx.env.done()) {
    const int a = pick(rng);
    total += fx.env.Step(a).reward;
    changes += std::abs(a - prev);
    prev = a;
  }
  EXPECT_EQ(total, fx.env.state().portfolio_value - 1.25 * static_cast<double>(changes));
}

TEST(MarketEnv, RoundTripCostsTwoFifty) {
  Fixture fx(FromCloses({100, 100, 100}), EnvConfig{});
  fx.env.Reset(0);
  const double r1 = fx.env.Step(1).reward;
  const double r2 = fx.env.Step(0).reward;
  EXPECT_EQ(r1 + r2, -2.5);
  EXPECT_EQ(fx.env.state().commission_paid, 2.5);
  EXPECT_EQ(fx.env.state().net_equity(), -2.5);
}

TEST(MarketEnv, RunLengthCountsRepeats) {
  Fixture fx(FromCloses(DyadicWalk(10, 2)), EnvConfig{});
  fx.env.Reset(0);
  const int path[] = {0, 0, 1, 1, 1, -1};
  const int expect[] = {1, 2, 1, 2, 3, 1};
  for (int k = 0; k < 6; ++k) {
    fx.env.Step(path[k]);
    EXPECT_EQ(fx.env.state().run_length, expect[k]) << k;
  }
}

TEST(MarketEnv, SteppingIsPure) {
  SyntheticParams p;
  p.bars = 500;
  const auto s = GenerateSynthetic(SyntheticKind::kSine, p, 0);
  EnvConfig cfg;
  cfg.depth = 3;
  cfg.repetition_penalty = 0.1;
  cfg.repetition_grace = 4;
  auto run = [&] {
    Fixture fx(s, cfg);
    fx.env.Reset(10);
    std::vector<double> trace;
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> pick(-1, 1);
    while (!fx.env.done()) {
      const auto r = fx.env.Step(pick(rng));
      trace.push_back(r.reward);
      trace.insert(trace.end(), r.state.begin(), r.state.end());
    }
    return trace;
  };
  EXPECT_EQ(run(), run());
}

TEST(EnvConfig, ValidateRejectsBadValues) {
  EnvConfig cfg;
  cfg.fee_per_operation = -1;
  EXPECT_THROW(cfg.Validate(), Error);
  cfg = EnvConfig{};
  cfg.train_fee_multiplier = 0.5;
  EXPECT_THROW(cfg.Validate(), Error);
  cfg = EnvConfig{};
  cfg.episode_length = 0;
  EXPECT_THROW(cfg.Validate(), Error);
  cfg = EnvConfig{};
  cfg.repetition_penalty = -0.1;
  EXPECT_THROW(cfg.Validate(), Error);
}

}  // namespace
}  // namespace a3ct
