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

#ifndef A3CT_MARKET_ENV_HPP
#define A3CT_MARKET_ENV_HPP

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "a3ct/market_data.hpp"

namespace a3ct {

inline constexpr int kBaseFeatureCount = 10;
inline constexpr int kVolumeWindow = 60;

// Per-minute features, before scaling:
//   0     log(close_t / close_{t-1})
//   1     (high - low) / close
//   2     (close - open) / close
//   3     volume z-score over the trailing 60 minutes (inclusive)
//   4, 5  sin, cos of the minute-of-day phase
//   6..9  log returns lagged 1..4 minutes
// feature_dim < 10 keeps a prefix; feature_dim > 10 appends auxiliary columns.
std::vector<double> RawFeatures(const BarSeries& series, std::size_t t,
                                int feature_dim);

// Root-mean-square of each raw feature over `series` (1 where it is zero).
// Scales are fitted on training data and frozen into checkpoints.
std::vector<double> FitFeatureScales(const BarSeries& series, int feature_dim);

// Scaled feature rows for a whole series.
class FeatureMatrix {
 public:
  FeatureMatrix(const BarSeries& series, int feature_dim,
                std::span<const double> scales = {});

  std::size_t rows() const { return rows_; }
  int feature_dim() const { return dim_; }
  std::span<const double> row(std::size_t t) const {
    return {values_.data() + t * static_cast<std::size_t>(dim_),
            static_cast<std::size_t>(dim_)};
  }

 private:
  std::size_t rows_;
  int dim_;
  std::vector<double> values_;
};

// Concatenates the feature rows for minutes cursor-depth+1 .. cursor, oldest
// first; minutes before the series start are zero.
std::vector<double> MakeState(const FeatureMatrix& features, std::size_t cursor,
                              int depth);
std::vector<double> MakeState(const BarSeries& series, std::size_t cursor,
                              int depth, int feature_dim);

struct EnvConfig {
  double fee_per_operation = 1.25;  // rubles per one-unit buy or sell
  double train_fee_multiplier = 1.0;
  double repetition_penalty = 0.0;  // rubles per step beyond the grace window
  int repetition_grace = 60;
  int episode_length = 200;
  double start_capital = 0.0;
  int feature_dim = kBaseFeatureCount;
  int depth = 1;

  void Validate() const;
};

struct EnvState {
  std::size_t cursor = 0;
  int position = 0;
  double cash = 0.0;  // trading cash, excluding commission
  int run_length = 0;
  double portfolio_value = 0.0;  // cash + position * close(cursor)
  double commission_paid = 0.0;  // true fees, never multiplied
  long operations = 0;
  int steps = 0;

  double net_equity() const { return portfolio_value - commission_paid; }
};

double PortfolioValue(double cash, int position, double price);

// (c_t - c_prev) - fee * multiplier * |a_t - a_prev|
//   - penalty * max(0, run_length - grace)
double ComputeReward(double c_t, double c_prev, int a_t, int a_prev,
                     int run_length, const EnvConfig& cfg);

struct StepResult {
  std::vector<double> state;
  double reward = 0.0;
  bool done = false;
};

// Fills at the current close. Each Step moves the cursor one minute.
class MarketEnv {
 public:
  MarketEnv(std::shared_ptr<const BarSeries> series,
            std::shared_ptr<const FeatureMatrix> features, EnvConfig cfg);

  std::vector<double> Reset(std::size_t start_cursor);
  StepResult Step(int position);

  const EnvState& state() const { return state_; }
  const EnvConfig& config() const { return cfg_; }
  const BarSeries& series() const { return *series_; }
  bool done() const { return done_; }
  // Largest start cursor that still allows one step.
  std::size_t last_start() const { return series_->size() - 2; }
  std::vector<double> Observation() const;

 private:
  std::shared_ptr<const BarSeries> series_;
  std::shared_ptr<const FeatureMatrix> features_;
  EnvConfig cfg_;
  EnvState state_;
  bool done_ = true;
};

}  // namespace a3ct

#endif  // A3CT_MARKET_ENV_HPP
