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

#include "a3ct/market_env.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "a3ct/error.hpp"

namespace a3ct {

namespace {

double LogReturn(const BarSeries& s, std::ptrdiff_t t) {
  if (t < 1) return 0.0;
  const auto i = static_cast<std::size_t>(t);
  return std::log(s.bars[i].close / s.bars[i - 1].close);
}

double VolumeZ(const BarSeries& s, std::size_t t) {
  const std::size_t first = t + 1 >= kVolumeWindow ? t + 1 - kVolumeWindow : 0;
  const double n = static_cast<double>(t - first + 1);
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (std::size_t k = first; k <= t; ++k) mean += s.bars[k].volume;
  mean /= n;
  double var = 0.0;
  for (std::size_t k = first; k <= t; ++k) {
    const double d = s.bars[k].volume - mean;
    var += d * d;
  }
  const double sd = std::sqrt(var / n);
  return sd > 0 ? (s.bars[t].volume - mean) / sd : 0.0;
}

}  // namespace

std::vector<double> RawFeatures(const BarSeries& s, std::size_t t, int feature_dim) {
  if (t >= s.size()) {
    Fail(ErrorCode::kInvalidArgument, "feature cursor " + std::to_string(t) +
                                          " beyond series end " + std::to_string(s.size()));
  }
  if (feature_dim < 1) Fail(ErrorCode::kInvalidArgument, "feature_dim must be >= 1");
  const auto aux_needed = feature_dim - kBaseFeatureCount;
  if (aux_needed > 0 && s.aux_names.size() < static_cast<std::size_t>(aux_needed)) {
    Fail(ErrorCode::kMismatch,
         "feature_dim " + std::to_string(feature_dim) + " needs " +
             std::to_string(aux_needed) + " auxiliary columns, series has " +
             std::to_string(s.aux_names.size()));
  }

  const Bar& b = s.bars[t];
  const auto ti = static_cast<std::ptrdiff_t>(t);
  const double phase =
      2.0 * std::numbers::pi * static_cast<double>(((b.timestamp % 1440) + 1440) % 1440) / 1440.0;
  const double base[kBaseFeatureCount] = {
      LogReturn(s, ti),
      (b.high - b.low) / b.close,
      (b.close - b.open) / b.close,
      VolumeZ(s, t),
      std::sin(phase),
      std::cos(phase),
      LogReturn(s, ti - 1),
      LogReturn(s, ti - 2),
      LogReturn(s, ti - 3),
      LogReturn(s, ti - 4),
  };
  std::vector<double> f(static_cast<std::size_t>(feature_dim));
  for (int j = 0; j < feature_dim; ++j) {
    f[static_cast<std::size_t>(j)] =
        j < kBaseFeatureCount ? base[j] : s.aux[t][static_cast<std::size_t>(j - kBaseFeatureCount)];
  }
  return f;
}

std::vector<double> FitFeatureScales(const BarSeries& s, int feature_dim) {
  std::vector<double> sumsq(static_cast<std::size_t>(feature_dim), 0.0);
  for (std::size_t t = 0; t < s.size(); ++t) {
    const auto f = RawFeatures(s, t, feature_dim);
    for (std::size_t j = 0; j < f.size(); ++j) sumsq[j] += f[j] * f[j];
  }
  for (double& v : sumsq) {
    v = std::sqrt(v / static_cast<double>(s.size()));
    if (!(v > 0) || !std::isfinite(v)) v = 1.0;
  }
  return sumsq;
}

FeatureMatrix::FeatureMatrix(const BarSeries& series, int feature_dim,
                             std::span<const double> scales)
    : rows_(series.size()), dim_(feature_dim) {
  if (!scales.empty() && scales.size() != static_cast<std::size_t>(feature_dim)) {
    Fail(ErrorCode::kMismatch, "feature scales have " + std::to_string(scales.size()) +
                                   " entries for feature_dim " + std::to_string(feature_dim));
  }
  values_.reserve(rows_ * static_cast<std::size_t>(dim_));
  for (std::size_t t = 0; t < rows_; ++t) {
    auto f = RawFeatures(series, t, feature_dim);
    for (std::size_t j = 0; j < f.size(); ++j) {
      values_.push_back(scales.empty() ? f[j] : f[j] / scales[j]);
    }
  }
}

std::vector<double> MakeState(const FeatureMatrix& features, std::size_t cursor,
                              int depth) {
  if (cursor >= features.rows()) {
    Fail(ErrorCode::kInvalidArgument, "state cursor " + std::to_string(cursor) +
                                          " beyond series end " +
                                          std::to_string(features.rows()));
  }
  if (depth < 1) Fail(ErrorCode::kInvalidArgument, "depth must be >= 1");
  const auto m = static_cast<std::size_t>(features.feature_dim());
  std::vector<double> state(static_cast<std::size_t>(depth) * m, 0.0);
  for (int slot = 0; slot < depth; ++slot) {
    const std::ptrdiff_t t = static_cast<std::ptrdiff_t>(cursor) - (depth - 1 - slot);
    if (t < 0) continue;
    const auto row = features.row(static_cast<std::size_t>(t));
    std::copy(row.begin(), row.end(), state.begin() + static_cast<std::ptrdiff_t>(slot * m));
  }
  return state;
}

std::vector<double> MakeState(const BarSeries& series, std::size_t cursor,
                              int depth, int feature_dim) {
  if (cursor >= series.size()) {
    Fail(ErrorCode::kInvalidArgument, "state cursor " + std::to_string(cursor) +
                                          " beyond series end " + std::to_string(series.size()));
  }
  // Only the rows the window touches are needed.
  const std::size_t first = cursor + 1 >= static_cast<std::size_t>(depth)
                                ? cursor + 1 - static_cast<std::size_t>(depth)
                                : 0;
  const auto m = static_cast<std::size_t>(feature_dim);
  std::vector<double> state(static_cast<std::size_t>(depth) * m, 0.0);
  const std::size_t pad = static_cast<std::size_t>(depth) - (cursor + 1 - first);
  for (std::size_t t = first; t <= cursor; ++t) {
    const auto f = RawFeatures(series, t, feature_dim);
    std::copy(f.begin(), f.end(),
              state.begin() + static_cast<std::ptrdiff_t>((pad + t - first) * m));
  }
  return state;
}

void EnvConfig::Validate() const {
  auto fail = [](const std::string& what) { Fail(ErrorCode::kInvalidArgument, "env: " + what); };
  if (!(fee_per_operation >= 0)) fail("fee_per_operation must be >= 0");
  if (!(train_fee_multiplier >= 1)) fail("train_fee_multiplier must be >= 1");
  if (!(repetition_penalty >= 0)) fail("repetition_penalty must be >= 0");
  if (repetition_grace < 0) fail("repetition_grace must be >= 0");
  if (episode_length < 1) fail("episode_length must be >= 1");
  if (!std::isfinite(start_capital)) fail("start_capital must be finite");
  if (feature_dim < 1) fail("feature_dim must be >= 1");
  if (depth < 1) fail("depth must be >= 1");
}

double PortfolioValue(double cash, int position, double price) {
  return cash + position * price;
}

double ComputeReward(double c_t, double c_prev, int a_t, int a_prev,
                     int run_length, const EnvConfig& cfg) {
  const double fee = cfg.fee_per_operation * cfg.train_fee_multiplier *
                     std::abs(a_t - a_prev);
  const double penalty =
      cfg.repetition_penalty * std::max(0, run_length - cfg.repetition_grace);
  return (c_t - c_prev) - fee - penalty;
}

MarketEnv::MarketEnv(std::shared_ptr<const BarSeries> series,
                     std::shared_ptr<const FeatureMatrix> features, EnvConfig cfg)
    : series_(std::move(series)), features_(std::move(features)), cfg_(cfg) {
  cfg_.Validate();
  if (!series_ || series_->size() < 2) {
    Fail(ErrorCode::kInvalidArgument, "environment needs a series of >= 2 bars");
  }
  if (!features_ || features_->rows() != series_->size() ||
      features_->feature_dim() != cfg_.feature_dim) {
    Fail(ErrorCode::kMismatch, "feature matrix does not match the series/config");
  }
}

std::vector<double> MarketEnv::Observation() const {
  return MakeState(*features_, state_.cursor, cfg_.depth);
}

std::vector<double> MarketEnv::Reset(std::size_t start_cursor) {
  if (start_cursor > last_start()) {
    Fail(ErrorCode::kInvalidArgument,
         "reset cursor " + std::to_string(start_cursor) + " out of range [0, " +
             std::to_string(last_start()) + "]");
  }
  state_ = EnvState{};
  state_.cursor = start_cursor;
  state_.cash = cfg_.start_capital;
  state_.portfolio_value = cfg_.start_capital;
  done_ = false;
  return Observation();
}

StepResult MarketEnv::Step(int position) {
  if (done_) Fail(ErrorCode::kState, "step after the episode is done");
  if (position < -1 || position > 1) {
    Fail(ErrorCode::kInvalidArgument,
         "action " + std::to_string(position) + " outside {-1, 0, 1}");
  }
  const auto& bars = series_->bars;
  const int prev = state_.position;
  const double price = bars[state_.cursor].close;
  const double c_prev = PortfolioValue(state_.cash, prev, price);

  const int delta = position - prev;
  state_.cash -= delta * price;
  state_.operations += std::abs(delta);
  state_.commission_paid += cfg_.fee_per_operation * std::abs(delta);
  state_.run_length = (position == prev) ? state_.run_length + 1 : 1;
  state_.position = position;
  ++state_.cursor;
  ++state_.steps;
  state_.portfolio_value = PortfolioValue(state_.cash, position, bars[state_.cursor].close);

  StepResult r;
  r.reward = ComputeReward(state_.portfolio_value, c_prev, position, prev,
                           state_.run_length, cfg_);
  done_ = state_.steps >= cfg_.episode_length || state_.cursor + 1 >= bars.size();
  r.done = done_;
  r.state = Observation();
  return r;
}

}  // namespace a3ct
