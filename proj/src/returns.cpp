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

#include "a3ct/returns.hpp"

#include <cmath>
#include <string>

#include "a3ct/error.hpp"

namespace a3ct {

namespace {

void CheckGamma(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "gamma must be in [0, 1], got " + std::to_string(gamma));
  }
}

void CheckAligned(std::span<const double> rewards, std::span<const double> values) {
  if (rewards.size() != values.size()) {
    Fail(ErrorCode::kShapeMismatch, "advantages: " + std::to_string(rewards.size()) +
                                        " rewards vs " + std::to_string(values.size()) +
                                        " values");
  }
}

}  // namespace

void Trajectory::Validate() const {
  const std::size_t n = rewards.size();
  if (n == 0) Fail(ErrorCode::kInvalidArgument, "trajectory is empty");
  if (states.size() != n || actions.size() != n || values.size() != n ||
      action_probs.size() != n) {
    Fail(ErrorCode::kShapeMismatch, "trajectory fields have different lengths");
  }
  for (double p : action_probs) {
    if (!(p > 0.0 && p <= 1.0)) {
      Fail(ErrorCode::kNumeric, "trajectory action probability outside (0, 1]");
    }
  }
  if (!std::isfinite(bootstrap_value)) Fail(ErrorCode::kNumeric, "bootstrap value not finite");
}

AdvantageMode ParseAdvantageMode(std::string_view name) {
  if (name == "one_step") return AdvantageMode::kOneStep;
  if (name == "multi_step") return AdvantageMode::kMultiStep;
  Fail(ErrorCode::kInvalidArgument,
       "unknown advantage mode '" + std::string(name) + "' (one_step, multi_step)");
}

std::string_view AdvantageModeName(AdvantageMode mode) {
  return mode == AdvantageMode::kOneStep ? "one_step" : "multi_step";
}

std::vector<double> DiscountedReturns(std::span<const double> rewards,
                                      double gamma, double bootstrap) {
  if (rewards.empty()) Fail(ErrorCode::kInvalidArgument, "discounted returns of no rewards");
  CheckGamma(gamma);
  std::vector<double> out(rewards.size());
  double g = bootstrap;
  for (std::size_t i = rewards.size(); i-- > 0;) {
    if (!std::isfinite(rewards[i])) {
      Fail(ErrorCode::kNumeric, "reward " + std::to_string(i) + " is not finite");
    }
    g = rewards[i] + gamma * g;
    out[i] = g;
  }
  return out;
}

std::vector<double> OneStepAdvantages(std::span<const double> rewards,
                                      std::span<const double> values,
                                      double gamma, double bootstrap) {
  CheckAligned(rewards, values);
  CheckGamma(gamma);
  std::vector<double> out(rewards.size());
  for (std::size_t t = 0; t < rewards.size(); ++t) {
    const double next = t + 1 < values.size() ? values[t + 1] : bootstrap;
    out[t] = rewards[t] + gamma * next - values[t];
  }
  return out;
}

std::vector<double> MultiStepAdvantages(std::span<const double> rewards,
                                        std::span<const double> values,
                                        double gamma, double bootstrap) {
  CheckAligned(rewards, values);
  std::vector<double> out = DiscountedReturns(rewards, gamma, bootstrap);
  for (std::size_t t = 0; t < out.size(); ++t) out[t] -= values[t];
  return out;
}

std::vector<double> Advantages(AdvantageMode mode, std::span<const double> rewards,
                               std::span<const double> values, double gamma,
                               double bootstrap) {
  return mode == AdvantageMode::kOneStep
             ? OneStepAdvantages(rewards, values, gamma, bootstrap)
             : MultiStepAdvantages(rewards, values, gamma, bootstrap);
}

}  // namespace a3ct
