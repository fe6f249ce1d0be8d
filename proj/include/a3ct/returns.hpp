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

#ifndef A3CT_RETURNS_HPP
#define A3CT_RETURNS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "a3ct/layers.hpp"

namespace a3ct {

// One rollout. rewards are the training signal (already scaled).
struct Trajectory {
  std::vector<std::vector<double>> states;
  std::vector<int> actions;  // positions in {-1, 0, 1}
  std::vector<double> rewards;
  std::vector<double> values;
  std::vector<double> action_probs;
  double bootstrap_value = 0.0;  // V(s_{T+1}); 0 when the episode ended

  // Replay context: recurrent state before step 0 and the dropout seed used
  // while collecting, so the forward pass can be reproduced for gradients.
  std::optional<LstmState> initial_recurrent;
  std::uint64_t dropout_seed = 0;
  double raw_reward_sum = 0.0;  // unscaled rubles, for logging

  std::size_t length() const { return rewards.size(); }
  void Validate() const;
};

enum class AdvantageMode { kOneStep, kMultiStep };

AdvantageMode ParseAdvantageMode(std::string_view name);
std::string_view AdvantageModeName(AdvantageMode mode);

// G_T = r_T + gamma * bootstrap, G_i = r_i + gamma * G_{i+1}.
std::vector<double> DiscountedReturns(std::span<const double> rewards,
                                      double gamma, double bootstrap);

// One-step: A_t = r_t + gamma * V_{t+1} - V_t with V_{T+1} = bootstrap.
std::vector<double> OneStepAdvantages(std::span<const double> rewards,
                                      std::span<const double> values,
                                      double gamma, double bootstrap);

// Multi-step: A_t = G_t - V_t.
std::vector<double> MultiStepAdvantages(std::span<const double> rewards,
                                        std::span<const double> values,
                                        double gamma, double bootstrap);

std::vector<double> Advantages(AdvantageMode mode, std::span<const double> rewards,
                               std::span<const double> values, double gamma,
                               double bootstrap);

}  // namespace a3ct

#endif  // A3CT_RETURNS_HPP
