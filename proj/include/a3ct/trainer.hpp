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

#ifndef A3CT_TRAINER_HPP
#define A3CT_TRAINER_HPP

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "a3ct/architecture.hpp"
#include "a3ct/checkpoint.hpp"
#include "a3ct/gradcheck.hpp"
#include "a3ct/market_env.hpp"
#include "a3ct/returns.hpp"

namespace a3ct {

struct TrainConfig {
  int n_steps = 200;
  int n_workers = 10;
  double alpha = 0.5;           // critic weight
  double entropy_coeff = 0.0;
  double learning_rate = 1e-3;
  double rmsprop_decay = 0.99;
  double rmsprop_epsilon = 1e-8;
  int epochs = 1000;
  double grad_clip_norm = 40.0;  // 0 disables clipping
  double gamma = 0.99;
  std::uint64_t seed = 0;
  AdvantageMode advantage = AdvantageMode::kMultiStep;
  int checkpoint_every = 10;
  double reward_scale = 1.0;     // rubles -> training signal

  void Validate() const;
};

struct LossSettings {
  double alpha = 0.5;
  double entropy_coeff = 0.0;
  double gamma = 0.99;
  AdvantageMode advantage = AdvantageMode::kMultiStep;
};

struct LossResult {
  double loss = 0.0;
  double critic_loss = 0.0;  // sum of squared target errors (unweighted)
  double actor_loss = 0.0;   // -sum log pi(a) A
  double entropy = 0.0;      // sum of policy entropies
  double grad_norm = 0.0;    // before clipping
  std::vector<double> grads;  // registry order, after clipping
};

// Samples a_t ~ pi(.|s_t) in train mode for up to n_steps steps. The
// bootstrap value is V(s_{T+1}) (eval mode, recurrent state restored) when
// the rollout stopped before the episode ended, else 0.
Trajectory CollectRollout(ActorCriticNet& net, MarketEnv& env, int n_steps,
                          Rng& rng, double reward_scale = 1.0);

// Index of the sampled action given a uniform draw u in [0, 1).
std::size_t SampleAction(std::span<const double> policy, double u);

// L = alpha * sum (G_i - V_i)^2 - sum log pi(a_i|s_i) A_i - beta * sum H_i,
// with advantages computed from the critic values recorded in the trajectory
// and held constant. Replays the trajectory from its stored
// recurrent state and dropout seed, then backpropagates through time.
LossResult LossAndGrads(ActorCriticNet& net, const Trajectory& traj,
                        const LossSettings& settings, double clip_norm = 0.0);

// Forward-only loss of the same replay; the finite-difference side of checks.
double TrajectoryLoss(ActorCriticNet& net, const Trajectory& traj,
                      const LossSettings& settings);

// Scales g in place so that ||g||_2 <= max_norm; returns the original norm.
double ClipByGlobalNorm(std::span<double> g, double max_norm);

// v <- decay v + (1 - decay) g^2;  theta <- theta - lr g / sqrt(v + eps)
void RmsPropStep(std::span<double> params, std::span<double> accum,
                 std::span<const double> grads, double lr, double decay,
                 double eps);

// Shared parameters plus RMSProp accumulator. Snapshot and Apply are each
// atomic with respect to one another.
class ParameterStore {
 public:
  explicit ParameterStore(std::vector<double> initial);

  std::vector<double> Snapshot(std::uint64_t* version = nullptr) const;
  std::vector<double> Accumulator() const;
  // Rejects non-finite gradients without touching state.
  void Apply(std::span<const double> grads, double lr, double decay, double eps);
  std::uint64_t version() const;
  std::size_t size() const { return size_; }

 private:
  mutable std::mutex mu_;
  std::size_t size_;
  std::vector<double> params_;
  std::vector<double> accum_;
  std::uint64_t version_ = 0;
};

// Random states, actions, rewards and recurrent start for `net`, with values
// and probabilities taken from a train-mode pass. Loss magnitudes stay O(1).
Trajectory RandomTrajectory(ActorCriticNet& net, std::size_t length, std::uint64_t seed);

// Analytic gradient of the full loss against central differences over every
// parameter of `net`.
GradCheckResult CheckLossGradients(ActorCriticNet& net, const Trajectory& traj,
                                   const LossSettings& settings, double eps = 1e-5);

struct CurveRow {
  int epoch = 0;
  double mean_reward = 0.0;  // mean unscaled reward per rollout
  double loss = 0.0;         // mean loss per rollout
};

struct TrainResult {
  Checkpoint checkpoint;
  std::vector<CurveRow> curve;
  std::vector<std::uint64_t> worker_updates;
  std::uint64_t total_updates = 0;
};

struct TrainOutput {
  std::filesystem::path dir;  // receives curve.csv and checkpoints/
};

TrainResult Train(const TrainConfig& cfg, const ArchitectureSpec& arch,
                  const EnvConfig& env_cfg, const BarSeries& train_series,
                  const std::optional<TrainOutput>& output = std::nullopt,
                  const std::string& config_hash = "");

}  // namespace a3ct

#endif  // A3CT_TRAINER_HPP
