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

#include "a3ct/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <memory>
#include <random>
#include <sstream>
#include <thread>

#include "a3ct/error.hpp"

namespace a3ct {

void TrainConfig::Validate() const {
  auto fail = [](const std::string& what) { Fail(ErrorCode::kInvalidArgument, "train: " + what); };
  if (n_steps < 1) fail("n_steps must be >= 1");
  if (n_workers < 1) fail("n_workers must be >= 1");
  if (!(alpha >= 0 && alpha <= 1)) fail("alpha must be in [0, 1]");
  if (!(entropy_coeff >= 0)) fail("entropy_coeff must be >= 0");
  if (!(learning_rate > 0)) fail("learning_rate must be > 0");
  if (!(rmsprop_decay >= 0 && rmsprop_decay < 1)) fail("rmsprop_decay must be in [0, 1)");
  if (!(rmsprop_epsilon > 0)) fail("rmsprop_epsilon must be > 0");
  if (epochs < 0) fail("epochs must be >= 0");
  if (!(grad_clip_norm >= 0)) fail("grad_clip_norm must be >= 0");
  if (!(gamma >= 0 && gamma <= 1)) fail("gamma must be in [0, 1]");
  if (checkpoint_every < 1) fail("checkpoint_every must be >= 1");
  if (!(reward_scale > 0)) fail("reward_scale must be > 0");
}

std::size_t SampleAction(std::span<const double> policy, double u) {
  double acc = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < policy.size(); ++i) {
    if (policy[i] <= 0.0) continue;
    acc += policy[i];
    last_nonzero = i;
    if (u < acc) return i;
  }
  return last_nonzero;
}

Trajectory CollectRollout(ActorCriticNet& net, MarketEnv& env, int n_steps,
                          Rng& rng, double reward_scale) {
  if (env.done()) Fail(ErrorCode::kState, "rollout requested on a finished episode");
  if (n_steps < 1) Fail(ErrorCode::kInvalidArgument, "rollout needs n_steps >= 1");

  Trajectory tr;
  tr.initial_recurrent = net.recurrent_state();
  tr.dropout_seed = rng();
  Rng dropout_rng(tr.dropout_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> s = env.Observation();
  for (int t = 0; t < n_steps && !env.done(); ++t) {
    const PolicyValue out = net.Forward(s, Mode::kTrain, &dropout_rng);
    const std::size_t idx = SampleAction(out.policy, unit(rng));
    StepResult step = env.Step(ActionToPosition(idx));
    tr.states.push_back(std::move(s));
    tr.actions.push_back(ActionToPosition(idx));
    tr.rewards.push_back(step.reward * reward_scale);
    tr.raw_reward_sum += step.reward;
    tr.values.push_back(out.value);
    tr.action_probs.push_back(out.policy[idx]);
    s = std::move(step.state);
  }
  if (!env.done()) {
    const auto saved = net.recurrent_state();
    tr.bootstrap_value = net.Forward(s, Mode::kEval).value;
    if (saved) net.set_recurrent_state(*saved);
  }
  return tr;
}

namespace {

struct StepTerms {
  double critic = 0.0;
  double actor = 0.0;
  double entropy = 0.0;
  OutputGrad grad;
};

StepTerms Terms(const PolicyValue& out, int position, double target, double adv,
                const LossSettings& s) {
  const std::size_t a = PositionToAction(position);
  const double mx = *std::max_element(out.logits.begin(), out.logits.end());
  double z = 0.0;
  for (double l : out.logits) z += std::exp(l - mx);
  const double lse = mx + std::log(z);

  if (!(out.policy[a] > 0.0)) {
    Fail(ErrorCode::kNumeric, "log of zero action probability");
  }
  std::array<double, kNumActions> logp{};
  double entropy = 0.0;
  for (std::size_t j = 0; j < kNumActions; ++j) {
    logp[j] = out.logits[j] - lse;
    if (out.policy[j] > 0.0) entropy -= out.policy[j] * logp[j];
  }

  StepTerms t;
  const double err = target - out.value;
  t.critic = err * err;
  t.actor = -logp[a] * adv;
  t.entropy = entropy;
  t.grad.dvalue = -2.0 * s.alpha * err;
  for (std::size_t j = 0; j < kNumActions; ++j) {
    const double onehot = j == a ? 1.0 : 0.0;
    double d = adv * (out.policy[j] - onehot);
    if (s.entropy_coeff != 0.0 && out.policy[j] > 0.0) {
      d += s.entropy_coeff * out.policy[j] * (logp[j] + entropy);
    }
    t.grad.dlogits[j] = d;
  }
  return t;
}

std::vector<PolicyValue> Replay(ActorCriticNet& net, const Trajectory& traj,
                                bool record) {
  traj.Validate();
  net.ClearCaches();
  if (net.has_recurrent()) {
    if (traj.initial_recurrent) {
      net.set_recurrent_state(*traj.initial_recurrent);
    } else {
      net.ResetRecurrent();
    }
  }
  Rng dropout_rng(traj.dropout_seed);
  std::vector<PolicyValue> outs;
  outs.reserve(traj.length());
  for (const auto& s : traj.states) {
    outs.push_back(net.Forward(s, Mode::kTrain, &dropout_rng, record));
  }
  return outs;
}

double Combine(const LossSettings& s, double critic, double actor, double entropy) {
  return s.alpha * critic + actor - s.entropy_coeff * entropy;
}

}  // namespace

LossResult LossAndGrads(ActorCriticNet& net, const Trajectory& traj,
                        const LossSettings& settings, double clip_norm) {
  const std::vector<PolicyValue> outs = Replay(net, traj, true);
  const auto targets = DiscountedReturns(traj.rewards, settings.gamma, traj.bootstrap_value);
  const auto adv = Advantages(settings.advantage, traj.rewards, traj.values,
                              settings.gamma, traj.bootstrap_value);

  LossResult r;
  std::vector<OutputGrad> grads(outs.size());
  for (std::size_t t = 0; t < outs.size(); ++t) {
    const StepTerms terms = Terms(outs[t], traj.actions[t], targets[t], adv[t], settings);
    r.critic_loss += terms.critic;
    r.actor_loss += terms.actor;
    r.entropy += terms.entropy;
    grads[t] = terms.grad;
  }
  r.loss = Combine(settings, r.critic_loss, r.actor_loss, r.entropy);

  net.ZeroGrads();
  net.Backward(grads);
  r.grads = net.FlatGrads();
  r.grad_norm = ClipByGlobalNorm(r.grads, clip_norm);
  return r;
}

double TrajectoryLoss(ActorCriticNet& net, const Trajectory& traj,
                      const LossSettings& settings) {
  const std::vector<PolicyValue> outs = Replay(net, traj, false);
  const auto targets = DiscountedReturns(traj.rewards, settings.gamma, traj.bootstrap_value);
  const auto adv = Advantages(settings.advantage, traj.rewards, traj.values,
                              settings.gamma, traj.bootstrap_value);
  double critic = 0.0, actor = 0.0, entropy = 0.0;
  for (std::size_t t = 0; t < outs.size(); ++t) {
    const StepTerms terms = Terms(outs[t], traj.actions[t], targets[t], adv[t], settings);
    critic += terms.critic;
    actor += terms.actor;
    entropy += terms.entropy;
  }
  return Combine(settings, critic, actor, entropy);
}

Trajectory RandomTrajectory(ActorCriticNet& net, std::size_t length, std::uint64_t seed) {
  if (length == 0) Fail(ErrorCode::kInvalidArgument, "trajectory length must be >= 1");
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> magnitude(0.5, 1.5);
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<int> action(-1, 1);
  // Entries bounded away from zero keep every weight's gradient well above
  // the finite-difference noise floor.
  auto entry = [&](double scale) { return (coin(rng) ? scale : -scale) * magnitude(rng); };
  const std::size_t width = static_cast<std::size_t>(net.spec().input_width());

  Trajectory tr;
  tr.dropout_seed = rng();
  if (net.has_recurrent()) {
    LstmState s = LstmState::Zeros(static_cast<std::size_t>(*net.spec().lstm));
    for (auto& v : s.h) v = entry(0.25);
    for (auto& v : s.c) v = entry(0.25);
    tr.initial_recurrent = s;
    net.set_recurrent_state(s);
  }
  Rng dropout_rng(tr.dropout_seed);
  for (std::size_t t = 0; t < length; ++t) {
    std::vector<double> state(width);
    for (auto& v : state) v = entry(0.5);
    const PolicyValue out = net.Forward(state, Mode::kTrain, &dropout_rng);
    const int pos = action(rng);
    tr.states.push_back(std::move(state));
    tr.actions.push_back(pos);
    tr.rewards.push_back(0.5 * normal(rng));
    tr.values.push_back(out.value);
    tr.action_probs.push_back(out.policy[PositionToAction(pos)]);
  }
  tr.bootstrap_value = 0.5 * normal(rng);
  for (double r : tr.rewards) tr.raw_reward_sum += r;
  net.ResetRecurrent();
  return tr;
}

GradCheckResult CheckLossGradients(ActorCriticNet& net, const Trajectory& traj,
                                   const LossSettings& settings, double eps) {
  const LossResult analytic = LossAndGrads(net, traj, settings, 0.0);
  const std::vector<NamedParam> params = net.Parameters();
  return GradCheck(params, analytic.grads,
                   [&] { return TrajectoryLoss(net, traj, settings); }, eps);
}

double ClipByGlobalNorm(std::span<double> g, double max_norm) {
  double sq = 0.0;
  for (double v : g) sq += v * v;
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const double scale = max_norm / norm;
    for (double& v : g) v *= scale;
  }
  return norm;
}

void RmsPropStep(std::span<double> params, std::span<double> accum,
                 std::span<const double> grads, double lr, double decay,
                 double eps) {
  if (params.size() != grads.size() || accum.size() != grads.size()) {
    Fail(ErrorCode::kShapeMismatch, "rmsprop: parameter/gradient length mismatch");
  }
  for (std::size_t i = 0; i < grads.size(); ++i) {
    accum[i] = decay * accum[i] + (1.0 - decay) * grads[i] * grads[i];
    params[i] -= lr * grads[i] / std::sqrt(accum[i] + eps);
  }
}

ParameterStore::ParameterStore(std::vector<double> initial)
    : size_(initial.size()), params_(std::move(initial)), accum_(size_, 0.0) {}

std::vector<double> ParameterStore::Snapshot(std::uint64_t* version) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (version) *version = version_;
  return params_;
}

std::vector<double> ParameterStore::Accumulator() const {
  std::lock_guard<std::mutex> lock(mu_);
  return accum_;
}

void ParameterStore::Apply(std::span<const double> grads, double lr, double decay,
                           double eps) {
  for (double g : grads) {
    if (!std::isfinite(g)) Fail(ErrorCode::kNumeric, "rejected update with non-finite gradient");
  }
  std::lock_guard<std::mutex> lock(mu_);
  RmsPropStep(params_, accum_, grads, lr, decay, eps);
  ++version_;
}

std::uint64_t ParameterStore::version() const {
  std::lock_guard<std::mutex> lock(mu_);
  return version_;
}

// --- Training loop ---------------------------------------------------------

namespace {

struct RolloutStat {
  std::size_t ticket = 0;
  double reward = 0.0;
  double loss = 0.0;
};

struct Worker {
  ActorCriticNet net;
  MarketEnv env;
  Rng rng;
  std::uint64_t updates = 0;
  std::vector<RolloutStat> stats;
};

std::size_t EpisodeStartLimit(const MarketEnv& env) {
  const std::size_t n = env.series().size();
  const auto len = static_cast<std::size_t>(env.config().episode_length);
  return n - 1 > len ? n - 1 - len : 0;
}

void RunWorker(Worker& w, ParameterStore& store, std::atomic<std::size_t>& tickets,
               std::size_t budget, const TrainConfig& cfg) {
  const LossSettings settings{cfg.alpha, cfg.entropy_coeff, cfg.gamma, cfg.advantage};
  while (true) {
    const std::size_t ticket = tickets.fetch_add(1);
    if (ticket >= budget) break;
    if (w.env.done()) {
      std::uniform_int_distribution<std::size_t> start(0, EpisodeStartLimit(w.env));
      w.env.Reset(start(w.rng));
      w.net.ResetRecurrent();
    }
    w.net.SetFlatParams(store.Snapshot());
    const Trajectory tr = CollectRollout(w.net, w.env, cfg.n_steps, w.rng, cfg.reward_scale);
    const LossResult lr = LossAndGrads(w.net, tr, settings, cfg.grad_clip_norm);
    store.Apply(lr.grads, cfg.learning_rate, cfg.rmsprop_decay, cfg.rmsprop_epsilon);
    ++w.updates;
    w.stats.push_back({ticket, tr.raw_reward_sum, lr.loss});
  }
}

std::string Fixed(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

TrainResult Train(const TrainConfig& cfg, const ArchitectureSpec& arch,
                  const EnvConfig& env_cfg_in, const BarSeries& train_series,
                  const std::optional<TrainOutput>& output,
                  const std::string& config_hash) {
  cfg.Validate();
  arch.Validate();
  EnvConfig env_cfg = env_cfg_in;
  env_cfg.feature_dim = arch.feature_dim;
  env_cfg.depth = arch.depth;
  env_cfg.Validate();
  train_series.Validate();
  if (train_series.size() < 2 ||
      train_series.size() - 1 < static_cast<std::size_t>(std::min(env_cfg.episode_length, cfg.n_steps))) {
    Fail(ErrorCode::kInvalidArgument, "training series is shorter than one rollout");
  }

  auto series = std::make_shared<const BarSeries>(train_series);
  FeatureSettings features{arch.feature_dim, arch.depth,
                           FitFeatureScales(*series, arch.feature_dim)};
  auto matrix = std::make_shared<const FeatureMatrix>(*series, arch.feature_dim, features.scales);

  const ActorCriticNet init = ActorCriticNet::Build(arch, cfg.seed);
  ParameterStore store(init.FlatParams());

  std::vector<Worker> workers;
  workers.reserve(static_cast<std::size_t>(cfg.n_workers));
  for (int w = 0; w < cfg.n_workers; ++w) {
    std::seed_seq seq{static_cast<std::uint64_t>(cfg.seed), static_cast<std::uint64_t>(w),
                      std::uint64_t{0xa3c}};
    workers.push_back(Worker{init, MarketEnv(series, matrix, env_cfg), Rng(seq), 0, {}});
  }

  const std::size_t per_epoch = std::max<std::size_t>(
      1, (series->size() - 1 + static_cast<std::size_t>(cfg.n_steps) - 1) /
             static_cast<std::size_t>(cfg.n_steps));

  std::optional<std::ofstream> curve_file;
  if (output) {
    std::filesystem::create_directories(output->dir / "checkpoints");
    curve_file.emplace(output->dir / "curve.csv", std::ios::trunc);
    if (!*curve_file) Fail(ErrorCode::kIo, "cannot write " + (output->dir / "curve.csv").string());
    *curve_file << "epoch,mean_reward,loss\n" << std::flush;
  }

  auto make_checkpoint = [&](int epochs_done) {
    ActorCriticNet net = init;
    net.SetFlatParams(store.Snapshot());
    return Checkpoint::FromNet(net, features,
                               {cfg.seed, epochs_done, store.version(), config_hash});
  };

  TrainResult result;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::atomic<std::size_t> tickets{0};
    for (auto& w : workers) w.stats.clear();

    if (workers.size() == 1) {
      RunWorker(workers[0], store, tickets, per_epoch, cfg);
    } else {
      std::vector<std::exception_ptr> errors(workers.size());
      std::vector<std::thread> threads;
      for (std::size_t i = 0; i < workers.size(); ++i) {
        threads.emplace_back([&, i] {
          try {
            RunWorker(workers[i], store, tickets, per_epoch, cfg);
          } catch (...) {
            errors[i] = std::current_exception();
            tickets.store(per_epoch);
          }
        });
      }
      for (auto& t : threads) t.join();
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }

    CurveRow row{epoch, 0.0, 0.0};
    std::size_t n = 0;
    for (const auto& w : workers) {
      for (const auto& s : w.stats) {
        row.mean_reward += s.reward;
        row.loss += s.loss;
        ++n;
      }
    }
    if (n > 0) {
      row.mean_reward /= static_cast<double>(n);
      row.loss /= static_cast<double>(n);
    }
    result.curve.push_back(row);
    if (curve_file) {
      *curve_file << row.epoch << "," << Fixed(row.mean_reward) << "," << Fixed(row.loss)
                  << "\n" << std::flush;
    }
    if (output && epoch % cfg.checkpoint_every == 0) {
      std::ostringstream name;
      name << "epoch_" << std::setw(5) << std::setfill('0') << epoch;
      SaveCheckpoint(output->dir / "checkpoints" / name.str(), make_checkpoint(epoch));
    }
  }

  result.checkpoint = make_checkpoint(cfg.epochs);
  for (const auto& w : workers) {
    result.worker_updates.push_back(w.updates);
    result.total_updates += w.updates;
  }
  if (output) SaveCheckpoint(output->dir / "model", result.checkpoint);
  return result;
}

}  // namespace a3ct
