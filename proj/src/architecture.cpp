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

#include "a3ct/architecture.hpp"

#include <algorithm>
#include <cmath>

#include "a3ct/error.hpp"

namespace a3ct {

namespace {

void RequirePositive(const std::optional<int>& v, const char* what) {
  if (v && *v < 1) {
    Fail(ErrorCode::kInvalidArgument,
         std::string("architecture: ") + what + " must be >= 1, got " +
             std::to_string(*v));
  }
}

}  // namespace

void ArchitectureSpec::Validate() const {
  if (feature_dim < 1) {
    Fail(ErrorCode::kInvalidArgument,
         "architecture: feature_dim must be >= 1, got " + std::to_string(feature_dim));
  }
  if (depth < 1) {
    Fail(ErrorCode::kInvalidArgument,
         "architecture: depth must be >= 1, got " + std::to_string(depth));
  }
  RequirePositive(dense, "dense");
  RequirePositive(lstm, "lstm");
  RequirePositive(dense_v, "dense_v");
  RequirePositive(dense_a, "dense_a");
  if (dropout && !(*dropout >= 0.0 && *dropout < 1.0)) {
    Fail(ErrorCode::kInvalidArgument,
         "architecture: dropout must be in [0, 1), got " + std::to_string(*dropout));
  }
}

std::optional<ArchitectureSpec> NamedArchitecture(std::string_view name,
                                                  int feature_dim) {
  ArchitectureSpec s;
  s.name = std::string(name);
  s.feature_dim = feature_dim;
  if (name == "5") {
    s.depth = 6, s.dropout = 0.5, s.lstm = 64;
  } else if (name == "8") {
    s.depth = 6, s.dropout = 0.5, s.lstm = 128;
  } else if (name == "5coolV") {
    s.depth = 6, s.dropout = 0.5, s.lstm = 64, s.dense_v = 32;
  } else if (name == "9") {
    s.depth = 1, s.dropout = 0.5, s.lstm = 64, s.dense_v = 32;
  } else if (name == "12") {
    s.depth = 1, s.dropout = 0.5, s.lstm = 64, s.dense_v = 32, s.dense_a = 32;
  } else if (name == "5noLSTM") {
    s.depth = 20;
  } else if (name == "6") {
    s.depth = 6, s.dense = 128, s.lstm = 128;
  } else {
    return std::nullopt;
  }
  return s;
}

std::vector<std::string> NamedArchitectureList() {
  return {"5", "8", "5coolV", "9", "12", "5noLSTM", "6"};
}

std::size_t ParamCount(const ArchitectureSpec& spec) {
  spec.Validate();
  std::size_t width = spec.input_width();
  std::size_t total = 0;
  if (spec.dense) {
    total += DenseLayer::ParamCount(width, *spec.dense);
    width = *spec.dense;
  }
  if (spec.lstm) {
    total += LstmLayer::ParamCount(width, *spec.lstm);
    width = *spec.lstm;
  }
  std::size_t actor_in = width;
  if (spec.dense_a) {
    total += DenseLayer::ParamCount(width, *spec.dense_a);
    actor_in = *spec.dense_a;
  }
  total += DenseLayer::ParamCount(actor_in, kNumActions);
  std::size_t critic_in = width;
  if (spec.dense_v) {
    total += DenseLayer::ParamCount(width, *spec.dense_v);
    critic_in = *spec.dense_v;
  }
  total += DenseLayer::ParamCount(critic_in, 1);
  return total;
}

// --- ActorCriticNet --------------------------------------------------------

namespace {

std::size_t TrunkWidth(const ArchitectureSpec& s) {
  if (s.lstm) return *s.lstm;
  if (s.dense) return *s.dense;
  return s.input_width();
}

}  // namespace

ActorCriticNet::ActorCriticNet(const ArchitectureSpec& spec)
    : spec_(spec),
      actor_out_(spec.dense_a ? *spec.dense_a : TrunkWidth(spec), kNumActions,
                 Activation::kIdentity),
      critic_out_(spec.dense_v ? *spec.dense_v : TrunkWidth(spec), 1,
                  Activation::kIdentity) {
  std::size_t width = spec.input_width();
  if (spec.dense) {
    trunk_dense_.emplace(width, *spec.dense, Activation::kTanh);
    width = *spec.dense;
  }
  if (spec.dropout) dropout_.emplace(*spec.dropout);
  if (spec.lstm) {
    lstm_.emplace(width, *spec.lstm);
    width = *spec.lstm;
    state_ = LstmState::Zeros(width);
  }
  if (spec.dense_a) actor_hidden_.emplace(width, *spec.dense_a, Activation::kTanh);
  if (spec.dense_v) critic_hidden_.emplace(width, *spec.dense_v, Activation::kTanh);
}

ActorCriticNet ActorCriticNet::Build(const ArchitectureSpec& spec,
                                     std::uint64_t seed) {
  spec.Validate();
  ActorCriticNet net(spec);
  Rng rng(seed);
  if (net.trunk_dense_) net.trunk_dense_->Init(rng);
  if (net.lstm_) net.lstm_->Init(rng);
  if (net.actor_hidden_) net.actor_hidden_->Init(rng);
  net.actor_out_.Init(rng);
  if (net.critic_hidden_) net.critic_hidden_->Init(rng);
  net.critic_out_.Init(rng);
  return net;
}

template <typename Fn>
void ActorCriticNet::ForEachParam(Fn&& fn) {
  auto dense = [&fn](const std::string& prefix, DenseLayer& d) {
    fn(prefix + ".W", d.weight());
    fn(prefix + ".b", d.bias());
  };
  if (trunk_dense_) dense("trunk.dense", *trunk_dense_);
  if (lstm_) {
    for (int g = 0; g < 4; ++g) {
      const auto gate = static_cast<LstmLayer::Gate>(g);
      const std::string suffix = LstmLayer::kGateNames[g];
      fn("trunk.lstm.W_" + suffix, lstm_->w(gate));
      fn("trunk.lstm.U_" + suffix, lstm_->u(gate));
      fn("trunk.lstm.b_" + suffix, lstm_->b(gate));
    }
  }
  if (actor_hidden_) dense("actor.hidden", *actor_hidden_);
  dense("actor.out", actor_out_);
  if (critic_hidden_) dense("critic.hidden", *critic_hidden_);
  dense("critic.out", critic_out_);
}

template <typename Fn>
void ActorCriticNet::ForEachParam(Fn&& fn) const {
  const_cast<ActorCriticNet*>(this)->ForEachParam(
      [&fn](const std::string& name, Tensor& t) {
        fn(name, static_cast<const Tensor&>(t));
      });
}

std::vector<NamedParam> ActorCriticNet::Parameters() {
  std::vector<NamedParam> out;
  ForEachParam([&out](const std::string& name, Tensor& t) {
    out.push_back({name, &t});
  });
  return out;
}

std::vector<ParamInfo> ActorCriticNet::Registry() const {
  std::vector<ParamInfo> out;
  std::size_t offset = 0;
  ForEachParam([&](const std::string& name, const Tensor& t) {
    out.push_back({name, t.shape(), offset, t.size()});
    offset += t.size();
  });
  return out;
}

std::size_t ActorCriticNet::ParamCount() const {
  std::size_t n = 0;
  ForEachParam([&n](const std::string&, const Tensor& t) { n += t.size(); });
  return n;
}

std::vector<double> ActorCriticNet::FlatParams() const {
  std::vector<double> out;
  out.reserve(ParamCount());
  ForEachParam([&out](const std::string&, const Tensor& t) {
    out.insert(out.end(), t.data().begin(), t.data().end());
  });
  return out;
}

void ActorCriticNet::SetFlatParams(std::span<const double> values) {
  if (values.size() != ParamCount()) {
    Fail(ErrorCode::kShapeMismatch,
         "parameter vector has " + std::to_string(values.size()) +
             " values, network expects " + std::to_string(ParamCount()));
  }
  std::size_t offset = 0;
  ForEachParam([&](const std::string&, Tensor& t) {
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(offset), t.size(),
                t.data().begin());
    offset += t.size();
  });
}

std::vector<double> ActorCriticNet::FlatGrads() const {
  std::vector<double> out;
  out.reserve(ParamCount());
  ForEachParam([&out](const std::string&, const Tensor& t) {
    out.insert(out.end(), t.grad().begin(), t.grad().end());
  });
  return out;
}

void ActorCriticNet::ZeroGrads() {
  ForEachParam([](const std::string&, Tensor& t) { t.ZeroGrad(); });
}

void ActorCriticNet::ResetRecurrent() {
  if (lstm_) state_ = LstmState::Zeros(lstm_->hidden());
}

void ActorCriticNet::set_recurrent_state(const LstmState& s) {
  if (!lstm_) Fail(ErrorCode::kState, "network has no recurrent layer");
  if (s.h.size() != lstm_->hidden() || s.c.size() != lstm_->hidden()) {
    Fail(ErrorCode::kShapeMismatch, "recurrent state size does not match the LSTM width");
  }
  state_ = s;
}

void ActorCriticNet::ClearCaches() {
  if (trunk_dense_) trunk_dense_->ClearCache();
  if (dropout_) dropout_->ClearCache();
  if (lstm_) lstm_->ClearCache();
  if (actor_hidden_) actor_hidden_->ClearCache();
  actor_out_.ClearCache();
  if (critic_hidden_) critic_hidden_->ClearCache();
  critic_out_.ClearCache();
  recorded_ = 0;
}

PolicyValue ActorCriticNet::Forward(std::span<const double> state, Mode mode,
                                    Rng* dropout_rng, bool record) {
  if (state.size() != spec_.input_width()) {
    Fail(ErrorCode::kShapeMismatch,
         "network input [" + std::to_string(state.size()) + "] does not match [" +
             std::to_string(spec_.input_width()) + "] (depth " +
             std::to_string(spec_.depth) + " x features " +
             std::to_string(spec_.feature_dim) + ")");
  }
  std::vector<double> x(state.begin(), state.end());
  if (trunk_dense_) x = trunk_dense_->Forward(x, record);
  if (dropout_) x = dropout_->Forward(x, mode, dropout_rng, record);
  if (lstm_) {
    state_ = lstm_->Forward(x, *state_, record);
    x = state_->h;
  }

  PolicyValue out;
  std::vector<double> a = actor_hidden_ ? actor_hidden_->Forward(x, record) : x;
  const std::vector<double> logits = actor_out_.Forward(a, record);
  const std::vector<double> policy = Softmax(logits);
  std::copy(logits.begin(), logits.end(), out.logits.begin());
  std::copy(policy.begin(), policy.end(), out.policy.begin());

  std::vector<double> v = critic_hidden_ ? critic_hidden_->Forward(x, record) : x;
  out.value = critic_out_.Forward(v, record)[0];
  if (record) ++recorded_;
  return out;
}

void ActorCriticNet::Backward(std::span<const OutputGrad> grads) {
  if (grads.size() != recorded_) {
    Fail(ErrorCode::kState, "backward got " + std::to_string(grads.size()) +
                                " step gradients for " + std::to_string(recorded_) +
                                " recorded steps");
  }
  std::optional<LstmState> carry;
  if (lstm_) carry = LstmState::Zeros(lstm_->hidden());

  for (std::size_t t = grads.size(); t-- > 0;) {
    // Heads were recorded actor-first then critic; each layer owns its own
    // stack, so the order between heads does not matter here.
    std::vector<double> da = actor_out_.Backward(grads[t].dlogits);
    if (actor_hidden_) da = actor_hidden_->Backward(da);
    const double dv[1] = {grads[t].dvalue};
    std::vector<double> dc = critic_out_.Backward(dv);
    if (critic_hidden_) dc = critic_hidden_->Backward(dc);

    std::vector<double> dx(da.size());
    for (std::size_t k = 0; k < dx.size(); ++k) dx[k] = da[k] + dc[k];
    if (lstm_) {
      for (std::size_t k = 0; k < dx.size(); ++k) dx[k] += carry->h[k];
      LstmBackwardResult r = lstm_->Backward(dx, carry->c);
      dx = std::move(r.dx);
      carry = std::move(r.dstate);
    }
    if (dropout_) dx = dropout_->Backward(dx);
    if (trunk_dense_) trunk_dense_->Backward(dx);
  }
  recorded_ = 0;
}

}  // namespace a3ct
