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

#ifndef A3CT_ARCHITECTURE_HPP
#define A3CT_ARCHITECTURE_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "a3ct/gradcheck.hpp"
#include "a3ct/layers.hpp"

namespace a3ct {

inline constexpr std::size_t kNumActions = 3;

// Actions are desired positions; index 0 is short, 1 neutral, 2 long.
inline int ActionToPosition(std::size_t index) { return static_cast<int>(index) - 1; }
inline std::size_t PositionToAction(int position) {
  return static_cast<std::size_t>(position + 1);
}

struct ArchitectureSpec {
  std::string name = "custom";
  int depth = 1;                  // feature vectors concatenated into the input
  std::optional<int> dense;       // trunk dense width (tanh)
  std::optional<double> dropout;  // dropout probability before the LSTM
  std::optional<int> lstm;        // LSTM hidden width
  std::optional<int> dense_v;     // critic hidden width (tanh)
  std::optional<int> dense_a;     // actor hidden width (tanh)
  int feature_dim = 10;

  std::size_t input_width() const {
    return static_cast<std::size_t>(depth) * static_cast<std::size_t>(feature_dim);
  }
  void Validate() const;

  friend bool operator==(const ArchitectureSpec&, const ArchitectureSpec&) = default;
};

// The seven named rows: 5, 8, 5coolV, 9, 12, 5noLSTM, 6.
std::optional<ArchitectureSpec> NamedArchitecture(std::string_view name,
                                                  int feature_dim = 10);
std::vector<std::string> NamedArchitectureList();

std::size_t ParamCount(const ArchitectureSpec& spec);

struct PolicyValue {
  std::array<double, kNumActions> logits{};
  std::array<double, kNumActions> policy{};
  double value = 0.0;
};

// Loss cotangents for one recorded step.
struct OutputGrad {
  std::array<double, kNumActions> dlogits{};
  double dvalue = 0.0;
};

struct ParamInfo {
  std::string name;
  std::vector<std::size_t> shape;
  std::size_t offset = 0;
  std::size_t size = 0;
};

// input -> [dense+tanh] -> [dropout] -> [lstm] -> trunk
// trunk -> [dense_a+tanh] -> linear(3) -> softmax
// trunk -> [dense_v+tanh] -> linear(1)
class ActorCriticNet {
 public:
  static ActorCriticNet Build(const ArchitectureSpec& spec, std::uint64_t seed);

  const ArchitectureSpec& spec() const { return spec_; }

  // Train mode applies dropout (needs `dropout_rng` when dropout is present).
  // The recurrent state advances in both modes. With `record` set, the step
  // is cached for a later Backward.
  PolicyValue Forward(std::span<const double> state, Mode mode,
                      Rng* dropout_rng = nullptr, bool record = false);

  // Backpropagates through every recorded step (grads[t] for step t) in
  // reverse order, accumulating into parameter grads, then clears the caches.
  // Gradients do not flow into the state that preceded the first step.
  void Backward(std::span<const OutputGrad> grads);

  std::size_t recorded_steps() const { return recorded_; }
  void ClearCaches();

  void ResetRecurrent();
  bool has_recurrent() const { return lstm_.has_value(); }
  const std::optional<LstmState>& recurrent_state() const { return state_; }
  void set_recurrent_state(const LstmState& s);

  // Deterministic registry order; see Registry() for names and offsets.
  std::vector<NamedParam> Parameters();
  std::vector<ParamInfo> Registry() const;
  std::size_t ParamCount() const;
  std::vector<double> FlatParams() const;
  void SetFlatParams(std::span<const double> values);
  std::vector<double> FlatGrads() const;
  void ZeroGrads();

 private:
  explicit ActorCriticNet(const ArchitectureSpec& spec);

  template <typename Fn>
  void ForEachParam(Fn&& fn);
  template <typename Fn>
  void ForEachParam(Fn&& fn) const;

  ArchitectureSpec spec_;
  std::optional<DenseLayer> trunk_dense_;
  std::optional<DropoutLayer> dropout_;
  std::optional<LstmLayer> lstm_;
  std::optional<DenseLayer> actor_hidden_;
  DenseLayer actor_out_;
  std::optional<DenseLayer> critic_hidden_;
  DenseLayer critic_out_;
  std::optional<LstmState> state_;
  std::size_t recorded_ = 0;
};

}  // namespace a3ct

#endif  // A3CT_ARCHITECTURE_HPP
