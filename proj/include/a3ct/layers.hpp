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

#ifndef A3CT_LAYERS_HPP
#define A3CT_LAYERS_HPP

#include <array>
#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "a3ct/tensor.hpp"

namespace a3ct {

using Rng = std::mt19937_64;

enum class Activation { kIdentity, kTanh };
enum class Mode { kTrain, kEval };

// Numerically stable softmax. Throws on NaN input.
std::vector<double> Softmax(std::span<const double> logits);

// Inverted dropout: survivors are scaled by 1/(1-p) so eval is the identity.
std::vector<double> Dropout(std::span<const double> x, double p, Mode mode,
                            Rng& rng);

// y = act(W x + b). Each recorded Forward pushes a cache entry that the next
// Backward pops, so a sequence of T forwards is undone by T backwards in
// reverse order.
class DenseLayer {
 public:
  DenseLayer(std::size_t in, std::size_t out, Activation act);

  static std::size_t ParamCount(std::size_t in, std::size_t out) {
    return out * (in + 1);
  }

  void Init(Rng& rng);

  std::vector<double> Forward(std::span<const double> x, bool record);
  // Accumulates dW, db; returns dx.
  std::vector<double> Backward(std::span<const double> dy);

  Tensor& weight() { return w_; }
  Tensor& bias() { return b_; }
  const Tensor& weight() const { return w_; }
  const Tensor& bias() const { return b_; }
  std::size_t in_features() const { return w_.cols(); }
  std::size_t out_features() const { return w_.rows(); }
  Activation activation() const { return act_; }
  std::size_t cached_steps() const { return cache_.size(); }
  void ClearCache() { cache_.clear(); }

 private:
  struct Cache {
    std::vector<double> x;
    std::vector<double> y;
  };

  Tensor w_;
  Tensor b_;
  Activation act_;
  std::vector<Cache> cache_;
};

class DropoutLayer {
 public:
  explicit DropoutLayer(double p);

  double p() const { return p_; }

  std::vector<double> Forward(std::span<const double> x, Mode mode, Rng* rng,
                              bool record);
  std::vector<double> Backward(std::span<const double> dy);

  std::size_t cached_steps() const { return masks_.size(); }
  void ClearCache() { masks_.clear(); }

 private:
  double p_;
  // Per-step multiplier: 0 or 1/(1-p), or 1 in eval mode.
  std::vector<std::vector<double>> masks_;
};

struct LstmState {
  std::vector<double> h;
  std::vector<double> c;

  static LstmState Zeros(std::size_t hidden) {
    return {std::vector<double>(hidden, 0.0), std::vector<double>(hidden, 0.0)};
  }
  friend bool operator==(const LstmState&, const LstmState&) = default;
};

struct LstmBackwardResult {
  std::vector<double> dx;
  LstmState dstate;  // gradients w.r.t. the incoming (h, c)
};

// Standard LSTM cell without peepholes:
//   i, f, o = sigmoid(W x + U h + b), g = tanh(W_g x + U_g h + b_g)
//   c' = f*c + i*g, h' = o*tanh(c')
class LstmLayer {
 public:
  enum Gate { kInput = 0, kForget = 1, kOutput = 2, kCandidate = 3 };
  static constexpr std::array<const char*, 4> kGateNames = {"i", "f", "o", "g"};

  LstmLayer(std::size_t in, std::size_t hidden);

  static std::size_t ParamCount(std::size_t in, std::size_t hidden) {
    return 4 * hidden * (in + hidden + 1);
  }

  // W uniform(+-sqrt(6/(in+h))), U uniform(+-sqrt(1/h)), forget bias 1.
  void Init(Rng& rng);

  LstmState Forward(std::span<const double> x, const LstmState& prev,
                    bool record);
  LstmBackwardResult Backward(std::span<const double> dh,
                              std::span<const double> dc);

  Tensor& w(Gate g) { return w_[g]; }
  Tensor& u(Gate g) { return u_[g]; }
  Tensor& b(Gate g) { return b_[g]; }
  const Tensor& w(Gate g) const { return w_[g]; }
  const Tensor& u(Gate g) const { return u_[g]; }
  const Tensor& b(Gate g) const { return b_[g]; }
  std::size_t in_features() const { return in_; }
  std::size_t hidden() const { return hidden_; }
  std::size_t cached_steps() const { return cache_.size(); }
  void ClearCache() { cache_.clear(); }

 private:
  struct Cache {
    std::vector<double> x, h_prev, c_prev;
    std::array<std::vector<double>, 4> act;  // i, f, o, g after nonlinearity
    std::vector<double> tanh_c;
  };

  std::size_t in_;
  std::size_t hidden_;
  std::array<Tensor, 4> w_;
  std::array<Tensor, 4> u_;
  std::array<Tensor, 4> b_;
  std::vector<Cache> cache_;
};

}  // namespace a3ct

#endif  // A3CT_LAYERS_HPP
