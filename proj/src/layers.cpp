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

#include "a3ct/layers.hpp"

#include <algorithm>
#include <cmath>

#include "a3ct/error.hpp"

namespace a3ct {

namespace {

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// out += M v, M is [rows x cols] row-major.
void MatVecAdd(const Tensor& m, std::span<const double> v,
               std::span<double> out) {
  const std::size_t cols = m.cols();
  const double* row = m.data().data();
  for (std::size_t r = 0; r < out.size(); ++r, row += cols) {
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += row[c] * v[c];
    out[r] += acc;
  }
}

// out += M^T v
void MatTVecAdd(const Tensor& m, std::span<const double> v,
                std::span<double> out) {
  const std::size_t cols = m.cols();
  const double* row = m.data().data();
  for (std::size_t r = 0; r < v.size(); ++r, row += cols) {
    const double vr = v[r];
    if (vr == 0.0) continue;
    for (std::size_t c = 0; c < cols; ++c) out[c] += row[c] * vr;
  }
}

// grad(M) += v u^T
void OuterAdd(Tensor& m, std::span<const double> v, std::span<const double> u) {
  const std::size_t cols = m.cols();
  double* row = m.grad().data();
  for (std::size_t r = 0; r < v.size(); ++r, row += cols) {
    const double vr = v[r];
    if (vr == 0.0) continue;
    for (std::size_t c = 0; c < cols; ++c) row[c] += vr * u[c];
  }
}

void UniformInit(Tensor& t, double bound, Rng& rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (double& v : t.data()) v = dist(rng);
}

void CheckLength(std::span<const double> v, std::size_t expected,
                 const char* what) {
  if (v.size() != expected) {
    Fail(ErrorCode::kShapeMismatch,
         std::string(what) + ": got [" + std::to_string(v.size()) +
             "], expected [" + std::to_string(expected) + "]");
  }
}

}  // namespace

std::vector<double> Softmax(std::span<const double> logits) {
  if (logits.empty()) Fail(ErrorCode::kInvalidArgument, "softmax of empty vector");
  for (double z : logits) {
    if (std::isnan(z)) Fail(ErrorCode::kNumeric, "softmax input contains NaN");
  }
  const double mx = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(logits[i] - mx);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

std::vector<double> Dropout(std::span<const double> x, double p, Mode mode,
                            Rng& rng) {
  DropoutLayer layer(p);
  return layer.Forward(x, mode, &rng, false);
}

// --- DenseLayer ------------------------------------------------------------

DenseLayer::DenseLayer(std::size_t in, std::size_t out, Activation act)
    : w_({out, in}), b_({out}), act_(act) {}

void DenseLayer::Init(Rng& rng) {
  const double bound =
      std::sqrt(6.0 / static_cast<double>(in_features() + out_features()));
  UniformInit(w_, bound, rng);
  b_.Fill(0.0);
}

std::vector<double> DenseLayer::Forward(std::span<const double> x,
                                        bool record) {
  if (x.size() != in_features()) {
    Fail(ErrorCode::kShapeMismatch,
         "dense forward: input [" + std::to_string(x.size()) +
             "] does not match weight " + w_.ShapeString());
  }
  std::vector<double> y(b_.data().begin(), b_.data().end());
  MatVecAdd(w_, x, y);
  if (act_ == Activation::kTanh) {
    for (double& v : y) v = std::tanh(v);
  }
  if (record) cache_.push_back({{x.begin(), x.end()}, y});
  return y;
}

std::vector<double> DenseLayer::Backward(std::span<const double> dy) {
  if (cache_.empty()) Fail(ErrorCode::kState, "dense backward without a cached forward");
  CheckLength(dy, out_features(), "dense backward cotangent");
  Cache cache = std::move(cache_.back());
  cache_.pop_back();

  std::vector<double> dz(dy.begin(), dy.end());
  if (act_ == Activation::kTanh) {
    for (std::size_t i = 0; i < dz.size(); ++i) {
      dz[i] *= 1.0 - cache.y[i] * cache.y[i];
    }
  }
  OuterAdd(w_, dz, cache.x);
  auto db = b_.grad();
  for (std::size_t i = 0; i < dz.size(); ++i) db[i] += dz[i];

  std::vector<double> dx(in_features(), 0.0);
  MatTVecAdd(w_, dz, dx);
  return dx;
}

// --- DropoutLayer ----------------------------------------------------------

DropoutLayer::DropoutLayer(double p) : p_(p) {
  if (!(p >= 0.0 && p < 1.0)) {
    Fail(ErrorCode::kInvalidArgument,
         "dropout probability must be in [0, 1), got " + std::to_string(p));
  }
}

std::vector<double> DropoutLayer::Forward(std::span<const double> x, Mode mode,
                                          Rng* rng, bool record) {
  std::vector<double> y(x.begin(), x.end());
  if (mode == Mode::kEval || p_ == 0.0) {
    if (record) masks_.emplace_back(x.size(), 1.0);
    return y;
  }
  if (rng == nullptr) Fail(ErrorCode::kInvalidArgument, "train-mode dropout needs an rng");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double scale = 1.0 / (1.0 - p_);
  std::vector<double> mask(x.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    mask[i] = unit(*rng) < p_ ? 0.0 : scale;
    y[i] *= mask[i];
  }
  if (record) masks_.push_back(std::move(mask));
  return y;
}

std::vector<double> DropoutLayer::Backward(std::span<const double> dy) {
  if (masks_.empty()) Fail(ErrorCode::kState, "dropout backward without a cached forward");
  std::vector<double> mask = std::move(masks_.back());
  masks_.pop_back();
  CheckLength(dy, mask.size(), "dropout backward cotangent");
  std::vector<double> dx(dy.size());
  for (std::size_t i = 0; i < dx.size(); ++i) dx[i] = dy[i] * mask[i];
  return dx;
}

// --- LstmLayer -------------------------------------------------------------

LstmLayer::LstmLayer(std::size_t in, std::size_t hidden)
    : in_(in), hidden_(hidden) {
  for (int g = 0; g < 4; ++g) {
    w_[g] = Tensor({hidden, in});
    u_[g] = Tensor({hidden, hidden});
    b_[g] = Tensor({hidden});
  }
}

void LstmLayer::Init(Rng& rng) {
  const double w_bound = std::sqrt(6.0 / static_cast<double>(in_ + hidden_));
  const double u_bound = std::sqrt(1.0 / static_cast<double>(hidden_));
  for (int g = 0; g < 4; ++g) {
    UniformInit(w_[g], w_bound, rng);
    UniformInit(u_[g], u_bound, rng);
    b_[g].Fill(g == kForget ? 1.0 : 0.0);
  }
}

LstmState LstmLayer::Forward(std::span<const double> x, const LstmState& prev,
                             bool record) {
  CheckLength(x, in_, "lstm input");
  CheckLength(prev.h, hidden_, "lstm hidden state");
  CheckLength(prev.c, hidden_, "lstm cell state");

  std::array<std::vector<double>, 4> act;
  for (int g = 0; g < 4; ++g) {
    act[g].assign(b_[g].data().begin(), b_[g].data().end());
    MatVecAdd(w_[g], x, act[g]);
    MatVecAdd(u_[g], prev.h, act[g]);
    for (double& z : act[g]) z = (g == kCandidate) ? std::tanh(z) : Sigmoid(z);
  }

  LstmState next = LstmState::Zeros(hidden_);
  std::vector<double> tanh_c(hidden_);
  for (std::size_t k = 0; k < hidden_; ++k) {
    next.c[k] = act[kForget][k] * prev.c[k] + act[kInput][k] * act[kCandidate][k];
    tanh_c[k] = std::tanh(next.c[k]);
    next.h[k] = act[kOutput][k] * tanh_c[k];
  }
  if (record) {
    cache_.push_back({{x.begin(), x.end()}, prev.h, prev.c, std::move(act),
                      std::move(tanh_c)});
  }
  return next;
}

LstmBackwardResult LstmLayer::Backward(std::span<const double> dh,
                                       std::span<const double> dc) {
  if (cache_.empty()) Fail(ErrorCode::kState, "lstm backward without a cached forward");
  CheckLength(dh, hidden_, "lstm dh");
  CheckLength(dc, hidden_, "lstm dc");
  Cache cache = std::move(cache_.back());
  cache_.pop_back();
  const auto& a = cache.act;

  std::array<std::vector<double>, 4> dz;
  for (auto& v : dz) v.resize(hidden_);
  LstmBackwardResult out{std::vector<double>(in_, 0.0), LstmState::Zeros(hidden_)};

  for (std::size_t k = 0; k < hidden_; ++k) {
    const double tc = cache.tanh_c[k];
    const double d_o = dh[k] * tc;
    const double d_c = dc[k] + dh[k] * a[kOutput][k] * (1.0 - tc * tc);
    const double d_i = d_c * a[kCandidate][k];
    const double d_g = d_c * a[kInput][k];
    const double d_f = d_c * cache.c_prev[k];
    out.dstate.c[k] = d_c * a[kForget][k];
    dz[kInput][k] = d_i * a[kInput][k] * (1.0 - a[kInput][k]);
    dz[kForget][k] = d_f * a[kForget][k] * (1.0 - a[kForget][k]);
    dz[kOutput][k] = d_o * a[kOutput][k] * (1.0 - a[kOutput][k]);
    dz[kCandidate][k] = d_g * (1.0 - a[kCandidate][k] * a[kCandidate][k]);
  }

  for (int g = 0; g < 4; ++g) {
    OuterAdd(w_[g], dz[g], cache.x);
    OuterAdd(u_[g], dz[g], cache.h_prev);
    auto db = b_[g].grad();
    for (std::size_t k = 0; k < hidden_; ++k) db[k] += dz[g][k];
    MatTVecAdd(w_[g], dz[g], out.dx);
    MatTVecAdd(u_[g], dz[g], out.dstate.h);
  }
  return out;
}

}  // namespace a3ct
