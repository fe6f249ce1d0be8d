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

#include "a3ct/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "a3ct/error.hpp"

namespace a3ct {

namespace {

std::size_t Product(const std::vector<std::size_t>& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

void CheckShape(const std::vector<std::size_t>& shape) {
  if (shape.empty()) Fail(ErrorCode::kInvalidArgument, "tensor shape is empty");
  for (auto d : shape) {
    if (d == 0) {
      Fail(ErrorCode::kInvalidArgument,
           "tensor shape " + ShapeString(shape) + " has a zero extent");
    }
  }
}

}  // namespace

std::string ShapeString(const std::vector<std::size_t>& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

Tensor::Tensor(std::vector<std::size_t> shape) : shape_(std::move(shape)) {
  CheckShape(shape_);
  data_.assign(Product(shape_), 0.0);
  grad_.assign(data_.size(), 0.0);
}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  CheckShape(shape_);
  if (data_.size() != Product(shape_)) {
    Fail(ErrorCode::kShapeMismatch,
         "tensor data has " + std::to_string(data_.size()) +
             " values but shape " + a3ct::ShapeString(shape_) + " needs " +
             std::to_string(Product(shape_)));
  }
  grad_.assign(data_.size(), 0.0);
}

Tensor Tensor::Vector(std::vector<double> values) {
  const std::size_t n = values.size();
  return Tensor({n}, std::move(values));
}

void Tensor::ZeroGrad() { std::fill(grad_.begin(), grad_.end(), 0.0); }

void Tensor::Fill(double value) { std::fill(data_.begin(), data_.end(), value); }

bool Tensor::AllFinite() const {
  auto finite = [](double v) { return std::isfinite(v); };
  return std::all_of(data_.begin(), data_.end(), finite) &&
         std::all_of(grad_.begin(), grad_.end(), finite);
}

std::string Tensor::ShapeString() const { return a3ct::ShapeString(shape_); }

}  // namespace a3ct
