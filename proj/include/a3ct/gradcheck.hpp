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

#ifndef A3CT_GRADCHECK_HPP
#define A3CT_GRADCHECK_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "a3ct/tensor.hpp"

namespace a3ct {

struct NamedParam {
  std::string name;
  Tensor* tensor;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t checked = 0;
};

// Compares `analytic` (flat, in registry order) against central differences
// of `loss`, perturbing every entry of every parameter by +-eps in place.
// Relative error per entry is |a - n| / max(|a|, |n|, floor).
inline constexpr double kGradCheckFloor = 1e-8;
GradCheckResult GradCheck(std::span<const NamedParam> params,
                          std::span<const double> analytic,
                          const std::function<double()>& loss, double eps,
                          double floor = kGradCheckFloor);

}  // namespace a3ct

#endif  // A3CT_GRADCHECK_HPP
