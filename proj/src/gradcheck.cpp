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

#include "a3ct/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "a3ct/error.hpp"

namespace a3ct {

GradCheckResult GradCheck(std::span<const NamedParam> params,
                          std::span<const double> analytic,
                          const std::function<double()>& loss, double eps,
                          double floor) {
  if (!(eps > 0.0)) Fail(ErrorCode::kInvalidArgument, "grad check eps must be > 0");
  if (!(floor > 0.0)) Fail(ErrorCode::kInvalidArgument, "grad check floor must be > 0");
  std::size_t total = 0;
  for (const auto& p : params) total += p.tensor->size();
  if (total != analytic.size()) {
    Fail(ErrorCode::kShapeMismatch,
         "grad check: " + std::to_string(analytic.size()) +
             " analytic entries for " + std::to_string(total) + " parameters");
  }

  auto eval = [&loss]() {
    const double v = loss();
    if (!std::isfinite(v)) Fail(ErrorCode::kNumeric, "grad check: loss is not finite");
    return v;
  };
  eval();

  GradCheckResult result;
  std::size_t flat = 0;
  for (const auto& p : params) {
    auto data = p.tensor->data();
    for (std::size_t i = 0; i < data.size(); ++i, ++flat) {
      const double saved = data[i];
      data[i] = saved + eps;
      const double up = eval();
      data[i] = saved - eps;
      const double down = eval();
      data[i] = saved;

      const double numeric = (up - down) / (2.0 * eps);
      const double a = analytic[flat];
      const double denom = std::max({std::abs(a), std::abs(numeric), floor});
      const double rel = std::abs(a - numeric) / denom;
      ++result.checked;
      if (rel > result.max_relative_error || result.checked == 1) {
        result.max_relative_error = rel;
        result.worst_param = p.name;
        result.worst_index = i;
        result.worst_analytic = a;
        result.worst_numeric = numeric;
      }
    }
  }
  return result;
}

}  // namespace a3ct
