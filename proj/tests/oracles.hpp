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

// Reference implementations used as test oracles. Written directly from the
// defining formulas, independently of the library code paths.

#ifndef A3CT_TESTS_ORACLES_HPP
#define A3CT_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <vector>

namespace oracle {

// y[r] = sum_c W[r][c] x[c] + b[r], triple-loop style.
inline std::vector<double> MatVec(const std::vector<std::vector<double>>& w,
                                  const std::vector<double>& x,
                                  const std::vector<double>& b) {
  std::vector<double> y(w.size(), 0.0);
  for (std::size_t r = 0; r < w.size(); ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < x.size(); ++c) acc += w[r][c] * x[c];
    y[r] = acc + b[r];
  }
  return y;
}

// V_i = sum_{k=i}^{T-1} gamma^(k-i) r_k + gamma^(T-i) bootstrap, by direct
// double summation.
inline std::vector<double> BruteReturns(const std::vector<double>& r, double gamma,
                                        double bootstrap) {
  const std::size_t n = r.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t k = i; k < n; ++k) sum += std::pow(gamma, static_cast<double>(k - i)) * r[k];
    sum += std::pow(gamma, static_cast<double>(n - i)) * bootstrap;
    out[i] = sum;
  }
  return out;
}

struct LedgerTrade {
  std::int64_t open_time = 0;
  std::int64_t close_time = 0;
  int direction = 0;
  double open_price = 0.0;
  double close_price = 0.0;
  double net = 0.0;
};

struct Ledger {
  std::vector<double> rewards;        // per step, with multiplier and penalty
  std::vector<double> marked_values;  // cash + holdings after each step
  double cash = 0.0;                  // after the final step, before liquidation
  int position = 0;
  double commission = 0.0;            // true fees
  long operations = 0;
  // Backtest view: everything closed at the final price.
  double final_cash = 0.0;
  double final_commission = 0.0;
  long final_operations = 0;
  std::vector<double> equity;  // net of commission, liquidation in the last point
  std::vector<LedgerTrade> trades;
};

// Replays unit-by-unit buys and sells. `positions[k]` is the position held
// over bar k -> k+1, traded at closes[k].
inline Ledger Replay(const std::vector<double>& closes, const std::vector<std::int64_t>& times,
                     const std::vector<int>& positions, double fee, double fee_multiplier,
                     double penalty, int grace, double start_cash) {
  Ledger L;
  L.cash = start_cash;
  int held = 0;
  int run = 0;
  bool have_open = false;
  LedgerTrade open;
  L.equity.push_back(start_cash);
  auto close_trade = [&](std::size_t k) {
    open.close_time = times[k];
    open.close_price = closes[k];
    open.net = open.direction * (open.close_price - open.open_price) - 2.0 * fee;
    L.trades.push_back(open);
    have_open = false;
  };
  for (std::size_t k = 0; k < positions.size(); ++k) {
    const int target = positions[k];
    const double before = L.cash + held * closes[k];
    int ops = 0;
    if (target != held && held != 0) close_trade(k);
    while (held < target) {
      L.cash -= closes[k];
      L.commission += fee;
      ++held;
      ++ops;
    }
    while (held > target) {
      L.cash += closes[k];
      L.commission += fee;
      --held;
      ++ops;
    }
    if (ops > 0 && target != 0) {
      have_open = true;
      open = LedgerTrade{times[k], 0, target, closes[k], 0.0, 0.0};
    }
    L.operations += ops;
    run = ops == 0 ? run + 1 : 1;
    const double after = L.cash + held * closes[k + 1];
    L.marked_values.push_back(after);
    double r = after - before - fee * fee_multiplier * ops;
    if (run > grace) r -= penalty * (run - grace);
    L.rewards.push_back(r);
    L.equity.push_back(after - L.commission);
  }
  L.position = held;
  L.final_cash = L.cash;
  L.final_commission = L.commission;
  L.final_operations = L.operations;
  const std::size_t last = closes.size() - 1;
  if (held != 0) {
    if (have_open) close_trade(last);
    L.final_cash += held * closes[last];
    L.final_commission += fee * std::abs(held);
    L.final_operations += std::abs(held);
    L.equity.back() = L.final_cash - L.final_commission;
  }
  return L;
}

}  // namespace oracle

#endif  // A3CT_TESTS_ORACLES_HPP
