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

#ifndef A3CT_BACKTESTER_HPP
#define A3CT_BACKTESTER_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "a3ct/checkpoint.hpp"
#include "a3ct/market_env.hpp"

namespace a3ct {

struct EquityPoint {
  std::int64_t timestamp = 0;
  double equity = 0.0;  // net of commission

  friend bool operator==(const EquityPoint&, const EquityPoint&) = default;
};

// One round trip. A reversal closes one transaction and opens another.
struct Transaction {
  std::int64_t open_time = 0;
  std::int64_t close_time = 0;
  int direction = 0;  // +1 long, -1 short
  double open_price = 0.0;
  double close_price = 0.0;
  double gross_pnl = 0.0;
  double net_pnl = 0.0;  // gross minus both operations' commission

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

struct BacktestMetrics {
  double profit_pct_pa = 0.0;
  double profit_pct_pa_commission = 0.0;
  double sharpe = 0.0;  // NaN when fewer than two days or zero variability
  double winning_fraction = 0.0;
  double avg_transaction = 0.0;
  bool no_transactions = false;

  friend bool operator==(const BacktestMetrics&, const BacktestMetrics&) = default;
};

struct BacktestReport {
  std::string name;
  std::vector<EquityPoint> equity_curve;  // steps + 1 points
  std::vector<Transaction> transactions;
  std::vector<int> positions;  // chosen position per step
  BacktestMetrics metrics;
  std::size_t n_trades = 0;
  double begin_price = 0.0;
  double number_of_days = 0.0;
  double profit = 0.0;      // before commission
  double commission = 0.0;  // true fees charged
  long operations = 0;
  double fee_per_operation = 1.25;
};

bool operator==(const BacktestReport& a, const BacktestReport& b);

struct BacktestConfig {
  double fee_per_operation = 1.25;
  double start_capital = 0.0;
  std::optional<double> days;  // default: calendar span of the series
  // When set, the checkpoint must agree on these.
  std::optional<int> expected_feature_dim;
  std::optional<int> expected_depth;
};

// 100 * (profit / begin_price) * (365 / days)
double ProfitPctPerAnnum(double profit, double begin_price, double days);
// 100 * ((profit - n_trades * fee) / begin_price) * (365 / days); fee is per
// round-trip transaction.
double ProfitPctPerAnnumCommission(double profit, std::size_t n_trades,
                                   double begin_price, double days, double fee);
// mean / population stdev. Throws on fewer than 2 periods or zero stdev.
double SharpeRatio(std::span<const double> period_profits);

struct TransactionSummary {
  double winning_fraction = 0.0;  // percent
  double avg_transaction = 0.0;
  bool empty = false;
};
TransactionSummary SummarizeTransactions(std::span<const double> pnls);

// Net P&L per calendar day (UTC) from an equity curve.
std::vector<double> DailyProfits(std::span<const EquityPoint> curve);

// Metrics derived only from the report's equity curve and transactions.
BacktestMetrics RecomputeMetrics(std::span<const EquityPoint> curve,
                                 std::span<const Transaction> transactions,
                                 double begin_price, double days,
                                 double fee_per_operation);

// Chooses a position for the observation at `cursor`.
using PolicyFn = std::function<int(std::size_t cursor, std::span<const double> state)>;

// Steps the whole series with true fees and no penalty; closes any open
// position at the final close.
BacktestReport RunPolicyBacktest(const BarSeries& series, const FeatureSettings& features,
                                 const PolicyFn& policy, const BacktestConfig& cfg);

// Argmax policy, dropout off; ties resolve to the lowest action index (short).
BacktestReport RunBacktest(const Checkpoint& ckpt, const BarSeries& series,
                           const BacktestConfig& cfg);

std::size_t ArgmaxAction(std::span<const double> policy);

std::string FormatReportTable(const BacktestReport& report);

// Writes report.txt, report.json, equity.csv and transactions.csv.
void WriteReport(const std::filesystem::path& dir, const BacktestReport& report);
// Reads the artifacts of WriteReport and recomputes the metrics.
BacktestReport LoadReport(const std::filesystem::path& dir);

}  // namespace a3ct

#endif  // A3CT_BACKTESTER_HPP
