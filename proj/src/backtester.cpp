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

#include "a3ct/backtester.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <memory>
#include <sstream>

#include "a3ct/error.hpp"
#include "json.hpp"

namespace a3ct {

namespace {

bool SameBits(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

bool SameMetrics(const BacktestMetrics& a, const BacktestMetrics& b) {
  return SameBits(a.profit_pct_pa, b.profit_pct_pa) &&
         SameBits(a.profit_pct_pa_commission, b.profit_pct_pa_commission) &&
         SameBits(a.sharpe, b.sharpe) && SameBits(a.winning_fraction, b.winning_fraction) &&
         SameBits(a.avg_transaction, b.avg_transaction) &&
         a.no_transactions == b.no_transactions;
}

void CheckDenominators(double begin_price, double days) {
  if (!(begin_price > 0)) Fail(ErrorCode::kInvalidArgument, "begin_price must be > 0");
  if (!(days > 0)) Fail(ErrorCode::kInvalidArgument, "number_of_days must be > 0");
}

double SharpeOrNaN(std::span<const double> daily) {
  try {
    return SharpeRatio(daily);
  } catch (const Error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

std::string Num(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::vector<double> NetPnls(std::span<const Transaction> tx) {
  std::vector<double> out;
  out.reserve(tx.size());
  for (const auto& t : tx) out.push_back(t.net_pnl);
  return out;
}

}  // namespace

bool operator==(const BacktestReport& a, const BacktestReport& b) {
  return a.name == b.name && a.equity_curve == b.equity_curve &&
         a.transactions == b.transactions && a.positions == b.positions &&
         SameMetrics(a.metrics, b.metrics) && a.n_trades == b.n_trades &&
         SameBits(a.begin_price, b.begin_price) &&
         SameBits(a.number_of_days, b.number_of_days) && SameBits(a.profit, b.profit) &&
         SameBits(a.commission, b.commission) && a.operations == b.operations &&
         SameBits(a.fee_per_operation, b.fee_per_operation);
}

double ProfitPctPerAnnum(double profit, double begin_price, double days) {
  CheckDenominators(begin_price, days);
  return 100.0 * (profit / begin_price) * (365.0 / days);
}

double ProfitPctPerAnnumCommission(double profit, std::size_t n_trades,
                                   double begin_price, double days, double fee) {
  CheckDenominators(begin_price, days);
  return 100.0 * ((profit - static_cast<double>(n_trades) * fee) / begin_price) *
         (365.0 / days);
}

double SharpeRatio(std::span<const double> p) {
  if (p.size() < 2) Fail(ErrorCode::kInvalidArgument, "sharpe ratio needs >= 2 periods");
  double mean = 0.0;
  for (double v : p) mean += v;
  mean /= static_cast<double>(p.size());
  double var = 0.0;
  for (double v : p) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / static_cast<double>(p.size()));
  if (!(sd > 0)) Fail(ErrorCode::kNumeric, "zero variability");
  return mean / sd;
}

TransactionSummary SummarizeTransactions(std::span<const double> pnls) {
  TransactionSummary s;
  if (pnls.empty()) {
    s.empty = true;
    return s;
  }
  std::size_t wins = 0;
  double total = 0.0;
  for (double v : pnls) {
    if (v > 0) ++wins;
    total += v;
  }
  const auto n = static_cast<double>(pnls.size());
  s.winning_fraction = 100.0 * static_cast<double>(wins) / n;
  s.avg_transaction = total / n;
  return s;
}

std::vector<double> DailyProfits(std::span<const EquityPoint> curve) {
  std::vector<double> out;
  if (curve.empty()) return out;
  auto day_of = [](std::int64_t ts) { return ts >= 0 ? ts / 1440 : (ts - 1439) / 1440; };
  double prev_close = curve.front().equity;
  std::int64_t day = day_of(curve.front().timestamp);
  double last = curve.front().equity;
  for (const auto& p : curve) {
    const auto d = day_of(p.timestamp);
    if (d != day) {
      out.push_back(last - prev_close);
      prev_close = last;
      day = d;
    }
    last = p.equity;
  }
  out.push_back(last - prev_close);
  return out;
}

BacktestMetrics RecomputeMetrics(std::span<const EquityPoint> curve,
                                 std::span<const Transaction> transactions,
                                 double begin_price, double days,
                                 double fee_per_operation) {
  if (curve.empty()) Fail(ErrorCode::kInvalidArgument, "empty equity curve");
  const double round_trip_fee = 2.0 * fee_per_operation;
  const double net = curve.back().equity - curve.front().equity;
  const double profit = net + round_trip_fee * static_cast<double>(transactions.size());

  BacktestMetrics m;
  m.profit_pct_pa = ProfitPctPerAnnum(profit, begin_price, days);
  m.profit_pct_pa_commission = ProfitPctPerAnnumCommission(
      profit, transactions.size(), begin_price, days, round_trip_fee);
  m.sharpe = SharpeOrNaN(DailyProfits(curve));
  const auto s = SummarizeTransactions(NetPnls(transactions));
  m.winning_fraction = s.winning_fraction;
  m.avg_transaction = s.avg_transaction;
  m.no_transactions = s.empty;
  return m;
}

std::size_t ArgmaxAction(std::span<const double> policy) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < policy.size(); ++i) {
    if (policy[i] > policy[best]) best = i;
  }
  return best;
}

BacktestReport RunPolicyBacktest(const BarSeries& series, const FeatureSettings& features,
                                 const PolicyFn& policy, const BacktestConfig& cfg) {
  series.Validate();
  if (series.size() < static_cast<std::size_t>(features.depth)) {
    Fail(ErrorCode::kInvalidArgument, "series of " + std::to_string(series.size()) +
                                          " bars is shorter than depth " +
                                          std::to_string(features.depth));
  }
  auto shared = std::make_shared<const BarSeries>(series);
  auto matrix = std::make_shared<const FeatureMatrix>(*shared, features.feature_dim,
                                                      features.scales);
  EnvConfig env_cfg;
  env_cfg.fee_per_operation = cfg.fee_per_operation;
  env_cfg.train_fee_multiplier = 1.0;
  env_cfg.repetition_penalty = 0.0;
  env_cfg.episode_length = static_cast<int>(series.size());
  env_cfg.start_capital = cfg.start_capital;
  env_cfg.feature_dim = features.feature_dim;
  env_cfg.depth = features.depth;
  MarketEnv env(shared, matrix, env_cfg);

  BacktestReport r;
  r.fee_per_operation = cfg.fee_per_operation;
  r.begin_price = series.bars.front().close;
  r.number_of_days = cfg.days ? *cfg.days
                              : static_cast<double>(series.bars.back().timestamp -
                                                    series.bars.front().timestamp) /
                                    1440.0;

  std::vector<double> state = env.Reset(0);
  r.equity_curve.push_back({series.bars.front().timestamp, env.state().net_equity()});

  std::optional<Transaction> open;
  auto transition = [&](int from, int to, const Bar& bar) {
    if (from == to) return;
    if (from != 0) {
      Transaction t = *open;
      t.close_time = bar.timestamp;
      t.close_price = bar.close;
      t.gross_pnl = t.direction * (t.close_price - t.open_price);
      t.net_pnl = t.gross_pnl - 2.0 * cfg.fee_per_operation;
      r.transactions.push_back(t);
      open.reset();
    }
    if (to != 0) {
      Transaction t;
      t.open_time = bar.timestamp;
      t.open_price = bar.close;
      t.direction = to;
      open = t;
    }
  };

  while (!env.done()) {
    const std::size_t cursor = env.state().cursor;
    const int prev = env.state().position;
    const int pos = policy(cursor, state);
    StepResult step = env.Step(pos);
    transition(prev, pos, series.bars[cursor]);
    r.positions.push_back(pos);
    r.equity_curve.push_back({series.bars[env.state().cursor].timestamp,
                              env.state().net_equity()});
    state = std::move(step.state);
  }

  // Liquidate at the final close.
  const EnvState& s = env.state();
  const Bar& last = series.bars.back();
  double cash = s.cash;
  double commission = s.commission_paid;
  long operations = s.operations;
  if (s.position != 0) {
    cash += s.position * last.close;
    commission += cfg.fee_per_operation * std::abs(s.position);
    operations += std::abs(s.position);
    transition(s.position, 0, last);
    r.equity_curve.back().equity = cash - commission;
  }

  r.profit = cash - cfg.start_capital;
  r.commission = commission;
  r.operations = operations;
  r.n_trades = r.transactions.size();

  const double round_trip_fee = 2.0 * cfg.fee_per_operation;
  r.metrics.profit_pct_pa = ProfitPctPerAnnum(r.profit, r.begin_price, r.number_of_days);
  r.metrics.profit_pct_pa_commission = ProfitPctPerAnnumCommission(
      r.profit, r.n_trades, r.begin_price, r.number_of_days, round_trip_fee);
  r.metrics.sharpe = SharpeOrNaN(DailyProfits(r.equity_curve));
  const auto summary = SummarizeTransactions(NetPnls(r.transactions));
  r.metrics.winning_fraction = summary.winning_fraction;
  r.metrics.avg_transaction = summary.avg_transaction;
  r.metrics.no_transactions = summary.empty;
  return r;
}

BacktestReport RunBacktest(const Checkpoint& ckpt, const BarSeries& series,
                           const BacktestConfig& cfg) {
  if (cfg.expected_feature_dim && *cfg.expected_feature_dim != ckpt.features.feature_dim) {
    Fail(ErrorCode::kMismatch, "checkpoint feature_dim " +
                                   std::to_string(ckpt.features.feature_dim) +
                                   " does not match configured feature_dim " +
                                   std::to_string(*cfg.expected_feature_dim));
  }
  if (cfg.expected_depth && *cfg.expected_depth != ckpt.features.depth) {
    Fail(ErrorCode::kMismatch, "checkpoint depth " + std::to_string(ckpt.features.depth) +
                                   " does not match configured depth " +
                                   std::to_string(*cfg.expected_depth));
  }
  ActorCriticNet net = ckpt.BuildNet();
  net.ResetRecurrent();
  PolicyFn policy = [&net](std::size_t, std::span<const double> state) {
    const PolicyValue out = net.Forward(state, Mode::kEval);
    return ActionToPosition(ArgmaxAction(out.policy));
  };
  BacktestReport r = RunPolicyBacktest(series, ckpt.features, policy, cfg);
  r.name = ckpt.arch.name;
  return r;
}

std::string FormatReportTable(const BacktestReport& r) {
  std::ostringstream os;
  auto cell = [](double v) {
    std::ostringstream c;
    if (std::isnan(v)) {
      c << "n/a";
    } else {
      c << std::fixed << std::setprecision(2) << v;
    }
    return c.str();
  };
  os << std::left << std::setw(10) << "Name" << std::right << std::setw(22)
     << "Profit % per annum" << std::setw(32) << "Profit % per annum (commis.)"
     << std::setw(14) << "Sharpe ratio" << std::setw(36)
     << "Fraction of winning transactions" << std::setw(30)
     << "Average transaction, rubles" << "\n";
  os << std::left << std::setw(10) << (r.name.empty() ? "-" : r.name) << std::right
     << std::setw(22) << cell(r.metrics.profit_pct_pa) << std::setw(32)
     << cell(r.metrics.profit_pct_pa_commission) << std::setw(14) << cell(r.metrics.sharpe)
     << std::setw(36) << cell(r.metrics.winning_fraction) << std::setw(30)
     << cell(r.metrics.avg_transaction) << "\n";
  os << "transactions " << r.n_trades << ", operations " << r.operations
     << ", commission " << cell(r.commission) << " rubles, profit before commission "
     << cell(r.profit) << " rubles, days " << r.number_of_days << "\n";
  if (r.metrics.no_transactions) os << "no completed transactions\n";
  return os.str();
}

void WriteReport(const std::filesystem::path& dir, const BacktestReport& r) {
  std::filesystem::create_directories(dir);
  auto open = [&dir](const char* name) {
    std::ofstream out(dir / name, std::ios::trunc);
    if (!out) Fail(ErrorCode::kIo, "cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open("equity.csv");
    out << "timestamp,equity\n";
    for (const auto& p : r.equity_curve) out << p.timestamp << "," << Num(p.equity) << "\n";
  }
  {
    auto out = open("transactions.csv");
    out << "open_time,close_time,direction,open_price,close_price,gross_pnl,net_pnl\n";
    for (const auto& t : r.transactions) {
      out << t.open_time << "," << t.close_time << "," << t.direction << ","
          << Num(t.open_price) << "," << Num(t.close_price) << "," << Num(t.gross_pnl)
          << "," << Num(t.net_pnl) << "\n";
    }
  }
  {
    auto out = open("positions.csv");
    out << "timestamp,position\n";
    for (std::size_t k = 0; k < r.positions.size(); ++k) {
      out << r.equity_curve[k].timestamp << "," << r.positions[k] << "\n";
    }
  }
  {
    nlohmann::json j;
    j["name"] = r.name;
    j["begin_price"] = r.begin_price;
    j["number_of_days"] = r.number_of_days;
    j["fee_per_operation"] = r.fee_per_operation;
    j["n_trades"] = r.n_trades;
    j["operations"] = r.operations;
    j["profit"] = r.profit;
    j["commission"] = r.commission;
    auto num_or_null = [](double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); };
    j["metrics"] = {{"profit_pct_pa", r.metrics.profit_pct_pa},
                    {"profit_pct_pa_commission", r.metrics.profit_pct_pa_commission},
                    {"sharpe", num_or_null(r.metrics.sharpe)},
                    {"winning_fraction", r.metrics.winning_fraction},
                    {"avg_transaction_rubles", r.metrics.avg_transaction},
                    {"no_transactions", r.metrics.no_transactions}};
    auto out = open("report.json");
    out << j.dump(2) << "\n";
  }
  {
    auto out = open("report.txt");
    out << FormatReportTable(r);
  }
}

namespace {

std::vector<std::vector<std::string>> ReadCsvRows(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    rows.push_back(std::move(fields));
  }
  return rows;
}

double ParseNum(const std::string& s, const std::filesystem::path& where) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    Fail(ErrorCode::kParse, where.string() + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

BacktestReport LoadReport(const std::filesystem::path& dir) {
  BacktestReport r;
  nlohmann::json j;
  {
    std::ifstream in(dir / "report.json");
    if (!in) Fail(ErrorCode::kIo, "cannot open " + (dir / "report.json").string());
    try {
      in >> j;
      r.name = j.at("name").get<std::string>();
      r.begin_price = j.at("begin_price").get<double>();
      r.number_of_days = j.at("number_of_days").get<double>();
      r.fee_per_operation = j.at("fee_per_operation").get<double>();
      r.operations = j.at("operations").get<long>();
      r.commission = j.at("commission").get<double>();
      r.profit = j.at("profit").get<double>();
      const auto& m = j.at("metrics");
      r.metrics.profit_pct_pa = m.at("profit_pct_pa").get<double>();
      r.metrics.profit_pct_pa_commission = m.at("profit_pct_pa_commission").get<double>();
      r.metrics.sharpe = m.at("sharpe").is_null() ? std::nan("") : m.at("sharpe").get<double>();
      r.metrics.winning_fraction = m.at("winning_fraction").get<double>();
      r.metrics.avg_transaction = m.at("avg_transaction_rubles").get<double>();
      r.metrics.no_transactions = m.at("no_transactions").get<bool>();
    } catch (const nlohmann::json::exception& e) {
      Fail(ErrorCode::kParse, (dir / "report.json").string() + ": " + e.what());
    }
  }
  const auto eq_path = dir / "equity.csv";
  for (const auto& row : ReadCsvRows(eq_path)) {
    if (row.size() != 2) Fail(ErrorCode::kParse, eq_path.string() + ": expected 2 columns");
    r.equity_curve.push_back({static_cast<std::int64_t>(ParseNum(row[0], eq_path)),
                              ParseNum(row[1], eq_path)});
  }
  const auto tx_path = dir / "transactions.csv";
  for (const auto& row : ReadCsvRows(tx_path)) {
    if (row.size() != 7) Fail(ErrorCode::kParse, tx_path.string() + ": expected 7 columns");
    Transaction t;
    t.open_time = static_cast<std::int64_t>(ParseNum(row[0], tx_path));
    t.close_time = static_cast<std::int64_t>(ParseNum(row[1], tx_path));
    t.direction = static_cast<int>(ParseNum(row[2], tx_path));
    t.open_price = ParseNum(row[3], tx_path);
    t.close_price = ParseNum(row[4], tx_path);
    t.gross_pnl = ParseNum(row[5], tx_path);
    t.net_pnl = ParseNum(row[6], tx_path);
    r.transactions.push_back(t);
  }
  r.n_trades = r.transactions.size();
  if (r.equity_curve.empty()) Fail(ErrorCode::kParse, eq_path.string() + ": no rows");
  const auto pos_path = dir / "positions.csv";
  for (const auto& row : ReadCsvRows(pos_path)) {
    if (row.size() != 2) Fail(ErrorCode::kParse, pos_path.string() + ": expected 2 columns");
    r.positions.push_back(static_cast<int>(ParseNum(row[1], pos_path)));
  }
  if (r.positions.size() + 1 != r.equity_curve.size()) {
    Fail(ErrorCode::kParse, pos_path.string() + ": row count does not match equity.csv");
  }

  // The stored metrics must follow from the stored curve and transactions.
  const BacktestMetrics again = RecomputeMetrics(r.equity_curve, r.transactions, r.begin_price,
                                                 r.number_of_days, r.fee_per_operation);
  auto close = [](double a, double b) {
    return (std::isnan(a) && std::isnan(b)) ||
           std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b));
  };
  if (!close(again.profit_pct_pa, r.metrics.profit_pct_pa) ||
      !close(again.profit_pct_pa_commission, r.metrics.profit_pct_pa_commission) ||
      !close(again.sharpe, r.metrics.sharpe) ||
      !close(again.winning_fraction, r.metrics.winning_fraction) ||
      !close(again.avg_transaction, r.metrics.avg_transaction) ||
      again.no_transactions != r.metrics.no_transactions) {
    Fail(ErrorCode::kMismatch, dir.string() + ": stored metrics disagree with the ledger files");
  }
  return r;
}

}  // namespace a3ct
