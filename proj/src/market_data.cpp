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

#include "a3ct/market_data.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "a3ct/error.hpp"

namespace a3ct {

namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitCommas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(Trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<double> ToDouble(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<std::int64_t> ToInt(std::string_view s) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

[[noreturn]] void LineError(std::size_t line, const std::string& what) {
  Fail(ErrorCode::kParse, "line " + std::to_string(line) + ": " + what);
}

std::string FormatDouble(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void CheckBar(const Bar& b, const std::string& where) {
  if (!(b.open > 0 && b.high > 0 && b.low > 0 && b.close > 0)) {
    Fail(ErrorCode::kParse, where + "nonpositive price");
  }
  if (!(b.volume >= 0)) Fail(ErrorCode::kParse, where + "negative volume");
  if (!(b.low <= std::min(b.open, b.close) && std::max(b.open, b.close) <= b.high)) {
    Fail(ErrorCode::kParse, where + "OHLC violates low <= open,close <= high");
  }
}

}  // namespace

std::int64_t ParseIsoMinutes(std::string_view text) {
  const std::string s(Trim(text));
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
  char sep = 0;
  int consumed = 0;
  const int n = std::sscanf(s.c_str(), "%4d-%2d-%2d%c%2d:%2d%n", &y, &mo, &d, &sep,
                            &h, &mi, &consumed);
  if (n < 6 || (sep != 'T' && sep != ' ')) {
    Fail(ErrorCode::kParse, "bad ISO-8601 timestamp '" + s + "'");
  }
  std::string_view rest = std::string_view(s).substr(static_cast<std::size_t>(consumed));
  if (!rest.empty() && rest.front() == ':') {
    int used = 0;
    if (std::sscanf(rest.data(), ":%2d%n", &sec, &used) != 1) {
      Fail(ErrorCode::kParse, "bad ISO-8601 seconds in '" + s + "'");
    }
    rest.remove_prefix(static_cast<std::size_t>(used));
  }
  if (rest == "Z") rest = {};
  if (!rest.empty()) Fail(ErrorCode::kParse, "unsupported ISO-8601 suffix in '" + s + "'");

  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || sec > 59) {
    Fail(ErrorCode::kParse, "invalid calendar time '" + s + "'");
  }
  const auto days = sys_days(ymd).time_since_epoch().count();
  return static_cast<std::int64_t>(days) * 1440 + h * 60 + mi;
}

void BarSeries::Validate() const {
  if (bars.size() < 2) Fail(ErrorCode::kParse, "bar series needs at least 2 bars");
  for (std::size_t i = 0; i < bars.size(); ++i) {
    CheckBar(bars[i], "bar " + std::to_string(i) + ": ");
    if (i > 0 && bars[i].timestamp <= bars[i - 1].timestamp) {
      Fail(ErrorCode::kParse,
           "bar " + std::to_string(i) + ": timestamps not strictly increasing");
    }
  }
  if (!aux.empty() && aux.size() != bars.size()) {
    Fail(ErrorCode::kParse, "auxiliary columns do not cover every bar");
  }
}

BarSeries BarSeries::Slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > bars.size()) {
    Fail(ErrorCode::kInvalidArgument, "slice [" + std::to_string(begin) + ", " +
                                          std::to_string(end) + ") out of range");
  }
  BarSeries out;
  out.instrument = instrument;
  out.source = source + "[" + std::to_string(begin) + ":" + std::to_string(end) + "]";
  out.bars.assign(bars.begin() + static_cast<std::ptrdiff_t>(begin),
                  bars.begin() + static_cast<std::ptrdiff_t>(end));
  out.aux_names = aux_names;
  if (!aux.empty()) {
    out.aux.assign(aux.begin() + static_cast<std::ptrdiff_t>(begin),
                   aux.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return out;
}

BarSeries ParseBarCsv(std::string_view text, std::string source) {
  static constexpr std::array<std::string_view, 6> kRequired = {
      "timestamp", "open", "high", "low", "close", "volume"};

  BarSeries series;
  series.source = std::move(source);
  std::array<std::size_t, 6> col{};
  std::vector<std::size_t> aux_cols;
  std::size_t n_cols = 0;
  bool have_header = false;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;
    if (Trim(line).empty()) continue;

    const auto fields = SplitCommas(line);
    if (!have_header) {
      col.fill(std::string_view::npos);
      for (std::size_t i = 0; i < fields.size(); ++i) {
        std::string name(fields[i]);
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        const auto it = std::find(kRequired.begin(), kRequired.end(), name);
        if (it != kRequired.end()) {
          col[static_cast<std::size_t>(it - kRequired.begin())] = i;
        } else {
          aux_cols.push_back(i);
          series.aux_names.emplace_back(fields[i]);
        }
      }
      for (std::size_t k = 0; k < kRequired.size(); ++k) {
        if (col[k] == std::string_view::npos) {
          LineError(line_no, "missing column '" + std::string(kRequired[k]) + "'");
        }
      }
      n_cols = fields.size();
      have_header = true;
      continue;
    }

    if (fields.size() != n_cols) {
      LineError(line_no, "expected " + std::to_string(n_cols) + " fields, got " +
                             std::to_string(fields.size()));
    }
    Bar bar;
    const std::string_view ts = fields[col[0]];
    if (auto v = ToInt(ts)) {
      bar.timestamp = *v;
    } else {
      try {
        bar.timestamp = ParseIsoMinutes(ts);
      } catch (const Error& e) {
        LineError(line_no, e.what());
      }
    }
    double* targets[5] = {&bar.open, &bar.high, &bar.low, &bar.close, &bar.volume};
    for (std::size_t k = 1; k < 6; ++k) {
      auto v = ToDouble(fields[col[k]]);
      if (!v || !std::isfinite(*v)) {
        LineError(line_no, "bad number in column '" + std::string(kRequired[k]) + "'");
      }
      *targets[k - 1] = *v;
    }
    try {
      CheckBar(bar, "");
    } catch (const Error& e) {
      LineError(line_no, e.what());
    }
    if (!series.bars.empty() && bar.timestamp <= series.bars.back().timestamp) {
      LineError(line_no, "timestamp " + std::to_string(bar.timestamp) +
                             " is not after the previous row");
    }
    if (!aux_cols.empty()) {
      std::vector<double> extra;
      for (std::size_t c : aux_cols) {
        auto v = ToDouble(fields[c]);
        if (!v) LineError(line_no, "bad number in auxiliary column " + std::to_string(c + 1));
        extra.push_back(*v);
      }
      series.aux.push_back(std::move(extra));
    }
    series.bars.push_back(bar);
  }
  if (!have_header) Fail(ErrorCode::kParse, "bar CSV has no header row");
  if (series.bars.size() < 2) Fail(ErrorCode::kParse, "bar CSV needs at least 2 rows");
  return series;
}

BarSeries LoadBarCsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return ParseBarCsv(ss.str(), path.string());
  } catch (const Error& e) {
    Fail(e.code(), path.string() + ": " + e.what());
  }
}

std::string FormatBarCsv(const BarSeries& series) {
  std::string out = "timestamp,open,high,low,close,volume";
  for (const auto& n : series.aux_names) out += "," + n;
  out += "\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const Bar& b = series.bars[i];
    out += std::to_string(b.timestamp) + "," + FormatDouble(b.open) + "," +
           FormatDouble(b.high) + "," + FormatDouble(b.low) + "," +
           FormatDouble(b.close) + "," + FormatDouble(b.volume);
    if (!series.aux.empty()) {
      for (double v : series.aux[i]) out += "," + FormatDouble(v);
    }
    out += "\n";
  }
  return out;
}

void SaveBarCsv(const std::filesystem::path& path, const BarSeries& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path.string());
  out << FormatBarCsv(series);
  if (!out) Fail(ErrorCode::kIo, "write failed for " + path.string());
}

SyntheticKind ParseSyntheticKind(std::string_view name) {
  if (name == "sine") return SyntheticKind::kSine;
  if (name == "random_walk") return SyntheticKind::kRandomWalk;
  if (name == "trend") return SyntheticKind::kTrend;
  Fail(ErrorCode::kInvalidArgument,
       "unknown synthetic kind '" + std::string(name) + "' (sine, random_walk, trend)");
}

std::string_view SyntheticKindName(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::kSine: return "sine";
    case SyntheticKind::kRandomWalk: return "random_walk";
    case SyntheticKind::kTrend: return "trend";
  }
  return "unknown";
}

BarSeries GenerateSynthetic(SyntheticKind kind, const SyntheticParams& params,
                            std::uint64_t seed) {
  if (!(params.p0 > 0)) Fail(ErrorCode::kInvalidArgument, "synthetic p0 must be > 0");
  if (params.bars < 2) Fail(ErrorCode::kInvalidArgument, "synthetic series needs >= 2 bars");
  if (!(params.envelope >= 0 && params.envelope < 1)) {
    Fail(ErrorCode::kInvalidArgument, "synthetic envelope must be in [0, 1)");
  }
  if (!(params.volume >= 0)) Fail(ErrorCode::kInvalidArgument, "synthetic volume must be >= 0");
  if (kind == SyntheticKind::kSine) {
    if (!(std::abs(params.amplitude) < 1)) {
      Fail(ErrorCode::kInvalidArgument, "sine amplitude must satisfy |A| < 1");
    }
    if (!(params.period > 0)) Fail(ErrorCode::kInvalidArgument, "sine period must be > 0");
  } else if (!(params.sigma >= 0)) {
    Fail(ErrorCode::kInvalidArgument, "synthetic sigma must be >= 0");
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  BarSeries s;
  s.instrument = "SYNTH";
  s.source = "synthetic:" + std::string(SyntheticKindName(kind)) +
             ":seed=" + std::to_string(seed);
  s.bars.reserve(params.bars);

  double prev_close = params.p0;
  for (std::size_t t = 0; t < params.bars; ++t) {
    double close = params.p0;
    switch (kind) {
      case SyntheticKind::kSine:
        close = params.p0 * (1.0 + params.amplitude *
                                       std::sin(2.0 * std::numbers::pi *
                                                static_cast<double>(t) / params.period));
        break;
      case SyntheticKind::kRandomWalk:
        close = t == 0 ? params.p0 : prev_close * std::exp(params.sigma * normal(rng));
        break;
      case SyntheticKind::kTrend:
        close = t == 0 ? params.p0
                       : prev_close * std::exp(params.drift + params.sigma * normal(rng));
        break;
    }
    Bar b;
    b.timestamp = params.start_timestamp + static_cast<std::int64_t>(t);
    b.open = t == 0 ? close : prev_close;
    b.close = close;
    b.high = std::max(b.open, b.close) * (1.0 + params.envelope * unit(rng));
    b.low = std::min(b.open, b.close) * (1.0 - params.envelope * unit(rng));
    b.volume = params.volume * (0.5 + unit(rng));
    s.bars.push_back(b);
    prev_close = close;
  }
  return s;
}

}  // namespace a3ct
