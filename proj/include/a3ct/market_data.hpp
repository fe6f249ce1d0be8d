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

#ifndef A3CT_MARKET_DATA_HPP
#define A3CT_MARKET_DATA_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace a3ct {

// One aggregated minute. Timestamps are minutes since the Unix epoch (UTC).
struct Bar {
  std::int64_t timestamp = 0;
  double open = 0.0;
  double high = 0.0;
  double low = 0.0;
  double close = 0.0;
  double volume = 0.0;

  friend bool operator==(const Bar&, const Bar&) = default;
};

struct BarSeries {
  std::string instrument;
  std::string source;
  std::vector<Bar> bars;
  // Extra CSV columns, kept per bar in column order.
  std::vector<std::string> aux_names;
  std::vector<std::vector<double>> aux;

  std::size_t size() const { return bars.size(); }
  const Bar& operator[](std::size_t i) const { return bars[i]; }

  // Enforces OHLC ordering, positive prices, monotonic timestamps, >= 2 bars.
  void Validate() const;

  // Bars [begin, end).
  BarSeries Slice(std::size_t begin, std::size_t end) const;

  friend bool operator==(const BarSeries&, const BarSeries&) = default;
};

// Header row required; columns timestamp,open,high,low,close,volume in any
// order, plus any auxiliary numeric columns. Timestamps are epoch minutes or
// ISO-8601 (YYYY-MM-DD[T ]HH:MM[:SS][Z]).
BarSeries ParseBarCsv(std::string_view text, std::string source = "");
BarSeries LoadBarCsv(const std::filesystem::path& path);
std::string FormatBarCsv(const BarSeries& series);
void SaveBarCsv(const std::filesystem::path& path, const BarSeries& series);

// Parses an ISO-8601 UTC timestamp into epoch minutes. Throws kParse.
std::int64_t ParseIsoMinutes(std::string_view text);

enum class SyntheticKind { kSine, kRandomWalk, kTrend };

SyntheticKind ParseSyntheticKind(std::string_view name);
std::string_view SyntheticKindName(SyntheticKind kind);

struct SyntheticParams {
  std::size_t bars = 5000;
  double p0 = 100000.0;
  double amplitude = 0.03;   // sine: relative amplitude, must be < 1
  double period = 60.0;      // sine: minutes per cycle
  double sigma = 0.0005;     // random_walk / trend: per-minute log-return stdev
  double drift = 0.0;        // trend: per-minute log drift
  double envelope = 0.0005;  // relative high/low spread around the body
  double volume = 100.0;     // mean volume
  std::int64_t start_timestamp = 24038520;  // 2015-09-15 10:00 UTC
};

// Pure function of (kind, params, seed).
//   sine:        close(t) = p0 * (1 + amplitude * sin(2 pi t / period))
//   random_walk: close(t) = close(t-1) * exp(sigma * z)
//   trend:       close(t) = close(t-1) * exp(drift + sigma * z)
BarSeries GenerateSynthetic(SyntheticKind kind, const SyntheticParams& params,
                            std::uint64_t seed);

}  // namespace a3ct

#endif  // A3CT_MARKET_DATA_HPP
