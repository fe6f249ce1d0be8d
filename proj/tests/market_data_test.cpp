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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "a3ct/error.hpp"
#include "a3ct/market_data.hpp"

namespace a3ct {
namespace {

namespace fs = std::filesystem;

const fs::path kFixtures = A3CT_FIXTURE_DIR;

std::string ParseError(std::string_view text) {
  try {
    ParseBarCsv(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    return e.what();
  }
  ADD_FAILURE() << "parse succeeded";
  return {};
}

TEST(BarCsv, TwoValidRows) {
  const auto s = ParseBarCsv(
      "timestamp,open,high,low,close,volume\n"
      "100,10,11,9,10.5,7\n"
      "101,10.5,12,10,11.5,0\n");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0], (Bar{100, 10, 11, 9, 10.5, 7}));
  EXPECT_EQ(s[1], (Bar{101, 10.5, 12, 10, 11.5, 0}));
  EXPECT_TRUE(s.aux_names.empty());
}

TEST(BarCsv, OutOfOrderNamesTheLine) {
  const auto what = ParseError(
      "timestamp,open,high,low,close,volume\n"
      "5,10,11,9,10.5,1\n"
      "6,10.5,11,10,11,1\n"
      "4,11,12,10,11.5,1\n");
  EXPECT_NE(what.find("line 4"), std::string::npos) << what;
}

TEST(BarCsv, HighBelowLowFails) {
  const auto what = ParseError(
      "timestamp,open,high,low,close,volume\n"
      "1,10,11,9,10.5,1\n"
      "2,10.5,9,11,10,1\n");
  EXPECT_NE(what.find("line 3"), std::string::npos) << what;
}

TEST(BarCsv, MissingColumnIsNamed) {
  const auto what = ParseError("timestamp,open,high,low,close\n1,1,1,1,1\n2,1,1,1,1\n");
  EXPECT_NE(what.find("volume"), std::string::npos) << what;
}

TEST(BarCsv, IsoTimestampsAreEpochMinutes) {
  EXPECT_EQ(ParseIsoMinutes("1970-01-01T00:00:00Z"), 0);
  EXPECT_EQ(ParseIsoMinutes("1970-01-02 00:01"), 1441);
  EXPECT_EQ(ParseIsoMinutes("2015-09-15T10:00:00"), 24038520);
  EXPECT_THROW(ParseIsoMinutes("2015-13-01T00:00"), Error);
  EXPECT_THROW(ParseIsoMinutes("2015-09-15T10:00+03:00"), Error);
}

TEST(BarCsv, ExtraColumnsBecomeAuxiliary) {
  const auto s = LoadBarCsv(kFixtures / "good" / "reordered_with_aux.csv");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0], (Bar{1, 10, 11, 9.5, 10.5, 3}));
  EXPECT_EQ(s.aux_names, (std::vector<std::string>{"spread", "imbalance"}));
  EXPECT_EQ(s.aux[1], (std::vector<double>{0.5, 0.5}));
}

TEST(BarCsv, AcceptsEveryWellFormedFixture) {
  std::size_t n = 0;
  for (const auto& entry : fs::directory_iterator(kFixtures / "good")) {
    SCOPED_TRACE(entry.path().filename().string());
    BarSeries s;
    EXPECT_NO_THROW(s = LoadBarCsv(entry.path()));
    EXPECT_NO_THROW(s.Validate());
    ++n;
  }
  EXPECT_GE(n, 4u);
}

TEST(BarCsv, RejectsEveryMalformedFixture) {
  std::size_t n = 0;
  for (const auto& entry : fs::directory_iterator(kFixtures / "bad")) {
    SCOPED_TRACE(entry.path().filename().string());
    try {
      LoadBarCsv(entry.path());
      ADD_FAILURE() << "accepted";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kParse) << e.what();
      EXPECT_NE(std::string(e.what()).find(entry.path().string()), std::string::npos);
    }
    ++n;
  }
  EXPECT_GE(n, 14u);
}

TEST(BarCsv, MissingFileIsIoError) {
  try {
    LoadBarCsv(kFixtures / "no_such_file.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

TEST(BarCsv, FormatParseRoundTripIsExact) {
  SyntheticParams p;
  p.bars = 500;
  auto s = GenerateSynthetic(SyntheticKind::kRandomWalk, p, 11);
  s.aux_names = {"x"};
  for (std::size_t i = 0; i < s.size(); ++i) s.aux.push_back({std::sqrt(static_cast<double>(i))});
  const auto back = ParseBarCsv(FormatBarCsv(s));
  EXPECT_EQ(back.bars, s.bars);
  EXPECT_EQ(back.aux, s.aux);
  EXPECT_EQ(back.aux_names, s.aux_names);
}

TEST(BarSeries, SliceAndValidate) {
  SyntheticParams p;
  p.bars = 10;
  const auto s = GenerateSynthetic(SyntheticKind::kSine, p, 0);
  const auto mid = s.Slice(3, 7);
  ASSERT_EQ(mid.size(), 4u);
  EXPECT_EQ(mid[0], s[3]);
  EXPECT_THROW(s.Slice(5, 11), Error);
  EXPECT_THROW(s.Slice(0, 1).Validate(), Error);
  auto broken = s;
  broken.bars[4].timestamp = broken.bars[3].timestamp;
  EXPECT_THROW(broken.Validate(), Error);
}

TEST(Synthetic, SineStartsAtP0AndPeaksAtQuarterPeriod) {
  SyntheticParams p;
  p.bars = 100;
  p.p0 = 1000.0;
  p.amplitude = 0.1;
  p.period = 60.0;
  const auto s = GenerateSynthetic(SyntheticKind::kSine, p, 0);
  EXPECT_EQ(s[0].close, 1000.0);
  EXPECT_NEAR(s[15].close, 1100.0, 1e-9);
  EXPECT_NEAR(s[45].close, 900.0, 1e-9);
  for (std::size_t t = 0; t < s.size(); ++t) {
    const double expect =
        1000.0 * (1.0 + 0.1 * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 60.0));
    EXPECT_NEAR(s[t].close, expect, 1e-9);
  }
  EXPECT_NO_THROW(s.Validate());
}

TEST(Synthetic, SeededDeterminism) {
  SyntheticParams p;
  p.bars = 300;
  for (auto kind : {SyntheticKind::kSine, SyntheticKind::kRandomWalk, SyntheticKind::kTrend}) {
    EXPECT_EQ(GenerateSynthetic(kind, p, 5), GenerateSynthetic(kind, p, 5));
  }
  const auto a = GenerateSynthetic(SyntheticKind::kRandomWalk, p, 5);
  const auto b = GenerateSynthetic(SyntheticKind::kRandomWalk, p, 6);
  EXPECT_NE(a.bars, b.bars);
}

TEST(Synthetic, OhlcConsistentAndTimestampsIncreasing) {
  SyntheticParams p;
  p.bars = 2000;
  p.sigma = 0.002;
  p.drift = 0.0005;
  for (auto kind : {SyntheticKind::kSine, SyntheticKind::kRandomWalk, SyntheticKind::kTrend}) {
    const auto s = GenerateSynthetic(kind, p, 3);
    EXPECT_NO_THROW(s.Validate());
    for (std::size_t t = 1; t < s.size(); ++t) {
      EXPECT_EQ(s[t].open, s[t - 1].close);
      EXPECT_EQ(s[t].timestamp, s[t - 1].timestamp + 1);
    }
  }
}

TEST(Synthetic, TrendDriftsUpward) {
  SyntheticParams p;
  p.bars = 5000;
  p.sigma = 0.0002;
  p.drift = 0.0002;
  const auto s = GenerateSynthetic(SyntheticKind::kTrend, p, 1);
  const double log_growth = std::log(s[s.size() - 1].close / s[0].close);
  EXPECT_NEAR(log_growth, 0.0002 * 4999, 6 * 0.0002 * std::sqrt(4999.0));
}

TEST(Synthetic, InvalidParams) {
  SyntheticParams p;
  p.amplitude = 1.0;
  EXPECT_THROW(GenerateSynthetic(SyntheticKind::kSine, p, 0), Error);
  p.amplitude = 0.1;
  p.p0 = 0.0;
  EXPECT_THROW(GenerateSynthetic(SyntheticKind::kRandomWalk, p, 0), Error);
  p.p0 = -1.0;
  EXPECT_THROW(GenerateSynthetic(SyntheticKind::kTrend, p, 0), Error);
}

TEST(Synthetic, KindNames) {
  for (auto kind : {SyntheticKind::kSine, SyntheticKind::kRandomWalk, SyntheticKind::kTrend}) {
    EXPECT_EQ(ParseSyntheticKind(SyntheticKindName(kind)), kind);
  }
  EXPECT_THROW(ParseSyntheticKind("square"), Error);
}

}  // namespace
}  // namespace a3ct
