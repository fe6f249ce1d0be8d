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

#ifndef A3CT_PIPELINE_HPP
#define A3CT_PIPELINE_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "a3ct/backtester.hpp"
#include "a3ct/config.hpp"
#include "a3ct/gradcheck.hpp"

namespace a3ct {

// Root for every output path: $A3CT_OUTPUT_ROOT, else the working directory.
std::filesystem::path OutputRoot();

// Forces one worker; seeds are already fixed by the config.
RunConfig MakeDeterministic(RunConfig cfg);

struct SynthOutcome {
  std::vector<std::filesystem::path> files;
};
SynthOutcome RunSynthCommand(const RunConfig& cfg);

struct TrainOutcome {
  std::filesystem::path run_dir;
  std::filesystem::path model;  // checkpoint stem
  std::size_t epochs = 0;
};
TrainOutcome RunTrainCommand(const RunConfig& cfg);

struct BacktestOutcome {
  std::filesystem::path dir;
  BacktestReport report;
};
BacktestOutcome RunBacktestCommand(const RunConfig& cfg);

struct GradcheckOutcome {
  GradCheckResult result;
  std::size_t parameters = 0;
  bool passed = false;
};
inline constexpr double kGradcheckTolerance = 1e-4;
GradcheckOutcome RunGradcheckCommand(const RunConfig& cfg, std::size_t length = 1);

BacktestReport RunReportCommand(const RunConfig& cfg);

// Accepts `stem`, `stem.json` or `stem.bin`.
std::filesystem::path CheckpointStem(const std::filesystem::path& p);

}  // namespace a3ct

#endif  // A3CT_PIPELINE_HPP
