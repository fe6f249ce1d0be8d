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

#ifndef A3CT_CONFIG_HPP
#define A3CT_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "a3ct/architecture.hpp"
#include "a3ct/market_data.hpp"
#include "a3ct/market_env.hpp"
#include "a3ct/trainer.hpp"

namespace a3ct {

struct DataConfig {
  std::string train_csv;
  std::string test_csv;
  std::string checkpoint;
  std::string report_dir;
  std::string output_dir = "runs";
  std::optional<double> days;

  SyntheticKind synth_kind = SyntheticKind::kSine;
  SyntheticParams synth;
  std::uint64_t synth_seed = 0;
  std::string synth_output = "synthetic.csv";
  std::size_t synth_test_bars = 0;  // > 0 splits off a held-out tail
  std::string synth_test_output = "synthetic_test.csv";
};

struct RunConfig {
  TrainConfig train;
  EnvConfig env;
  ArchitectureSpec arch;
  DataConfig data;
  bool deterministic = false;

  // Re-applies cross-section constraints after overrides.
  void Validate() const;
  // Resolved configuration in the same key = value format.
  std::string Canonical() const;
  // crc32 of Canonical().
  std::string Hash() const;
};

// Sections [train], [env], [arch], [data]; `key = value` lines; values are
// numbers, true/false, or double-quoted strings; `#` starts a comment.
// Unknown sections or keys are errors.
RunConfig ParseConfig(std::string_view text);
RunConfig LoadConfig(const std::filesystem::path& path);

}  // namespace a3ct

#endif  // A3CT_CONFIG_HPP
