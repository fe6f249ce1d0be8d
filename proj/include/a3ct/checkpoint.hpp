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

#ifndef A3CT_CHECKPOINT_HPP
#define A3CT_CHECKPOINT_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "a3ct/architecture.hpp"

namespace a3ct {

inline constexpr int kCheckpointFormatVersion = 1;

struct FeatureSettings {
  int feature_dim = 10;
  int depth = 1;
  std::vector<double> scales;  // frozen from the training series

  friend bool operator==(const FeatureSettings&, const FeatureSettings&) = default;
};

struct TrainingMetadata {
  std::uint64_t seed = 0;
  int epochs = 0;
  std::uint64_t updates = 0;
  std::string config_hash;

  friend bool operator==(const TrainingMetadata&, const TrainingMetadata&) = default;
};

struct Checkpoint {
  int format_version = kCheckpointFormatVersion;
  ArchitectureSpec arch;
  FeatureSettings features;
  std::vector<ParamInfo> registry;
  std::vector<double> params;
  TrainingMetadata meta;

  // Registry, parameter count and feature settings agree with `arch`.
  void Validate() const;
  ActorCriticNet BuildNet() const;

  static Checkpoint FromNet(const ActorCriticNet& net, FeatureSettings features,
                            TrainingMetadata meta);
};

bool operator==(const ParamInfo& a, const ParamInfo& b);
bool operator==(const Checkpoint& a, const Checkpoint& b);

// Writes `<stem>.json` (manifest) and `<stem>.bin` (little-endian float64
// parameters in registry order). `stem` may be given with either suffix.
void SaveCheckpoint(const std::filesystem::path& stem, const Checkpoint& ckpt);
Checkpoint LoadCheckpoint(const std::filesystem::path& stem);

// crc32 of a byte buffer as 8 lowercase hex digits.
std::string Crc32Hex(const void* data, std::size_t size);
std::string FileCrc32Hex(const std::filesystem::path& path);

}  // namespace a3ct

#endif  // A3CT_CHECKPOINT_HPP
