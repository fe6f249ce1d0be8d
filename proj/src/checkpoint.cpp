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

#include "a3ct/checkpoint.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "a3ct/error.hpp"
#include "json.hpp"

namespace a3ct {

using nlohmann::json;

namespace {

template <typename T>
json OptionalJson(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> JsonOptional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

std::filesystem::path WithExt(std::filesystem::path stem, const char* ext) {
  const auto e = stem.extension();
  if (e == ".json" || e == ".bin") stem.replace_extension();
  stem += ext;
  return stem;
}

std::vector<unsigned char> EncodeLittleEndian(std::span<const double> values) {
  std::vector<unsigned char> out(values.size() * 8);
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(values[i]);
    for (int b = 0; b < 8; ++b) {
      out[i * 8 + static_cast<std::size_t>(b)] = static_cast<unsigned char>(bits >> (8 * b));
    }
  }
  return out;
}

std::vector<double> DecodeLittleEndian(std::span<const unsigned char> bytes) {
  std::vector<double> out(bytes.size() / 8);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) {
      bits |= static_cast<std::uint64_t>(bytes[i * 8 + static_cast<std::size_t>(b)]) << (8 * b);
    }
    out[i] = std::bit_cast<double>(bits);
  }
  return out;
}

std::vector<unsigned char> ReadBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::string Crc32Hex(const void* data, std::size_t size) {
  uLong crc = crc32(0L, Z_NULL, 0);
  const auto* p = static_cast<const Bytef*>(data);
  while (size > 0) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(size, 1u << 30));
    crc = crc32(crc, p, chunk);
    p += chunk;
    size -= chunk;
  }
  std::ostringstream os;
  os << std::hex << std::setw(8) << std::setfill('0') << (crc & 0xffffffffUL);
  return os.str();
}

std::string FileCrc32Hex(const std::filesystem::path& path) {
  const auto bytes = ReadBytes(path);
  return Crc32Hex(bytes.data(), bytes.size());
}

bool operator==(const ParamInfo& a, const ParamInfo& b) {
  return a.name == b.name && a.shape == b.shape && a.offset == b.offset && a.size == b.size;
}

bool operator==(const Checkpoint& a, const Checkpoint& b) {
  if (a.params.size() != b.params.size()) return false;
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    if (std::bit_cast<std::uint64_t>(a.params[i]) != std::bit_cast<std::uint64_t>(b.params[i])) {
      return false;
    }
  }
  return a.format_version == b.format_version && a.arch == b.arch &&
         a.features == b.features && a.registry == b.registry && a.meta == b.meta;
}

void Checkpoint::Validate() const {
  arch.Validate();
  if (features.feature_dim != arch.feature_dim || features.depth != arch.depth) {
    Fail(ErrorCode::kMismatch, "checkpoint feature settings disagree with the architecture");
  }
  if (!features.scales.empty() &&
      features.scales.size() != static_cast<std::size_t>(features.feature_dim)) {
    Fail(ErrorCode::kMismatch, "checkpoint has " + std::to_string(features.scales.size()) +
                                   " feature scales for feature_dim " +
                                   std::to_string(features.feature_dim));
  }
  const auto expected = ActorCriticNet::Build(arch, 0).Registry();
  if (!(expected == registry)) {
    Fail(ErrorCode::kMismatch, "checkpoint registry does not match architecture '" +
                                   arch.name + "'");
  }
  if (params.size() != ParamCount(arch)) {
    Fail(ErrorCode::kMismatch, "checkpoint has " + std::to_string(params.size()) +
                                   " values, architecture needs " +
                                   std::to_string(ParamCount(arch)));
  }
}

ActorCriticNet Checkpoint::BuildNet() const {
  Validate();
  ActorCriticNet net = ActorCriticNet::Build(arch, 0);
  net.SetFlatParams(params);
  return net;
}

Checkpoint Checkpoint::FromNet(const ActorCriticNet& net, FeatureSettings features,
                               TrainingMetadata meta) {
  Checkpoint c;
  c.arch = net.spec();
  c.features = std::move(features);
  c.registry = net.Registry();
  c.params = net.FlatParams();
  c.meta = std::move(meta);
  return c;
}

void SaveCheckpoint(const std::filesystem::path& stem, const Checkpoint& ckpt) {
  ckpt.Validate();
  const auto json_path = WithExt(stem, ".json");
  const auto bin_path = WithExt(stem, ".bin");
  if (json_path.has_parent_path()) std::filesystem::create_directories(json_path.parent_path());

  const auto bytes = EncodeLittleEndian(ckpt.params);
  {
    std::ofstream out(bin_path, std::ios::binary | std::ios::trunc);
    if (!out) Fail(ErrorCode::kIo, "cannot write " + bin_path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) Fail(ErrorCode::kIo, "write failed for " + bin_path.string());
  }

  json manifest;
  manifest["format_version"] = ckpt.format_version;
  const auto& a = ckpt.arch;
  manifest["arch"] = {{"name", a.name},
                      {"depth", a.depth},
                      {"dense", OptionalJson(a.dense)},
                      {"dropout", OptionalJson(a.dropout)},
                      {"lstm", OptionalJson(a.lstm)},
                      {"dense_v", OptionalJson(a.dense_v)},
                      {"dense_a", OptionalJson(a.dense_a)},
                      {"feature_dim", a.feature_dim}};
  manifest["features"] = {{"feature_dim", ckpt.features.feature_dim},
                          {"depth", ckpt.features.depth},
                          {"scales", ckpt.features.scales}};
  json reg = json::array();
  for (const auto& p : ckpt.registry) {
    reg.push_back({{"name", p.name}, {"shape", p.shape}, {"offset", p.offset}});
  }
  manifest["registry"] = reg;
  manifest["parameter_count"] = ckpt.params.size();
  manifest["meta"] = {{"seed", ckpt.meta.seed},
                      {"epochs", ckpt.meta.epochs},
                      {"updates", ckpt.meta.updates},
                      {"config_hash", ckpt.meta.config_hash}};
  manifest["binary"] = {{"file", bin_path.filename().string()},
                        {"encoding", "float64-le"},
                        {"bytes", bytes.size()},
                        {"crc32", Crc32Hex(bytes.data(), bytes.size())}};

  std::ofstream out(json_path, std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + json_path.string());
  out << manifest.dump(2) << "\n";
  if (!out) Fail(ErrorCode::kIo, "write failed for " + json_path.string());
}

Checkpoint LoadCheckpoint(const std::filesystem::path& stem) {
  const auto json_path = WithExt(stem, ".json");
  json manifest;
  {
    std::ifstream in(json_path);
    if (!in) Fail(ErrorCode::kIo, "cannot open " + json_path.string());
    try {
      in >> manifest;
    } catch (const json::exception& e) {
      Fail(ErrorCode::kParse, json_path.string() + ": " + e.what());
    }
  }

  Checkpoint c;
  try {
    c.format_version = manifest.at("format_version").get<int>();
    if (c.format_version != kCheckpointFormatVersion) {
      Fail(ErrorCode::kVersion, "unsupported version " + std::to_string(c.format_version) +
                                    " in " + json_path.string());
    }
    const json& a = manifest.at("arch");
    c.arch.name = a.at("name").get<std::string>();
    c.arch.depth = a.at("depth").get<int>();
    c.arch.dense = JsonOptional<int>(a, "dense");
    c.arch.dropout = JsonOptional<double>(a, "dropout");
    c.arch.lstm = JsonOptional<int>(a, "lstm");
    c.arch.dense_v = JsonOptional<int>(a, "dense_v");
    c.arch.dense_a = JsonOptional<int>(a, "dense_a");
    c.arch.feature_dim = a.at("feature_dim").get<int>();

    const json& f = manifest.at("features");
    c.features.feature_dim = f.at("feature_dim").get<int>();
    c.features.depth = f.at("depth").get<int>();
    c.features.scales = f.at("scales").get<std::vector<double>>();

    std::size_t offset = 0;
    for (const json& p : manifest.at("registry")) {
      ParamInfo info;
      info.name = p.at("name").get<std::string>();
      info.shape = p.at("shape").get<std::vector<std::size_t>>();
      info.offset = p.at("offset").get<std::size_t>();
      info.size = 1;
      for (auto d : info.shape) info.size *= d;
      if (info.offset != offset) {
        Fail(ErrorCode::kMismatch, "registry offset of '" + info.name + "' is inconsistent");
      }
      offset += info.size;
      c.registry.push_back(std::move(info));
    }
    if (manifest.at("parameter_count").get<std::size_t>() != offset) {
      Fail(ErrorCode::kMismatch, "parameter_count disagrees with the registry");
    }

    const json& m = manifest.at("meta");
    c.meta.seed = m.at("seed").get<std::uint64_t>();
    c.meta.epochs = m.at("epochs").get<int>();
    c.meta.updates = m.at("updates").get<std::uint64_t>();
    c.meta.config_hash = m.at("config_hash").get<std::string>();

    const json& b = manifest.at("binary");
    const auto bin_path = json_path.parent_path() / b.at("file").get<std::string>();
    const auto bytes = ReadBytes(bin_path);
    const auto expected_bytes = b.at("bytes").get<std::size_t>();
    const auto crc = Crc32Hex(bytes.data(), bytes.size());
    if (bytes.size() != expected_bytes || crc != b.at("crc32").get<std::string>()) {
      Fail(ErrorCode::kChecksum, "checksum mismatch for " + bin_path.string() + " (" +
                                     std::to_string(bytes.size()) + " bytes, crc32 " + crc + ")");
    }
    if (bytes.size() != offset * 8) {
      Fail(ErrorCode::kMismatch, "binary size does not match the registry");
    }
    c.params = DecodeLittleEndian(bytes);
  } catch (const json::exception& e) {
    Fail(ErrorCode::kParse, json_path.string() + ": malformed manifest: " + e.what());
  }
  c.Validate();
  return c;
}

}  // namespace a3ct
