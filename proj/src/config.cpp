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

#include "a3ct/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <variant>

#include "a3ct/checkpoint.hpp"
#include "a3ct/error.hpp"

namespace a3ct {

namespace {

struct Value {
  std::variant<double, bool, std::string> v;
  std::string key;  // section.key, for messages
  int line = 0;
};

[[noreturn]] void KeyError(const Value& val, const std::string& what) {
  Fail(ErrorCode::kConfig, "line " + std::to_string(val.line) + ": " + val.key + ": " + what);
}

double Number(const Value& val) {
  if (const double* d = std::get_if<double>(&val.v)) return *d;
  KeyError(val, "expected a number");
}

long long Integer(const Value& val) {
  const double d = Number(val);
  if (std::floor(d) != d || std::abs(d) > 9.0e15) KeyError(val, "expected an integer");
  return static_cast<long long>(d);
}

std::string String(const Value& val) {
  if (const std::string* s = std::get_if<std::string>(&val.v)) return *s;
  KeyError(val, "expected a quoted string");
}

void Require(const Value& val, bool ok, const std::string& constraint) {
  if (!ok) KeyError(val, "violates " + constraint);
}

std::string Trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string StripComment(const std::string& line) {
  bool in_str = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_str = !in_str;
    if (line[i] == '#' && !in_str) return line.substr(0, i);
  }
  return line;
}

Value ParseValue(const std::string& raw, const std::string& key, int line) {
  Value val{0.0, key, line};
  if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
    val.v = raw.substr(1, raw.size() - 2);
  } else if (raw == "true" || raw == "false") {
    val.v = raw == "true";
  } else {
    double d = 0.0;
    const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), d);
    if (raw.empty() || ec != std::errc() || ptr != raw.data() + raw.size()) {
      KeyError(val, "cannot parse value '" + raw + "'");
    }
    val.v = d;
  }
  return val;
}

using Setter = std::function<void(RunConfig&, const Value&)>;

const std::map<std::string, Setter>& Setters() {
  static const std::map<std::string, Setter> table = {
      // [train]
      {"train.n_steps", [](RunConfig& c, const Value& v) {
         const auto n = Integer(v); Require(v, n >= 1, "n_steps >= 1");
         c.train.n_steps = static_cast<int>(n); }},
      {"train.n_workers", [](RunConfig& c, const Value& v) {
         const auto n = Integer(v); Require(v, n >= 1, "n_workers >= 1");
         c.train.n_workers = static_cast<int>(n); }},
      {"train.alpha", [](RunConfig& c, const Value& v) {
         const double x = Number(v); Require(v, x >= 0 && x <= 1, "alpha ∈ [0,1]");
         c.train.alpha = x; }},
      {"train.entropy_coeff", [](RunConfig& c, const Value& v) {
         const double x = Number(v); Require(v, x >= 0, "entropy_coeff >= 0");
         c.train.entropy_coeff = x; }},
      {"train.learning_rate", [](RunConfig& c, const Value& v) {
         const double x = Number(v); Require(v, x > 0, "learning_rate > 0");
         c.train.learning_rate = x; }},
      {"train.rmsprop_decay", [](RunConfig& c, const Value& v) {
         const double x = Number(v); Require(v, x >= 0 && x < 1, "rmsprop_decay ∈ [0,1)");
         c.train.rmsprop_decay = x; }},
      {"train.rmsprop_epsilon", [](RunConfig& c, const Value& v) {
         const double x = Number(v); Require(v, x > 0, "rmsprop_epsilon > 0");
         c.train.rmsprop_epsilon = x; }},
      {"train.epochs", [](RunConfig& c, const Value& v) {
         const auto n = Integer(v); Require(v, n >= 0, "epochs >= 0");
         c.train.epochs = static_cast<int>(n); }},
      {"train.grad_clip_norm", [](RunConfig& c, const Value& v) {
         const double x = Number(v); Require(v, x >= 0, "grad_clip_norm >= 0");
         c.train.grad_clip_norm = x; }},
      {"train.gamma", [](RunConfig& c, const Value& v) {
         const double x = Number(v); Require(v, x >= 0 && x <= 1, "gamma ∈ [0,1]");
         c.train.gamma = x; }},
      {"train.seed", [](RunConfig& c, const Value& v) {
         const auto n = Integer(v); Require(v, n >= 0, "seed >= 0");
         c.train.seed = static_cast<std::uint64_t>(n); }},
      {"train.advantage", [](RunConfig& c, const Value& v) {
         const auto s = String(v);
         Require(v, s == "one_step" || s == "multi_step", "advantage ∈ {one_step, multi_step}");
         c.train.advantage = ParseAdvantageMode(s); }},
      {"train.checkpoint_every", [](RunConfig& c, const Value& v) {
         const auto n = Integer(v); Require(v, n >= 1, "checkpoint_every >= 1");
         c.train.checkpoint_every = static_cast<int>(n); }},
      {"train.reward_scale", [](RunConfig& c, const Value& v) {
         const double x = Number(v); Require(v, x > 0, "reward_scale > 0");
         c.train.reward_scale = x; }},
      // [env]
      {"env.fee_per_operation", [](RunConfig& c, const Value& v) {
         const double x = Number(v); Require(v, x >= 0, "fee_per_operation >= 0");
         c.env.fee_per_operation = x; }},
      {"env.train_fee_multiplier", [](RunConfig& c, const Value& v) {
         const double x = Number(v); Require(v, x >= 1, "train_fee_multiplier >= 1");
         c.env.train_fee_multiplier = x; }},
      {"env.repetition_penalty", [](RunConfig& c, const Value& v) {
         const double x = Number(v); Require(v, x >= 0, "repetition_penalty >= 0");
         c.env.repetition_penalty = x; }},
      {"env.repetition_grace", [](RunConfig& c, const Value& v) {
         const auto n = Integer(v); Require(v, n >= 0, "repetition_grace >= 0");
         c.env.repetition_grace = static_cast<int>(n); }},
      {"env.episode_length", [](RunConfig& c, const Value& v) {
         const auto n = Integer(v); Require(v, n >= 1, "episode_length >= 1");
         c.env.episode_length = static_cast<int>(n); }},
      {"env.start_capital", [](RunConfig& c, const Value& v) {
         c.env.start_capital = Number(v); }},
      // [arch] is resolved after all keys are read; see ResolveArch.
      // [data]
      {"data.train_csv", [](RunConfig& c, const Value& v) { c.data.train_csv = String(v); }},
      {"data.test_csv", [](RunConfig& c, const Value& v) { c.data.test_csv = String(v); }},
      {"data.checkpoint", [](RunConfig& c, const Value& v) { c.data.checkpoint = String(v); }},
      {"data.report_dir", [](RunConfig& c, const Value& v) { c.data.report_dir = String(v); }},
      {"data.output_dir", [](RunConfig& c, const Value& v) { c.data.output_dir = String(v); }},
      {"data.days", [](RunConfig& c, const Value& v) {
         const double x = Number(v); Require(v, x > 0, "days > 0");
         c.data.days = x; }},
      {"data.synth_kind", [](RunConfig& c, const Value& v) {
         const auto s = String(v);
         Require(v, s == "sine" || s == "random_walk" || s == "trend",
                 "synth_kind ∈ {sine, random_walk, trend}");
         c.data.synth_kind = ParseSyntheticKind(s); }},
      {"data.synth_bars", [](RunConfig& c, const Value& v) {
         const auto n = Integer(v); Require(v, n >= 2, "synth_bars >= 2");
         c.data.synth.bars = static_cast<std::size_t>(n); }},
      {"data.synth_p0", [](RunConfig& c, const Value& v) {
         const double x = Number(v); Require(v, x > 0, "synth_p0 > 0");
         c.data.synth.p0 = x; }},
      {"data.synth_amplitude", [](RunConfig& c, const Value& v) {
         const double x = Number(v); Require(v, std::abs(x) < 1, "|synth_amplitude| < 1");
         c.data.synth.amplitude = x; }},
      {"data.synth_period", [](RunConfig& c, const Value& v) {
         const double x = Number(v); Require(v, x > 0, "synth_period > 0");
         c.data.synth.period = x; }},
      {"data.synth_sigma", [](RunConfig& c, const Value& v) {
         const double x = Number(v); Require(v, x >= 0, "synth_sigma >= 0");
         c.data.synth.sigma = x; }},
      {"data.synth_drift", [](RunConfig& c, const Value& v) { c.data.synth.drift = Number(v); }},
      {"data.synth_envelope", [](RunConfig& c, const Value& v) {
         const double x = Number(v); Require(v, x >= 0 && x < 1, "synth_envelope ∈ [0,1)");
         c.data.synth.envelope = x; }},
      {"data.synth_volume", [](RunConfig& c, const Value& v) {
         const double x = Number(v); Require(v, x >= 0, "synth_volume >= 0");
         c.data.synth.volume = x; }},
      {"data.synth_start", [](RunConfig& c, const Value& v) {
         c.data.synth.start_timestamp = static_cast<std::int64_t>(Integer(v)); }},
      {"data.synth_seed", [](RunConfig& c, const Value& v) {
         const auto n = Integer(v); Require(v, n >= 0, "synth_seed >= 0");
         c.data.synth_seed = static_cast<std::uint64_t>(n); }},
      {"data.synth_output", [](RunConfig& c, const Value& v) { c.data.synth_output = String(v); }},
      {"data.synth_test_bars", [](RunConfig& c, const Value& v) {
         const auto n = Integer(v); Require(v, n >= 0, "synth_test_bars >= 0");
         c.data.synth_test_bars = static_cast<std::size_t>(n); }},
      {"data.synth_test_output", [](RunConfig& c, const Value& v) {
         c.data.synth_test_output = String(v); }},
  };
  return table;
}

const std::set<std::string> kArchKeys = {"arch.name",    "arch.depth",   "arch.dense",
                                         "arch.dropout", "arch.lstm",    "arch.dense_v",
                                         "arch.dense_a", "arch.feature_dim"};

ArchitectureSpec ResolveArch(const std::map<std::string, Value>& arch) {
  int feature_dim = kBaseFeatureCount;
  if (auto it = arch.find("arch.feature_dim"); it != arch.end()) {
    const auto n = Integer(it->second);
    Require(it->second, n >= 1, "feature_dim >= 1");
    feature_dim = static_cast<int>(n);
  }
  std::string name = "5";
  const Value* name_val = nullptr;
  if (auto it = arch.find("arch.name"); it != arch.end()) {
    name = String(it->second);
    name_val = &it->second;
  }
  const bool has_structure = std::any_of(arch.begin(), arch.end(), [](const auto& kv) {
    return kv.first != "arch.name" && kv.first != "arch.feature_dim";
  });

  if (auto named = NamedArchitecture(name, feature_dim)) {
    if (has_structure) {
      const auto& first = *std::find_if(arch.begin(), arch.end(), [](const auto& kv) {
        return kv.first != "arch.name" && kv.first != "arch.feature_dim";
      });
      KeyError(first.second, "cannot override the layers of named architecture '" + name + "'");
    }
    return *named;
  }
  if (!arch.contains("arch.depth")) {
    if (name_val) KeyError(*name_val, "unknown architecture '" + name + "' and no explicit layers");
    Fail(ErrorCode::kConfig, "arch: no architecture resolved");
  }

  ArchitectureSpec s;
  s.name = name;
  s.feature_dim = feature_dim;
  auto positive = [&](const char* key, std::optional<int>& out) {
    if (auto it = arch.find(key); it != arch.end()) {
      const auto n = Integer(it->second);
      Require(it->second, n >= 1, std::string(key + 5) + " >= 1");
      out = static_cast<int>(n);
    }
  };
  std::optional<int> depth;
  positive("arch.depth", depth);
  s.depth = *depth;
  positive("arch.dense", s.dense);
  positive("arch.lstm", s.lstm);
  positive("arch.dense_v", s.dense_v);
  positive("arch.dense_a", s.dense_a);
  if (auto it = arch.find("arch.dropout"); it != arch.end()) {
    const double p = Number(it->second);
    Require(it->second, p >= 0 && p < 1, "dropout ∈ [0,1)");
    s.dropout = p;
  }
  return s;
}

std::string Quote(const std::string& s) { return "\"" + s + "\""; }

std::string Num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void RunConfig::Validate() const {
  try {
    train.Validate();
    env.Validate();
    arch.Validate();
  } catch (const Error& e) {
    Fail(ErrorCode::kConfig, e.what());
  }
}

RunConfig ParseConfig(std::string_view text) {
  static const std::set<std::string> kSections = {"train", "env", "arch", "data"};
  RunConfig cfg;
  std::map<std::string, Value> arch_values;
  std::set<std::string> seen;
  std::string section;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = Trim(StripComment(raw));
    if (line.empty()) continue;
    auto where = [line_no] { return "line " + std::to_string(line_no) + ": "; };
    if (line.front() == '[') {
      if (line.back() != ']') Fail(ErrorCode::kConfig, where() + "malformed section header");
      section = Trim(line.substr(1, line.size() - 2));
      if (!kSections.contains(section)) {
        Fail(ErrorCode::kConfig, where() + "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) Fail(ErrorCode::kConfig, where() + "expected key = value");
    if (section.empty()) Fail(ErrorCode::kConfig, where() + "key outside of a section");
    const std::string key = section + "." + Trim(line.substr(0, eq));
    if (!seen.insert(key).second) Fail(ErrorCode::kConfig, where() + key + ": duplicate key");
    const Value val = ParseValue(Trim(line.substr(eq + 1)), key, line_no);

    if (kArchKeys.contains(key)) {
      arch_values.emplace(key, val);
      continue;
    }
    const auto& setters = Setters();
    const auto it = setters.find(key);
    if (it == setters.end()) Fail(ErrorCode::kConfig, where() + "unknown key '" + key + "'");
    try {
      it->second(cfg, val);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kConfig) throw;
      KeyError(val, e.what());
    }
  }
  cfg.arch = ResolveArch(arch_values);
  cfg.env.feature_dim = cfg.arch.feature_dim;
  cfg.env.depth = cfg.arch.depth;
  cfg.Validate();
  return cfg;
}

RunConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return ParseConfig(ss.str());
  } catch (const Error& e) {
    Fail(e.code(), path.string() + ": " + e.what());
  }
}

std::string RunConfig::Canonical() const {
  std::ostringstream os;
  os << "[train]\n"
     << "n_steps = " << train.n_steps << "\n"
     << "n_workers = " << train.n_workers << "\n"
     << "alpha = " << Num(train.alpha) << "\n"
     << "entropy_coeff = " << Num(train.entropy_coeff) << "\n"
     << "learning_rate = " << Num(train.learning_rate) << "\n"
     << "rmsprop_decay = " << Num(train.rmsprop_decay) << "\n"
     << "rmsprop_epsilon = " << Num(train.rmsprop_epsilon) << "\n"
     << "epochs = " << train.epochs << "\n"
     << "grad_clip_norm = " << Num(train.grad_clip_norm) << "\n"
     << "gamma = " << Num(train.gamma) << "\n"
     << "seed = " << train.seed << "\n"
     << "advantage = " << Quote(std::string(AdvantageModeName(train.advantage))) << "\n"
     << "checkpoint_every = " << train.checkpoint_every << "\n"
     << "reward_scale = " << Num(train.reward_scale) << "\n\n"
     << "[env]\n"
     << "fee_per_operation = " << Num(env.fee_per_operation) << "\n"
     << "train_fee_multiplier = " << Num(env.train_fee_multiplier) << "\n"
     << "repetition_penalty = " << Num(env.repetition_penalty) << "\n"
     << "repetition_grace = " << env.repetition_grace << "\n"
     << "episode_length = " << env.episode_length << "\n"
     << "start_capital = " << Num(env.start_capital) << "\n\n"
     << "[arch]\n"
     << "name = " << Quote(arch.name) << "\n";
  if (!NamedArchitecture(arch.name, arch.feature_dim).has_value()) {
    os << "depth = " << arch.depth << "\n";
    if (arch.dense) os << "dense = " << *arch.dense << "\n";
    if (arch.dropout) os << "dropout = " << Num(*arch.dropout) << "\n";
    if (arch.lstm) os << "lstm = " << *arch.lstm << "\n";
    if (arch.dense_v) os << "dense_v = " << *arch.dense_v << "\n";
    if (arch.dense_a) os << "dense_a = " << *arch.dense_a << "\n";
  }
  os << "feature_dim = " << arch.feature_dim << "\n\n"
     << "[data]\n"
     << "train_csv = " << Quote(data.train_csv) << "\n"
     << "test_csv = " << Quote(data.test_csv) << "\n"
     << "checkpoint = " << Quote(data.checkpoint) << "\n"
     << "report_dir = " << Quote(data.report_dir) << "\n"
     << "output_dir = " << Quote(data.output_dir) << "\n";
  if (data.days) os << "days = " << Num(*data.days) << "\n";
  os << "synth_kind = " << Quote(std::string(SyntheticKindName(data.synth_kind))) << "\n"
     << "synth_bars = " << data.synth.bars << "\n"
     << "synth_p0 = " << Num(data.synth.p0) << "\n"
     << "synth_amplitude = " << Num(data.synth.amplitude) << "\n"
     << "synth_period = " << Num(data.synth.period) << "\n"
     << "synth_sigma = " << Num(data.synth.sigma) << "\n"
     << "synth_drift = " << Num(data.synth.drift) << "\n"
     << "synth_envelope = " << Num(data.synth.envelope) << "\n"
     << "synth_volume = " << Num(data.synth.volume) << "\n"
     << "synth_start = " << data.synth.start_timestamp << "\n"
     << "synth_seed = " << data.synth_seed << "\n"
     << "synth_output = " << Quote(data.synth_output) << "\n"
     << "synth_test_bars = " << data.synth_test_bars << "\n"
     << "synth_test_output = " << Quote(data.synth_test_output) << "\n";
  return os.str();
}

std::string RunConfig::Hash() const {
  const std::string c = Canonical();
  return Crc32Hex(c.data(), c.size());
}

}  // namespace a3ct
