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

#include "a3ct/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>

#include "json.hpp"

#include "a3ct/checkpoint.hpp"
#include "a3ct/error.hpp"
#include "a3ct/market_data.hpp"
#include "a3ct/trainer.hpp"

namespace a3ct {

namespace fs = std::filesystem;

namespace {

// Relative inputs are looked up in the working directory, then under the
// output root (where synth writes). Checkpoint stems exist as stem.json.
fs::path ResolveInput(const std::string& value, const char* key) {
  if (value.empty()) Fail(ErrorCode::kConfig, std::string("data.") + key + " is required");
  auto present = [](const fs::path& p) {
    return fs::exists(p) || fs::exists(fs::path(p.string() + ".json"));
  };
  const fs::path p(value);
  if (p.is_absolute() || present(p)) return p;
  const fs::path rooted = OutputRoot() / p;
  if (present(rooted)) return rooted;
  return p;
}

void WriteRunManifest(const fs::path& dir, const std::string& command, const RunConfig& cfg) {
  std::map<std::string, std::string> artifacts;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string rel = fs::relative(entry.path(), dir).generic_string();
    if (rel == "run_manifest.json") continue;
    artifacts[rel] = FileCrc32Hex(entry.path());
  }
  nlohmann::ordered_json j;
  j["command"] = command;
  j["seed"] = cfg.train.seed;
  j["deterministic"] = cfg.deterministic;
  j["config_hash"] = cfg.Hash();
  j["config"] = cfg.Canonical();
  j["artifacts"] = artifacts;
  std::ofstream out(dir / "run_manifest.json");
  out << j.dump(2) << "\n";
  if (!out) Fail(ErrorCode::kIo, "cannot write " + (dir / "run_manifest.json").string());
}

}  // namespace

fs::path OutputRoot() {
  if (const char* root = std::getenv("A3CT_OUTPUT_ROOT"); root && *root) return fs::path(root);
  return fs::current_path();
}

RunConfig MakeDeterministic(RunConfig cfg) {
  cfg.deterministic = true;
  cfg.train.n_workers = 1;
  return cfg;
}

fs::path CheckpointStem(const fs::path& p) {
  if (p.extension() == ".json" || p.extension() == ".bin") {
    fs::path stem = p;
    return stem.replace_extension();
  }
  return p;
}

SynthOutcome RunSynthCommand(const RunConfig& cfg) {
  cfg.Validate();
  SyntheticParams params = cfg.data.synth;
  params.bars += cfg.data.synth_test_bars;
  const BarSeries full = GenerateSynthetic(cfg.data.synth_kind, params, cfg.data.synth_seed);

  SynthOutcome out;
  const fs::path root = OutputRoot();
  auto write = [&](const BarSeries& s, const std::string& name) {
    const fs::path path = root / name;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    SaveBarCsv(path, s);
    out.files.push_back(path);
  };
  if (cfg.data.synth_test_bars == 0) {
    write(full, cfg.data.synth_output);
  } else {
    write(full.Slice(0, cfg.data.synth.bars), cfg.data.synth_output);
    write(full.Slice(cfg.data.synth.bars, full.size()), cfg.data.synth_test_output);
  }
  return out;
}

TrainOutcome RunTrainCommand(const RunConfig& cfg_in) {
  const RunConfig cfg = cfg_in.deterministic ? MakeDeterministic(cfg_in) : cfg_in;
  cfg.Validate();
  const BarSeries series = LoadBarCsv(ResolveInput(cfg.data.train_csv, "train_csv"));

  TrainOutcome out;
  out.run_dir = OutputRoot() / cfg.data.output_dir /
                ("train_" + cfg.arch.name + "_seed" + std::to_string(cfg.train.seed));
  fs::create_directories(out.run_dir);
  const TrainResult result =
      Train(cfg.train, cfg.arch, cfg.env, series, TrainOutput{out.run_dir}, cfg.Hash());
  out.model = out.run_dir / "model";
  out.epochs = result.curve.size();
  WriteRunManifest(out.run_dir, "train", cfg);
  return out;
}

BacktestOutcome RunBacktestCommand(const RunConfig& cfg) {
  cfg.Validate();
  const fs::path stem = CheckpointStem(ResolveInput(cfg.data.checkpoint, "checkpoint"));
  const Checkpoint ckpt = LoadCheckpoint(stem);
  const BarSeries series = LoadBarCsv(ResolveInput(cfg.data.test_csv, "test_csv"));

  BacktestConfig bc;
  bc.fee_per_operation = cfg.env.fee_per_operation;
  bc.start_capital = cfg.env.start_capital;
  bc.days = cfg.data.days;
  bc.expected_feature_dim = cfg.arch.feature_dim;
  bc.expected_depth = cfg.arch.depth;

  BacktestOutcome out;
  out.report = RunBacktest(ckpt, series, bc);
  const std::string parent = stem.parent_path().filename().string();
  const std::string label =
      parent.empty() ? stem.filename().string() : parent + "." + stem.filename().string();
  out.report.name = label;
  out.dir = OutputRoot() / cfg.data.output_dir /
            ("backtest_" + label + "_" +
             std::to_string(series.bars.front().timestamp) + "-" +
             std::to_string(series.bars.back().timestamp));
  fs::create_directories(out.dir);
  WriteReport(out.dir, out.report);
  WriteRunManifest(out.dir, "backtest", cfg);
  return out;
}

GradcheckOutcome RunGradcheckCommand(const RunConfig& cfg, std::size_t length) {
  cfg.Validate();
  ActorCriticNet net = ActorCriticNet::Build(cfg.arch, cfg.train.seed);
  const Trajectory traj = RandomTrajectory(net, length, cfg.train.seed + 1);
  const LossSettings settings{cfg.train.alpha, cfg.train.entropy_coeff, cfg.train.gamma,
                              cfg.train.advantage};
  GradcheckOutcome out;
  out.result = CheckLossGradients(net, traj, settings);
  out.parameters = net.ParamCount();
  out.passed = out.result.max_relative_error < kGradcheckTolerance;
  return out;
}

BacktestReport RunReportCommand(const RunConfig& cfg) {
  const fs::path dir = ResolveInput(cfg.data.report_dir, "report_dir");
  BacktestReport report = LoadReport(dir);
  std::ofstream out(dir / "report.txt");
  out << FormatReportTable(report);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + (dir / "report.txt").string());
  return report;
}

}  // namespace a3ct
