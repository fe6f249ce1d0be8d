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

// Command-line front end over the C API.
//
// Exit codes: 0 ok, 1 usage, 2 config, 3 data (io/parse), 4 checkpoint
// (checksum/version), 5 mismatch, 6 gradient check failed, 7 numeric,
// 70 internal.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "a3ct/a3ct.h"

namespace {

enum Exit {
  kOk = 0,
  kUsage = 1,
  kConfigExit = 2,
  kData = 3,
  kCheckpoint = 4,
  kMismatch = 5,
  kGradFail = 6,
  kNumeric = 7,
  kInternal = 70,
};

int ExitFor(a3ct_status s) {
  switch (s) {
    case A3CT_OK: return kOk;
    case A3CT_ERR_CONFIG:
    case A3CT_ERR_INVALID_ARGUMENT: return kConfigExit;
    case A3CT_ERR_IO:
    case A3CT_ERR_PARSE: return kData;
    case A3CT_ERR_CHECKSUM:
    case A3CT_ERR_VERSION: return kCheckpoint;
    case A3CT_ERR_MISMATCH:
    case A3CT_ERR_SHAPE: return kMismatch;
    case A3CT_ERR_NUMERIC: return kNumeric;
    default: return kInternal;
  }
}

int Report(a3ct_status s) {
  if (s != A3CT_OK) {
    std::fprintf(stderr, "a3ct: %s: %s\n", a3ct_status_name(s), a3ct_last_error());
  }
  return ExitFor(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"A3C training and backtesting for single-instrument trading"};
  app.require_subcommand(1);

  std::string config_path;
  long long seed = -1;
  int workers = 0;
  bool deterministic = false;
  app.add_option("--config", config_path, "Configuration file ([train] [env] [arch] [data])");
  app.add_option("--seed", seed, "Override train.seed")->check(CLI::NonNegativeNumber);
  app.add_option("--workers", workers, "Override train.n_workers")->check(CLI::PositiveNumber);
  app.add_flag("--deterministic", deterministic, "Single worker, seeded RNG");

  auto* synth = app.add_subcommand("synth", "Write a synthetic bar series");
  auto* train = app.add_subcommand("train", "Train and write checkpoints and curve.csv");
  auto* backtest = app.add_subcommand("backtest", "Backtest a checkpoint on data.test_csv");
  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference check of the loss gradient");
  auto* report = app.add_subcommand("report", "Re-render metrics from data.report_dir");
  for (auto* sub : {synth, train, backtest, gradcheck, report}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  a3ct_config* cfg = nullptr;
  a3ct_status s = config_path.empty() ? a3ct_config_default(&cfg)
                                      : a3ct_config_load(config_path.c_str(), &cfg);
  if (s != A3CT_OK) return Report(s);
  if (seed >= 0) s = a3ct_config_set_seed(cfg, static_cast<uint64_t>(seed));
  if (s == A3CT_OK && workers > 0) s = a3ct_config_set_workers(cfg, workers);
  if (s == A3CT_OK && deterministic) s = a3ct_config_set_deterministic(cfg, 1);
  if (s != A3CT_OK) {
    a3ct_config_free(cfg);
    return Report(s);
  }

  std::vector<char> summary(1 << 16, '\0');
  int rc = kOk;
  if (synth->parsed()) {
    s = a3ct_run_synth(cfg, summary.data(), summary.size());
  } else if (train->parsed()) {
    s = a3ct_run_train(cfg, summary.data(), summary.size());
  } else if (backtest->parsed()) {
    a3ct_report* r = nullptr;
    s = a3ct_run_backtest(cfg, &r, summary.data(), summary.size());
    a3ct_report_free(r);
  } else if (gradcheck->parsed()) {
    a3ct_gradcheck_result g{};
    s = a3ct_run_gradcheck(cfg, &g, summary.data(), summary.size());
    if (s == A3CT_OK && !g.passed) rc = kGradFail;
  } else if (report->parsed()) {
    a3ct_report* r = nullptr;
    s = a3ct_run_report(cfg, &r);
    if (s == A3CT_OK) s = a3ct_report_table(r, summary.data(), summary.size(), nullptr);
    a3ct_report_free(r);
  }
  a3ct_config_free(cfg);
  if (s != A3CT_OK) return Report(s);
  std::fputs(summary.data(), stdout);
  return rc;
}
