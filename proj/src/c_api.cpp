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

#include "a3ct/a3ct.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "a3ct/backtester.hpp"
#include "a3ct/checkpoint.hpp"
#include "a3ct/config.hpp"
#include "a3ct/error.hpp"
#include "a3ct/market_data.hpp"
#include "a3ct/pipeline.hpp"

struct a3ct_config {
  a3ct::RunConfig value;
};
struct a3ct_series {
  a3ct::BarSeries value;
};
struct a3ct_checkpoint {
  a3ct::Checkpoint value;
};
struct a3ct_report {
  a3ct::BacktestReport value;
};

namespace {

thread_local std::string g_last_error;

void CopyOut(const std::string& s, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = s.size();
  if (!buf || cap == 0) return;
  const size_t n = std::min(cap - 1, s.size());
  std::memcpy(buf, s.data(), n);
  buf[n] = '\0';
}

template <typename Fn>
a3ct_status Guard(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return A3CT_OK;
  } catch (const a3ct::Error& e) {
    g_last_error = e.what();
    return static_cast<a3ct_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return A3CT_ERR_INTERNAL;
  } catch (const std::filesystem::filesystem_error& e) {
    g_last_error = e.what();
    return A3CT_ERR_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return A3CT_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return A3CT_ERR_INTERNAL;
  }
}

template <typename T>
void NeedNonNull(const T* p, const char* what) {
  if (!p) a3ct::Fail(a3ct::ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

}  // namespace

extern "C" {

const char* a3ct_version(void) { return "1.0.0"; }

const char* a3ct_last_error(void) { return g_last_error.c_str(); }

const char* a3ct_status_name(a3ct_status status) {
  switch (status) {
    case A3CT_OK: return "ok";
    case A3CT_ERR_INVALID_ARGUMENT: return "invalid argument";
    case A3CT_ERR_SHAPE: return "shape mismatch";
    case A3CT_ERR_STATE: return "invalid state";
    case A3CT_ERR_NUMERIC: return "numeric error";
    case A3CT_ERR_PARSE: return "parse error";
    case A3CT_ERR_IO: return "i/o error";
    case A3CT_ERR_CHECKSUM: return "checksum error";
    case A3CT_ERR_VERSION: return "unsupported version";
    case A3CT_ERR_CONFIG: return "configuration error";
    case A3CT_ERR_MISMATCH: return "mismatch";
    case A3CT_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

a3ct_status a3ct_config_default(a3ct_config** out) {
  return Guard([&] {
    NeedNonNull(out, "out");
    *out = new a3ct_config{a3ct::ParseConfig("")};
  });
}

a3ct_status a3ct_config_parse(const char* text, a3ct_config** out) {
  return Guard([&] {
    NeedNonNull(text, "text");
    NeedNonNull(out, "out");
    *out = new a3ct_config{a3ct::ParseConfig(text)};
  });
}

a3ct_status a3ct_config_load(const char* path, a3ct_config** out) {
  return Guard([&] {
    NeedNonNull(path, "path");
    NeedNonNull(out, "out");
    *out = new a3ct_config{a3ct::LoadConfig(path)};
  });
}

void a3ct_config_free(a3ct_config* cfg) { delete cfg; }

a3ct_status a3ct_config_set_seed(a3ct_config* cfg, uint64_t seed) {
  return Guard([&] {
    NeedNonNull(cfg, "config");
    cfg->value.train.seed = seed;
  });
}

a3ct_status a3ct_config_set_workers(a3ct_config* cfg, int workers) {
  return Guard([&] {
    NeedNonNull(cfg, "config");
    if (workers < 1) a3ct::Fail(a3ct::ErrorCode::kConfig, "workers: violates n_workers >= 1");
    cfg->value.train.n_workers = workers;
  });
}

a3ct_status a3ct_config_set_deterministic(a3ct_config* cfg, int on) {
  return Guard([&] {
    NeedNonNull(cfg, "config");
    if (on) {
      cfg->value = a3ct::MakeDeterministic(cfg->value);
    } else {
      cfg->value.deterministic = false;
    }
  });
}

a3ct_status a3ct_config_canonical(const a3ct_config* cfg, char* buf, size_t cap,
                                  size_t* needed) {
  return Guard([&] {
    NeedNonNull(cfg, "config");
    CopyOut(cfg->value.Canonical(), buf, cap, needed);
  });
}

a3ct_status a3ct_run_synth(const a3ct_config* cfg, char* summary, size_t cap) {
  return Guard([&] {
    NeedNonNull(cfg, "config");
    const auto out = a3ct::RunSynthCommand(cfg->value);
    std::ostringstream os;
    for (const auto& f : out.files) os << "wrote " << f.string() << "\n";
    CopyOut(os.str(), summary, cap, nullptr);
  });
}

a3ct_status a3ct_run_train(const a3ct_config* cfg, char* summary, size_t cap) {
  return Guard([&] {
    NeedNonNull(cfg, "config");
    const auto out = a3ct::RunTrainCommand(cfg->value);
    std::ostringstream os;
    os << "trained " << out.epochs << " epochs\n"
       << "run directory: " << out.run_dir.string() << "\n"
       << "model: " << out.model.string() << "\n";
    CopyOut(os.str(), summary, cap, nullptr);
  });
}

a3ct_status a3ct_run_backtest(const a3ct_config* cfg, a3ct_report** out, char* summary,
                              size_t cap) {
  return Guard([&] {
    NeedNonNull(cfg, "config");
    auto result = a3ct::RunBacktestCommand(cfg->value);
    std::ostringstream os;
    os << a3ct::FormatReportTable(result.report) << "report directory: " << result.dir.string()
       << "\n";
    CopyOut(os.str(), summary, cap, nullptr);
    if (out) *out = new a3ct_report{std::move(result.report)};
  });
}

a3ct_status a3ct_run_gradcheck(const a3ct_config* cfg, a3ct_gradcheck_result* out,
                               char* summary, size_t cap) {
  return Guard([&] {
    NeedNonNull(cfg, "config");
    const auto r = a3ct::RunGradcheckCommand(cfg->value);
    if (out) *out = {r.result.max_relative_error, r.parameters, r.passed ? 1 : 0};
    std::ostringstream os;
    os.precision(3);
    os << "architecture " << cfg->value.arch.name << ": " << r.parameters << " parameters, "
       << "max relative error " << std::scientific << r.result.max_relative_error;
    if (!r.result.worst_param.empty()) {
      os << " at " << r.result.worst_param << "[" << r.result.worst_index << "]";
    }
    os << " (" << (r.passed ? "pass" : "FAIL") << ", tolerance " << a3ct::kGradcheckTolerance
       << ")\n";
    CopyOut(os.str(), summary, cap, nullptr);
  });
}

a3ct_status a3ct_run_report(const a3ct_config* cfg, a3ct_report** out) {
  return Guard([&] {
    NeedNonNull(cfg, "config");
    NeedNonNull(out, "out");
    *out = new a3ct_report{a3ct::RunReportCommand(cfg->value)};
  });
}

a3ct_status a3ct_series_load(const char* path, a3ct_series** out) {
  return Guard([&] {
    NeedNonNull(path, "path");
    NeedNonNull(out, "out");
    *out = new a3ct_series{a3ct::LoadBarCsv(path)};
  });
}

a3ct_status a3ct_series_generate(const char* kind, size_t bars, uint64_t seed,
                                 const a3ct_config* cfg, a3ct_series** out) {
  return Guard([&] {
    NeedNonNull(kind, "kind");
    NeedNonNull(out, "out");
    a3ct::SyntheticParams params = cfg ? cfg->value.data.synth : a3ct::SyntheticParams{};
    params.bars = bars;
    *out = new a3ct_series{a3ct::GenerateSynthetic(a3ct::ParseSyntheticKind(kind), params, seed)};
  });
}

a3ct_status a3ct_series_save(const a3ct_series* s, const char* path) {
  return Guard([&] {
    NeedNonNull(s, "series");
    NeedNonNull(path, "path");
    a3ct::SaveBarCsv(path, s->value);
  });
}

a3ct_status a3ct_series_length(const a3ct_series* s, size_t* out) {
  return Guard([&] {
    NeedNonNull(s, "series");
    NeedNonNull(out, "out");
    *out = s->value.size();
  });
}

a3ct_status a3ct_series_close(const a3ct_series* s, size_t index, double* out) {
  return Guard([&] {
    NeedNonNull(s, "series");
    NeedNonNull(out, "out");
    if (index >= s->value.size()) {
      a3ct::Fail(a3ct::ErrorCode::kInvalidArgument, "bar index out of range");
    }
    *out = s->value.bars[index].close;
  });
}

void a3ct_series_free(a3ct_series* s) { delete s; }

a3ct_status a3ct_checkpoint_load(const char* stem, a3ct_checkpoint** out) {
  return Guard([&] {
    NeedNonNull(stem, "stem");
    NeedNonNull(out, "out");
    *out = new a3ct_checkpoint{a3ct::LoadCheckpoint(a3ct::CheckpointStem(stem))};
  });
}

a3ct_status a3ct_checkpoint_save(const a3ct_checkpoint* ck, const char* stem) {
  return Guard([&] {
    NeedNonNull(ck, "checkpoint");
    NeedNonNull(stem, "stem");
    a3ct::SaveCheckpoint(stem, ck->value);
  });
}

a3ct_status a3ct_checkpoint_param_count(const a3ct_checkpoint* ck, size_t* out) {
  return Guard([&] {
    NeedNonNull(ck, "checkpoint");
    NeedNonNull(out, "out");
    *out = ck->value.params.size();
  });
}

void a3ct_checkpoint_free(a3ct_checkpoint* ck) { delete ck; }

a3ct_status a3ct_backtest(const a3ct_checkpoint* ck, const a3ct_series* s,
                          double fee_per_operation, a3ct_report** out) {
  return Guard([&] {
    NeedNonNull(ck, "checkpoint");
    NeedNonNull(s, "series");
    NeedNonNull(out, "out");
    a3ct::BacktestConfig cfg;
    cfg.fee_per_operation = fee_per_operation;
    *out = new a3ct_report{a3ct::RunBacktest(ck->value, s->value, cfg)};
  });
}

a3ct_status a3ct_report_metrics(const a3ct_report* r, a3ct_metrics* out) {
  return Guard([&] {
    NeedNonNull(r, "report");
    NeedNonNull(out, "out");
    const auto& v = r->value;
    *out = {v.metrics.profit_pct_pa,
            v.metrics.profit_pct_pa_commission,
            v.metrics.sharpe,
            v.metrics.winning_fraction,
            v.metrics.avg_transaction,
            v.metrics.no_transactions ? 1 : 0,
            v.n_trades,
            v.profit,
            v.commission,
            v.operations,
            v.begin_price,
            v.number_of_days};
  });
}

a3ct_status a3ct_report_table(const a3ct_report* r, char* buf, size_t cap, size_t* needed) {
  return Guard([&] {
    NeedNonNull(r, "report");
    CopyOut(a3ct::FormatReportTable(r->value), buf, cap, needed);
  });
}

void a3ct_report_free(a3ct_report* r) { delete r; }

}  // extern "C"
