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

#ifndef A3CT_A3CT_H
#define A3CT_A3CT_H

#include <stddef.h>
#include <stdint.h>

#if defined(A3CT_BUILDING_LIBRARY)
#define A3CT_API __attribute__((visibility("default")))
#else
#define A3CT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum a3ct_status {
  A3CT_OK = 0,
  A3CT_ERR_INVALID_ARGUMENT = 1,
  A3CT_ERR_SHAPE = 2,
  A3CT_ERR_STATE = 3,
  A3CT_ERR_NUMERIC = 4,
  A3CT_ERR_PARSE = 5,
  A3CT_ERR_IO = 6,
  A3CT_ERR_CHECKSUM = 7,
  A3CT_ERR_VERSION = 8,
  A3CT_ERR_CONFIG = 9,
  A3CT_ERR_MISMATCH = 10,
  A3CT_ERR_INTERNAL = 100
} a3ct_status;

typedef struct a3ct_config a3ct_config;
typedef struct a3ct_series a3ct_series;
typedef struct a3ct_checkpoint a3ct_checkpoint;
typedef struct a3ct_report a3ct_report;

typedef struct a3ct_metrics {
  double profit_pct_pa;
  double profit_pct_pa_commission;
  double sharpe; /* NaN when undefined */
  double winning_fraction;
  double avg_transaction;
  int no_transactions;
  size_t n_trades;
  double profit;
  double commission;
  long operations;
  double begin_price;
  double number_of_days;
} a3ct_metrics;

typedef struct a3ct_gradcheck_result {
  double max_relative_error;
  size_t parameters;
  int passed;
} a3ct_gradcheck_result;

/* Strings returned through (buf, cap) are NUL-terminated and truncated to
   fit; `needed` (optional) receives the full length excluding the NUL. */

A3CT_API const char* a3ct_version(void);
/* Message of the last failed call on this thread; "" if none. */
A3CT_API const char* a3ct_last_error(void);
A3CT_API const char* a3ct_status_name(a3ct_status status);

/* Configuration */
A3CT_API a3ct_status a3ct_config_default(a3ct_config** out);
A3CT_API a3ct_status a3ct_config_parse(const char* text, a3ct_config** out);
A3CT_API a3ct_status a3ct_config_load(const char* path, a3ct_config** out);
A3CT_API void a3ct_config_free(a3ct_config* cfg);
A3CT_API a3ct_status a3ct_config_set_seed(a3ct_config* cfg, uint64_t seed);
A3CT_API a3ct_status a3ct_config_set_workers(a3ct_config* cfg, int workers);
A3CT_API a3ct_status a3ct_config_set_deterministic(a3ct_config* cfg, int on);
A3CT_API a3ct_status a3ct_config_canonical(const a3ct_config* cfg, char* buf, size_t cap,
                                           size_t* needed);

/* Pipeline commands. `summary` receives a short human-readable result. */
A3CT_API a3ct_status a3ct_run_synth(const a3ct_config* cfg, char* summary, size_t cap);
A3CT_API a3ct_status a3ct_run_train(const a3ct_config* cfg, char* summary, size_t cap);
A3CT_API a3ct_status a3ct_run_backtest(const a3ct_config* cfg, a3ct_report** out,
                                       char* summary, size_t cap);
A3CT_API a3ct_status a3ct_run_gradcheck(const a3ct_config* cfg, a3ct_gradcheck_result* out,
                                        char* summary, size_t cap);
A3CT_API a3ct_status a3ct_run_report(const a3ct_config* cfg, a3ct_report** out);

/* Bar series */
A3CT_API a3ct_status a3ct_series_load(const char* path, a3ct_series** out);
/* kind: "sine", "random_walk" or "trend"; other parameters take defaults
   from `cfg` (may be NULL). */
A3CT_API a3ct_status a3ct_series_generate(const char* kind, size_t bars, uint64_t seed,
                                          const a3ct_config* cfg, a3ct_series** out);
A3CT_API a3ct_status a3ct_series_save(const a3ct_series* s, const char* path);
A3CT_API a3ct_status a3ct_series_length(const a3ct_series* s, size_t* out);
A3CT_API a3ct_status a3ct_series_close(const a3ct_series* s, size_t index, double* out);
A3CT_API void a3ct_series_free(a3ct_series* s);

/* Checkpoints (path is the stem; .json and .bin are appended) */
A3CT_API a3ct_status a3ct_checkpoint_load(const char* stem, a3ct_checkpoint** out);
A3CT_API a3ct_status a3ct_checkpoint_save(const a3ct_checkpoint* ck, const char* stem);
A3CT_API a3ct_status a3ct_checkpoint_param_count(const a3ct_checkpoint* ck, size_t* out);
A3CT_API void a3ct_checkpoint_free(a3ct_checkpoint* ck);

/* Backtests */
A3CT_API a3ct_status a3ct_backtest(const a3ct_checkpoint* ck, const a3ct_series* s,
                                   double fee_per_operation, a3ct_report** out);
A3CT_API a3ct_status a3ct_report_metrics(const a3ct_report* r, a3ct_metrics* out);
A3CT_API a3ct_status a3ct_report_table(const a3ct_report* r, char* buf, size_t cap,
                                       size_t* needed);
A3CT_API void a3ct_report_free(a3ct_report* r);

#ifdef __cplusplus
}
#endif

#endif /* A3CT_A3CT_H */
