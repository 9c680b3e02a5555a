/*
 * SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The rangesim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface of librangesim: OFDMA initial-ranging receiver and Monte Carlo
 * simulator. All objects are opaque handles created and destroyed through
 * this API. Every fallible call returns an rs_status; on failure a message
 * describing the error is available from rs_last_error() on the same thread
 * until the next failing call.
 */

#ifndef RANGESIM_H
#define RANGESIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RANGESIM_BUILDING)
#    define RS_API __declspec(dllexport)
#  else
#    define RS_API __declspec(dllimport)
#  endif
#else
#  define RS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rs_status {
  RS_OK = 0,
  RS_ERR_ARGUMENT = 1,    /* null handle or pointer, index out of range */
  RS_ERR_DIMENSION = 2,
  RS_ERR_VALIDATION = 3,
  RS_ERR_NUMERICAL = 4,
  RS_ERR_UNSUPPORTED = 5,
  RS_ERR_CONFIG = 6,
  RS_ERR_IO = 7,
  RS_ERR_INTERNAL = 8
} rs_status;

typedef enum rs_mode { RS_MODE_MODEL = 0, RS_MODE_WAVEFORM = 1 } rs_mode;

typedef struct rs_config rs_config;
typedef struct rs_results rs_results;
typedef struct rs_report rs_report;

typedef struct rs_config_summary {
  double beta;        /* Omega N_T (M-1) / N; valid configs keep it below 1/2 */
  double alpha;       /* theta_max (V-1) / (2N) */
  int k_max;          /* min(V, M) - 1 */
  double omega_bound; /* largest admissible Omega (exclusive) */
  double theta_bound; /* largest admissible theta_max (exclusive) */
} rs_config_summary;

typedef struct rs_metrics_row {
  double snr_db;
  double p_f;
  int has_rmse;       /* 0 when no user was detected at this point */
  double rmse_eps;
  double p_err_timing;
  int trials;
  int k;
  double omega;
  rs_mode mode;
  double p_f_per_code;
} rs_metrics_row;

typedef struct rs_code_estimate {
  int code;
  double epsilon_hat;
  double theta_hat;
} rs_code_estimate;

RS_API const char* rs_version(void);
RS_API const char* rs_last_error(void);
RS_API const char* rs_status_string(rs_status status);

/* Configuration. Keys and value syntax match the configuration file. */
RS_API rs_status rs_config_create(rs_config** out);
RS_API rs_status rs_config_load(const char* path, rs_config** out);
RS_API rs_status rs_config_parse(const char* text, rs_config** out);
RS_API void rs_config_destroy(rs_config* cfg);
RS_API rs_status rs_config_set(rs_config* cfg, const char* key, const char* value);
/* Checks every invariant; `out` may be null. */
RS_API rs_status rs_config_validate(const rs_config* cfg, rs_config_summary* out);
/* Derived quantities without validation; `out` must not be null. */
RS_API rs_status rs_config_summary_get(const rs_config* cfg, rs_config_summary* out);

/* Monte Carlo sweep over the configured SNR list. threads == 0 uses all cores. */
RS_API rs_status rs_run_sweep(const rs_config* cfg, unsigned threads, rs_results** out);
RS_API size_t rs_results_count(const rs_results* results);
RS_API rs_status rs_results_row(const rs_results* results, size_t index, rs_metrics_row* out);
/* Writes the CSV table; path "-" writes to standard output. */
RS_API rs_status rs_results_write_csv(const rs_results* results, const char* path);
RS_API void rs_results_destroy(rs_results* results);

RS_API rs_status rs_write_gnuplot(const char* csv_path, const char* script_path);

typedef void (*rs_oracle_callback)(const char* name, int passed, const char* detail, void* user);

/* Runs the cross-validation suite; `all_passed` receives 1 when every check passed. */
RS_API rs_status rs_oracle_run(uint64_t seed, rs_oracle_callback callback, void* user,
                               int* all_passed);

/*
 * Runs the receiver on one subchannel. `grid` holds M*Q*V complex DFT outputs
 * as interleaved (re, im) pairs in (m, q, v) row-major order, i.e.
 * 2*M*Q*V doubles. known_k < 0 lets the receiver estimate the code count.
 */
RS_API rs_status rs_range_grid(const rs_config* cfg, const double* grid, size_t grid_doubles,
                               int known_k, rs_report** out);
RS_API int rs_report_k_hat(const rs_report* report);
RS_API size_t rs_report_detected_count(const rs_report* report);
RS_API rs_status rs_report_detected(const rs_report* report, size_t index, rs_code_estimate* out);
RS_API void rs_report_destroy(rs_report* report);

#ifdef __cplusplus
}
#endif

#endif /* RANGESIM_H */
