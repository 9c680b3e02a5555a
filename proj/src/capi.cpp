// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The rangesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rangesim/rangesim.h"

#include <iostream>
#include <new>
#include <string>
#include <vector>

#include "rangesim/error.hpp"
#include "rangesim/ranger.hpp"
#include "rangesim/simlab.hpp"

struct rs_config {
  rangesim::simlab::SimConfig cfg;
};

struct rs_results {
  std::vector<rangesim::simlab::MetricsRow> rows;
};

struct rs_report {
  rangesim::ranger::RangingReport report;
};

namespace {

using rangesim::Error;
using rangesim::ErrorKind;

thread_local std::string last_error;

rs_status to_status(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::dimension: return RS_ERR_DIMENSION;
    case ErrorKind::validation: return RS_ERR_VALIDATION;
    case ErrorKind::numerical: return RS_ERR_NUMERICAL;
    case ErrorKind::unsupported: return RS_ERR_UNSUPPORTED;
    case ErrorKind::config: return RS_ERR_CONFIG;
    case ErrorKind::io: return RS_ERR_IO;
  }
  return RS_ERR_INTERNAL;
}

rs_status fail(rs_status status, std::string msg) {
  last_error = std::move(msg);
  return status;
}

template <class F>
rs_status guarded(F&& body) {
  try {
    body();
    return RS_OK;
  } catch (const Error& e) {
    return fail(to_status(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(RS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(RS_ERR_INTERNAL, "unknown error");
  }
}

rs_status null_arg(const char* what) {
  return fail(RS_ERR_ARGUMENT, std::string(what) + " must not be null");
}

rs_config_summary to_c(const rangesim::simlab::ConfigSummary& s) {
  return {s.beta, s.alpha, s.k_max, s.omega_bound, s.theta_bound};
}

}  // namespace

extern "C" {

const char* rs_version(void) { return "1.0.0"; }

const char* rs_last_error(void) { return last_error.c_str(); }

const char* rs_status_string(rs_status status) {
  switch (status) {
    case RS_OK: return "ok";
    case RS_ERR_ARGUMENT: return "invalid argument";
    case RS_ERR_DIMENSION: return "dimension error";
    case RS_ERR_VALIDATION: return "validation error";
    case RS_ERR_NUMERICAL: return "numerical error";
    case RS_ERR_UNSUPPORTED: return "unsupported";
    case RS_ERR_CONFIG: return "configuration error";
    case RS_ERR_IO: return "i/o error";
    case RS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

rs_status rs_config_create(rs_config** out) {
  if (out == nullptr) return null_arg("out");
  return guarded([&] { *out = new rs_config{}; });
}

rs_status rs_config_load(const char* path, rs_config** out) {
  if (path == nullptr) return null_arg("path");
  if (out == nullptr) return null_arg("out");
  return guarded([&] { *out = new rs_config{rangesim::simlab::load_config(path)}; });
}

rs_status rs_config_parse(const char* text, rs_config** out) {
  if (text == nullptr) return null_arg("text");
  if (out == nullptr) return null_arg("out");
  return guarded([&] { *out = new rs_config{rangesim::simlab::parse_config(text)}; });
}

void rs_config_destroy(rs_config* cfg) { delete cfg; }

rs_status rs_config_set(rs_config* cfg, const char* key, const char* value) {
  if (cfg == nullptr) return null_arg("cfg");
  if (key == nullptr || value == nullptr) return null_arg("key/value");
  return guarded([&] { rangesim::simlab::apply_setting(cfg->cfg, key, value); });
}

rs_status rs_config_validate(const rs_config* cfg, rs_config_summary* out) {
  if (cfg == nullptr) return null_arg("cfg");
  return guarded([&] {
    rangesim::simlab::validate(cfg->cfg);
    if (out != nullptr) *out = to_c(rangesim::simlab::summarize(cfg->cfg));
  });
}

rs_status rs_config_summary_get(const rs_config* cfg, rs_config_summary* out) {
  if (cfg == nullptr) return null_arg("cfg");
  if (out == nullptr) return null_arg("out");
  return guarded([&] { *out = to_c(rangesim::simlab::summarize(cfg->cfg)); });
}

rs_status rs_run_sweep(const rs_config* cfg, unsigned threads, rs_results** out) {
  if (cfg == nullptr) return null_arg("cfg");
  if (out == nullptr) return null_arg("out");
  return guarded([&] { *out = new rs_results{rangesim::simlab::run_sweep(cfg->cfg, threads)}; });
}

size_t rs_results_count(const rs_results* results) {
  return results == nullptr ? 0 : results->rows.size();
}

rs_status rs_results_row(const rs_results* results, size_t index, rs_metrics_row* out) {
  if (results == nullptr) return null_arg("results");
  if (out == nullptr) return null_arg("out");
  if (index >= results->rows.size()) {
    return fail(RS_ERR_ARGUMENT, "row index " + std::to_string(index) + " out of range");
  }
  const auto& r = results->rows[index];
  *out = {r.snr_db,
          r.p_f,
          r.rmse_eps.has_value() ? 1 : 0,
          r.rmse_eps.value_or(0.0),
          r.p_err_timing,
          r.trials,
          r.k,
          r.omega,
          r.mode == rangesim::simlab::SynthesisMode::model ? RS_MODE_MODEL : RS_MODE_WAVEFORM,
          r.p_f_per_code};
  return RS_OK;
}

rs_status rs_results_write_csv(const rs_results* results, const char* path) {
  if (results == nullptr) return null_arg("results");
  if (path == nullptr) return null_arg("path");
  return guarded([&] {
    if (std::string(path) == "-") {
      rangesim::simlab::emit_csv(results->rows, std::cout);
      std::cout.flush();
    } else {
      rangesim::simlab::write_csv(results->rows, path);
    }
  });
}

void rs_results_destroy(rs_results* results) { delete results; }

rs_status rs_write_gnuplot(const char* csv_path, const char* script_path) {
  if (csv_path == nullptr || script_path == nullptr) return null_arg("path");
  return guarded([&] { rangesim::simlab::write_gnuplot_script(csv_path, script_path); });
}

rs_status rs_oracle_run(uint64_t seed, rs_oracle_callback callback, void* user, int* all_passed) {
  return guarded([&] {
    const auto checks = rangesim::simlab::run_oracle_suite(
        seed, [&](const rangesim::simlab::OracleCheck& c) {
          if (callback != nullptr) callback(c.name.c_str(), c.passed ? 1 : 0, c.detail.c_str(), user);
        });
    bool ok = true;
    for (const auto& c : checks) ok = ok && c.passed;
    if (all_passed != nullptr) *all_passed = ok ? 1 : 0;
  });
}

rs_status rs_range_grid(const rs_config* cfg, const double* grid, size_t grid_doubles, int known_k,
                        rs_report** out) {
  if (cfg == nullptr) return null_arg("cfg");
  if (grid == nullptr) return null_arg("grid");
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    const rangesim::airmodel::TileLayout layout = cfg->cfg.layout();
    rangesim::airmodel::TileObservations obs(layout);
    auto cells = obs.grid();
    if (grid_doubles != 2 * cells.size()) {
      throw Error(ErrorKind::dimension, "grid holds " + std::to_string(grid_doubles) +
                                            " doubles, layout needs " +
                                            std::to_string(2 * cells.size()));
    }
    for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = {grid[2 * i], grid[2 * i + 1]};
    rangesim::ranger::RangerConfig rc;
    rc.theta_max = cfg->cfg.theta_max;
    if (known_k >= 0) rc.known_k = known_k;
    *out = new rs_report{rangesim::ranger::range_subchannel(obs, rc)};
  });
}

int rs_report_k_hat(const rs_report* report) { return report == nullptr ? 0 : report->report.k_hat; }

size_t rs_report_detected_count(const rs_report* report) {
  return report == nullptr ? 0 : report->report.detected.size();
}

rs_status rs_report_detected(const rs_report* report, size_t index, rs_code_estimate* out) {
  if (report == nullptr) return null_arg("report");
  if (out == nullptr) return null_arg("out");
  const auto& det = report->report.detected;
  if (index >= det.size()) {
    return fail(RS_ERR_ARGUMENT, "detected index " + std::to_string(index) + " out of range");
  }
  const int code = det[index];
  const auto& est = report->report.per_code.at(code);
  *out = {code, est.epsilon_hat, est.theta_hat};
  return RS_OK;
}

void rs_report_destroy(rs_report* report) { delete report; }

}  // extern "C"
