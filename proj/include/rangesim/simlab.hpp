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

// Monte Carlo harness: configuration, seeded trials, metrics, CSV output and
// the brute-force cross-validation suite.

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rangesim/airmodel.hpp"
#include "rangesim/ranger.hpp"

namespace rangesim::simlab {

enum class SynthesisMode { model, waveform };
enum class DataLoad { off, qpsk };

const char* to_string(SynthesisMode mode) noexcept;
const char* to_string(DataLoad load) noexcept;

/// Every field maps one-to-one onto a config-file key of the same name.
/// Defaults reproduce the reference uplink: 1024 bins, 16 tiles of 4
/// subcarriers, 4 blocks, 12-tap channels, 256-sample ranging CP.
struct SimConfig {
  int N = 1024;
  int M = 4;
  int Q = 16;
  int V = 4;
  int N_G = 256;
  int N_GD = 32;
  int tile_spacing = 0;  // 0 selects N / Q
  int L = 12;
  double decay = 12.0;
  int K = 3;
  double Omega = 0.05;
  int theta_max = 204;
  std::vector<double> snr_list_db{0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0};
  int trials = 1000;
  SynthesisMode mode = SynthesisMode::waveform;
  std::uint64_t master_seed = 1;
  DataLoad data_subcarrier_load = DataLoad::off;

  airmodel::TileLayout layout() const;
  airmodel::ChannelProfile channel() const { return {L, decay}; }
};

/// Derived quantities reported by `rangesim validate`.
struct ConfigSummary {
  double beta;           // Omega N_T (M-1) / N, must stay below 1/2
  double alpha;          // theta_max (V-1) / (2N)
  int k_max;
  double omega_bound;    // N / (2 N_T (M-1)), frequency acquisition range
  double theta_bound;    // N / (V-1), timing acquisition range
};

/// Throws ErrorKind::config on the first violated invariant.
void validate(const SimConfig& cfg);
ConfigSummary summarize(const SimConfig& cfg);

/// Applies one `key = value` setting; unknown keys and malformed values throw config.
void apply_setting(SimConfig& cfg, std::string_view key, std::string_view value);
SimConfig parse_config(std::string_view text);
SimConfig load_config(const std::string& path);

/// Parses "0,10,20" style lists; "inf" denotes a noiseless point.
std::vector<double> parse_snr_list(std::string_view text);

/// Per-bin noise variance for an SNR in dB (0 for +inf).
double noise_variance(double snr_db);

struct UserOutcome {
  bool detected = false;
  bool timing_error = true;
  std::optional<double> epsilon_error;  // epsilon_hat - epsilon when detected
  std::optional<double> theta_error;    // theta_hat - theta when detected
};

struct TrialResult {
  std::vector<airmodel::UserTruth> truth;
  ranger::RangingReport report;
  std::vector<UserOutcome> users;  // parallel to truth
  bool set_correct = false;
  int missed = 0;
  int false_codes = 0;
  std::string failure;  // non-empty when the receiver raised a numerical error
};

struct TrialOptions {
  bool known_k = false;  // hand the true user count to the receiver
};

/// One seeded trial. The RNG stream depends on (master_seed, trial_index)
/// only, so every SNR point replays the same users and unit-power noise.
TrialResult run_trial(const SimConfig& cfg, double snr_db, std::uint64_t trial_index,
                      const TrialOptions& options = {});

/// Draws the ground truth of one trial (codes, offsets and channels).
std::vector<airmodel::UserTruth> draw_users(const SimConfig& cfg, airmodel::Rng& rng);

airmodel::Rng trial_rng(std::uint64_t master_seed, std::uint64_t trial_index);

/// True when the timing error would cause interblock interference in the
/// data phase, i.e. d + (L - N_GD)/2 > 0 or d + (L - N_GD)/2 < L - N_GD - 1,
/// where d = theta_hat - theta.
bool timing_error_event(double theta_hat, double theta_true, int data_cp_len, int channel_len);

struct MetricsRow {
  double snr_db = 0;
  double p_f = 0;                 // trials whose detected set differs from the truth
  std::optional<double> rmse_eps; // over correctly detected users; empty if none
  double p_err_timing = 0;        // per user, missed users count as errors
  int trials = 0;
  int k = 0;
  double omega = 0;
  SynthesisMode mode = SynthesisMode::waveform;
  double p_f_per_code = 0;        // (missed + false codes) / (K_max * trials)
};

MetricsRow compute_metrics(std::span<const TrialResult> results, const SimConfig& cfg,
                           double snr_db);

/// One row per SNR point, in `cfg.snr_list_db` order. `threads == 0` uses
/// the hardware concurrency. Results do not depend on the thread count.
std::vector<MetricsRow> run_sweep(const SimConfig& cfg, unsigned threads = 0);

/// Grid search for the frequency maximising sum_s |e_M(xi)^H y_s|^2 over
/// xi in [-1/2, 1/2) with the given step.
double oracle_periodogram(std::span<const ranger::Snapshot> snapshots, double resolution);

inline constexpr std::string_view kCsvHeader =
    "snr_db,p_f,rmse_eps,p_err_timing,trials,k,omega,mode,p_f_per_code";

/// Shortest round-trip decimal text for a double.
std::string format_double(double x);

void emit_csv(std::span<const MetricsRow> rows, std::ostream& out);
void write_csv(std::span<const MetricsRow> rows, const std::string& path);

/// Writes a gnuplot script plotting P_f, RMSE and P(timing error) from `csv_path`.
void write_gnuplot_script(const std::string& csv_path, const std::string& script_path);

struct OracleCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Noiseless exactness, wrap-consistency and periodogram cross-validation.
std::vector<OracleCheck> run_oracle_suite(std::uint64_t seed,
                                          const std::function<void(const OracleCheck&)>& on_check = {});

}  // namespace rangesim::simlab
