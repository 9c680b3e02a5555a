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

#include "rangesim/simlab.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>
#include <numeric>
#include <ostream>
#include <thread>

#include "rangesim/error.hpp"

namespace rangesim::simlab {

using airmodel::Rng;
using airmodel::UserTruth;

Rng trial_rng(std::uint64_t master_seed, std::uint64_t trial_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(trial_index),
                    static_cast<std::uint32_t>(trial_index >> 32)};
  return Rng(seq);
}

double noise_variance(double snr_db) {
  if (std::isinf(snr_db) && snr_db > 0) return 0.0;
  return std::pow(10.0, -snr_db / 10.0);
}

std::vector<UserTruth> draw_users(const SimConfig& cfg, Rng& rng) {
  const int kmax = std::min(cfg.V, cfg.M) - 1;
  std::vector<int> codes(static_cast<std::size_t>(kmax));
  std::iota(codes.begin(), codes.end(), 0);
  std::shuffle(codes.begin(), codes.end(), rng);

  const airmodel::ChannelProfile profile = cfg.channel();
  std::uniform_int_distribution<int> theta(0, cfg.theta_max);
  std::uniform_real_distribution<double> eps(-cfg.Omega, cfg.Omega);

  std::vector<UserTruth> users(static_cast<std::size_t>(cfg.K));
  for (std::size_t k = 0; k < users.size(); ++k) {
    users[k].code = codes[k];
    users[k].theta = theta(rng);
    users[k].epsilon = cfg.Omega > 0.0 ? eps(rng) : 0.0;
    users[k].cir = airmodel::draw_channel(profile, rng);
  }
  return users;
}

bool timing_error_event(double theta_hat, double theta_true, int data_cp_len, int channel_len) {
  const double shifted = theta_hat - theta_true + (channel_len - data_cp_len) / 2.0;
  return shifted > 0.0 || shifted < channel_len - data_cp_len - 1.0;
}

TrialResult run_trial(const SimConfig& cfg, double snr_db, std::uint64_t trial_index,
                      const TrialOptions& options) {
  const airmodel::TileLayout layout = cfg.layout();
  Rng rng = trial_rng(cfg.master_seed, trial_index);

  TrialResult result;
  result.truth = draw_users(cfg, rng);

  const double nv = noise_variance(snr_db);
  const airmodel::TileObservations obs =
      cfg.mode == SynthesisMode::model
          ? airmodel::synthesize_model_mode(result.truth, layout, nv, rng)
          : airmodel::synthesize_waveform_mode(
                result.truth, layout, nv, rng,
                {.qpsk_data = cfg.data_subcarrier_load == DataLoad::qpsk});

  ranger::RangerConfig rc;
  rc.theta_max = cfg.theta_max;
  if (options.known_k) rc.known_k = cfg.K;
  try {
    result.report = ranger::range_subchannel(obs, rc);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::numerical) throw;
    result.failure = e.what();
    result.report = {};
  }

  const auto& detected = result.report.detected;
  std::vector<int> truth_codes;
  for (const UserTruth& u : result.truth) {
    truth_codes.push_back(u.code);
    UserOutcome out;
    auto it = result.report.per_code.find(u.code);
    if (it != result.report.per_code.end()) {
      out.detected = true;
      out.epsilon_error = it->second.epsilon_hat - u.epsilon;
      out.theta_error = it->second.theta_hat - u.theta;
      out.timing_error = timing_error_event(it->second.theta_hat, u.theta, cfg.N_GD, cfg.L);
    } else {
      ++result.missed;
    }
    result.users.push_back(out);
  }
  std::sort(truth_codes.begin(), truth_codes.end());
  for (int c : detected) {
    if (!std::binary_search(truth_codes.begin(), truth_codes.end(), c)) ++result.false_codes;
  }
  result.set_correct = detected == truth_codes;
  return result;
}

MetricsRow compute_metrics(std::span<const TrialResult> results, const SimConfig& cfg,
                           double snr_db) {
  if (results.empty()) throw Error(ErrorKind::validation, "compute_metrics: no trials");
  MetricsRow row;
  row.snr_db = snr_db;
  row.trials = static_cast<int>(results.size());
  row.k = cfg.K;
  row.omega = cfg.Omega;
  row.mode = cfg.mode;

  std::size_t wrong_sets = 0;
  std::size_t code_errors = 0;
  std::size_t user_count = 0;
  std::size_t timing_errors = 0;
  std::size_t eps_count = 0;
  double eps_sq = 0.0;
  for (const TrialResult& r : results) {
    if (!r.set_correct) ++wrong_sets;
    code_errors += static_cast<std::size_t>(r.missed + r.false_codes);
    for (const UserOutcome& u : r.users) {
      ++user_count;
      if (u.timing_error) ++timing_errors;
      if (u.epsilon_error) {
        eps_sq += *u.epsilon_error * *u.epsilon_error;
        ++eps_count;
      }
    }
  }
  const double n = static_cast<double>(results.size());
  row.p_f = static_cast<double>(wrong_sets) / n;
  row.p_err_timing =
      user_count == 0 ? 0.0 : static_cast<double>(timing_errors) / static_cast<double>(user_count);
  if (eps_count > 0) row.rmse_eps = std::sqrt(eps_sq / static_cast<double>(eps_count));
  const int kmax = std::min(cfg.V, cfg.M) - 1;
  row.p_f_per_code = static_cast<double>(code_errors) / (kmax * n);
  return row;
}

std::vector<MetricsRow> run_sweep(const SimConfig& cfg, unsigned threads) {
  validate(cfg);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t trials = static_cast<std::size_t>(cfg.trials);
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, trials));

  std::vector<MetricsRow> rows;
  std::vector<TrialResult> results(trials);
  for (double snr : cfg.snr_list_db) {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
      for (std::size_t i = next++; i < trials; i = next++) {
        try {
          results[i] = run_trial(cfg, snr, i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = trials;
        }
      }
    };
    if (threads <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
      for (std::thread& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    rows.push_back(compute_metrics(results, cfg, snr));
  }
  return rows;
}

double oracle_periodogram(std::span<const ranger::Snapshot> snapshots, double resolution) {
  if (snapshots.empty()) throw Error(ErrorKind::validation, "oracle_periodogram: no snapshots");
  if (!(resolution > 0.0)) throw Error(ErrorKind::validation, "oracle_periodogram: bad resolution");
  const std::size_t m = snapshots.front().size();
  const auto points = static_cast<std::size_t>(std::ceil(1.0 / resolution));
  std::vector<std::complex<double>> steer(m);
  double best_xi = -0.5;
  double best_power = -1.0;
  for (std::size_t g = 0; g < points; ++g) {
    const double xi = -0.5 + static_cast<double>(g) * resolution;
    if (xi >= 0.5) break;
    for (std::size_t i = 0; i < m; ++i) {
      steer[i] = std::polar(1.0, -2.0 * std::numbers::pi * xi * static_cast<double>(i));
    }
    double power = 0.0;
    for (const ranger::Snapshot& y : snapshots) {
      std::complex<double> acc = 0.0;
      for (std::size_t i = 0; i < m; ++i) acc += steer[i] * y[i];
      power += std::norm(acc);
    }
    if (power > best_power) {
      best_power = power;
      best_xi = xi;
    }
  }
  return best_xi;
}

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void emit_csv(std::span<const MetricsRow> rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const MetricsRow& r : rows) {
    out << format_double(r.snr_db) << ',' << format_double(r.p_f) << ','
        << (r.rmse_eps ? format_double(*r.rmse_eps) : std::string()) << ','
        << format_double(r.p_err_timing) << ',' << r.trials << ',' << r.k << ','
        << format_double(r.omega) << ',' << to_string(r.mode) << ','
        << format_double(r.p_f_per_code) << '\n';
  }
}

void write_csv(std::span<const MetricsRow> rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot open '" + path + "' for writing");
  emit_csv(rows, out);
  out.flush();
  if (!out) throw Error(ErrorKind::io, "failed writing '" + path + "'");
}

void write_gnuplot_script(const std::string& csv_path, const std::string& script_path) {
  std::ofstream out(script_path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot open '" + script_path + "' for writing");
  out << "# gnuplot " << script_path << "\n"
      << "set datafile separator ','\n"
      << "set terminal pngcairo size 1500,450\n"
      << "set output '" << csv_path << ".png'\n"
      << "set key autotitle columnhead\n"
      << "set xlabel 'SNR (dB)'\n"
      << "set logscale y\n"
      << "set grid\n"
      << "set multiplot layout 1,3\n"
      << "set title 'code detection failure'\n"
      << "plot '" << csv_path << "' using 1:2 with linespoints title 'P_f'\n"
      << "set title 'CFO RMSE (subcarrier spacings)'\n"
      << "plot '" << csv_path << "' using 1:3 with linespoints title 'RMSE'\n"
      << "set title 'timing error probability'\n"
      << "plot '" << csv_path << "' using 1:4 with linespoints title 'P(err)'\n"
      << "unset multiplot\n";
  out.flush();
  if (!out) throw Error(ErrorKind::io, "failed writing '" + script_path + "'");
}

}  // namespace rangesim::simlab
