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

#include "rangesim/ranger.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "rangesim/error.hpp"

namespace rangesim::ranger {

using airmodel::TileLayout;
using airmodel::TileObservations;
using cxmath::CxMatrix;
using cxmath::HermitianSpectrum;

namespace {

constexpr double kEigenFloor = 1e-18;
// Eigenvalues below this fraction of the largest one are roundoff, not noise.
constexpr double kRelativeFloor = 1e-10;

int reduce_mod(int x, int modulus) {
  const int r = x % modulus;
  return r < 0 ? r + modulus : r;
}

HermitianSpectrum fb_spectrum(std::span<const Snapshot> snapshots) {
  return cxmath::hermitian_evd(cxmath::forward_backward(sample_corr(snapshots)));
}

template <class F>
auto in_stage(const char* stage, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(stage) + ": " + e.what());
  }
}

}  // namespace

double wrap_unit(double x) {
  double w = x - std::floor(x + 0.5);
  if (w >= 0.5) w -= 1.0;
  return w;
}

std::vector<Snapshot> freq_snapshots(const TileObservations& obs) {
  const TileLayout& lay = obs.layout();
  const int M = lay.num_blocks();
  const int Q = lay.num_tiles();
  const int V = lay.tile_width();
  std::vector<Snapshot> out;
  out.reserve(static_cast<std::size_t>(Q * V));
  for (int q = 0; q < Q; ++q)
    for (int v = 0; v < V; ++v) {
      Snapshot y(static_cast<std::size_t>(M));
      for (int m = 0; m < M; ++m) y[static_cast<std::size_t>(m)] = obs.at(m, q, v);
      out.push_back(std::move(y));
    }
  return out;
}

std::vector<Snapshot> tile_snapshots(const TileObservations& obs) {
  const TileLayout& lay = obs.layout();
  const int M = lay.num_blocks();
  const int Q = lay.num_tiles();
  const int V = lay.tile_width();
  std::vector<Snapshot> out;
  out.reserve(static_cast<std::size_t>(M * Q));
  for (int m = 0; m < M; ++m)
    for (int q = 0; q < Q; ++q) {
      Snapshot x(static_cast<std::size_t>(V));
      for (int v = 0; v < V; ++v) x[static_cast<std::size_t>(v)] = obs.at(m, q, v);
      out.push_back(std::move(x));
    }
  return out;
}

CxMatrix sample_corr(std::span<const Snapshot> snapshots) {
  if (snapshots.empty()) throw Error(ErrorKind::validation, "sample_corr: no snapshots");
  const std::size_t n = snapshots.front().size();
  if (n == 0) throw Error(ErrorKind::validation, "sample_corr: empty snapshot");
  CxMatrix r(n, n);
  for (const Snapshot& y : snapshots) {
    if (y.size() != n) throw Error(ErrorKind::dimension, "sample_corr: ragged snapshots");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r(i, j) += y[i] * std::conj(y[j]);
  }
  r *= 1.0 / static_cast<double>(snapshots.size());
  return r;
}

double mdl_objective(std::span<const double> eigenvalues, std::size_t snapshot_count, int order) {
  const int n = static_cast<int>(eigenvalues.size());
  if (order < 0 || order >= n) {
    throw Error(ErrorKind::validation, "mdl_objective: order outside [0, n)");
  }
  const double s = static_cast<double>(snapshot_count);
  const double floor = std::max(kEigenFloor, kRelativeFloor * eigenvalues[0]);
  // ln(geometric mean / arithmetic mean) of the n - order smallest eigenvalues
  double log_sum = 0.0;
  double sum = 0.0;
  for (int i = order; i < n; ++i) {
    const double lam = std::max(eigenvalues[static_cast<std::size_t>(i)], floor);
    log_sum += std::log(lam);
    sum += lam;
  }
  const double tail = n - order;
  const double log_rho = std::min(0.0, log_sum / tail - std::log(sum / tail));
  return 0.5 * order * (2.0 * n - order) * std::log(s) - s * tail * log_rho;
}

int estimate_num_codes(std::span<const double> eigenvalues, std::size_t snapshot_count, int k_cap) {
  const int cap = std::min(k_cap, static_cast<int>(eigenvalues.size()) - 1);
  int best = 0;
  double best_val = mdl_objective(eigenvalues, snapshot_count, 0);
  for (int k = 1; k <= cap; ++k) {
    const double f = mdl_objective(eigenvalues, snapshot_count, k);
    if (f < best_val) {
      best_val = f;
      best = k;
    }
  }
  return best;
}

int order_cap(const TileLayout& layout) {
  // The row-split ESPRIT matrices have n - 1 rows and need rank K.
  const int n = std::min(layout.num_blocks(), layout.tile_width());
  return std::min(layout.max_codes(), n - 1);
}

std::vector<double> esprit_phases(const HermitianSpectrum& spectrum, int k) {
  const std::size_t n = spectrum.eigenvectors.rows();
  if (k < 1 || static_cast<std::size_t>(k) >= n) {
    throw Error(ErrorKind::validation, "esprit_phases: need 1 <= K < n");
  }
  const CxMatrix z = spectrum.eigenvectors.leading_cols(static_cast<std::size_t>(k));
  const CxMatrix rot = cxmath::ls_rotation(z.row_block(0, n - 1), z.row_block(1, n - 1));
  std::vector<cx> roots = cxmath::small_general_eigenvalues(rot);
  // Signal roots sit on the unit circle; list them before spurious ones.
  std::stable_sort(roots.begin(), roots.end(), [](const cx& a, const cx& b) {
    return std::abs(std::abs(a) - 1.0) < std::abs(std::abs(b) - 1.0);
  });
  std::vector<double> phases;
  phases.reserve(static_cast<std::size_t>(k));
  for (const cx& rho : roots) {
    phases.push_back(wrap_unit(std::arg(rho) / (2.0 * std::numbers::pi)));
  }
  return phases;
}

FreqEstimate map_cfo(double xi_hat, const TileLayout& layout) {
  const int mm1 = layout.num_blocks() - 1;
  FreqEstimate f;
  f.xi_hat = xi_hat;
  f.ell_raw = static_cast<int>(std::lround(mm1 * xi_hat));
  f.ell_F = reduce_mod(f.ell_raw, mm1);
  f.epsilon_hat = static_cast<double>(layout.fft_size()) / layout.block_len() *
                  (xi_hat - static_cast<double>(f.ell_raw) / mm1);
  return f;
}

void check_timing_range(const TileLayout& layout, int theta_max) {
  const int vm1 = layout.tile_width() - 1;
  if (theta_max < 0 || static_cast<long long>(theta_max) * vm1 >= layout.fft_size()) {
    throw Error(ErrorKind::config, "theta_max = " + std::to_string(theta_max) +
                                       " violates 0 <= theta_max < N/(V-1)");
  }
}

TimingEstimate map_timing(double eta_hat, const TileLayout& layout, int theta_max) {
  check_timing_range(layout, theta_max);
  const int vm1 = layout.tile_width() - 1;
  const double n = layout.fft_size();
  const double alpha = theta_max * vm1 / (2.0 * n);
  TimingEstimate t;
  t.eta_hat = eta_hat;
  t.ell_raw = static_cast<int>(std::lround(vm1 * eta_hat + alpha));
  t.ell_f = reduce_mod(t.ell_raw, vm1);
  t.theta_hat = n * (static_cast<double>(t.ell_raw) / vm1 - eta_hat);
  return t;
}

Detection detect_codes(std::span<const FreqEstimate> freq, std::span<const TimingEstimate> timing) {
  Detection d;
  std::map<int, double> eps_by_code;
  std::map<int, double> theta_by_code;
  for (const FreqEstimate& f : freq) {
    if (!eps_by_code.emplace(f.ell_F, f.epsilon_hat).second) ++d.freq_collisions;
  }
  for (const TimingEstimate& t : timing) {
    if (!theta_by_code.emplace(t.ell_f, t.theta_hat).second) ++d.timing_collisions;
  }
  for (const auto& [code, eps] : eps_by_code) {
    auto it = theta_by_code.find(code);
    if (it == theta_by_code.end()) continue;
    d.detected.push_back(code);
    d.per_code.emplace(code, CodeEstimate{eps, it->second});
  }
  return d;
}

RangingReport range_subchannel(const TileObservations& obs, const RangerConfig& cfg) {
  const TileLayout& layout = obs.layout();
  check_timing_range(layout, cfg.theta_max);
  const int cap = order_cap(layout);
  if (cfg.known_k && (*cfg.known_k < 0 || *cfg.known_k > cap)) {
    throw Error(ErrorKind::config, "known K = " + std::to_string(*cfg.known_k) +
                                       " outside [0, " + std::to_string(cap) + "]");
  }

  RangingReport report;
  const std::vector<Snapshot> ys = freq_snapshots(obs);
  const HermitianSpectrum freq_spec = in_stage("frequency stage", [&] { return fb_spectrum(ys); });
  report.freq_eigenvalues = freq_spec.eigenvalues;
  report.k_hat = cfg.known_k ? *cfg.known_k
                             : estimate_num_codes(freq_spec.eigenvalues, ys.size(), cap);
  if (report.k_hat == 0) return report;

  const std::vector<double> xi = in_stage("frequency stage", [&] {
    return esprit_phases(freq_spec, report.k_hat);
  });
  const std::vector<Snapshot> xs = tile_snapshots(obs);
  const std::vector<double> eta = in_stage("timing stage", [&] {
    return esprit_phases(fb_spectrum(xs), report.k_hat);
  });

  for (double x : xi) report.freq_estimates.push_back(map_cfo(x, layout));
  for (double e : eta) report.timing_estimates.push_back(map_timing(e, layout, cfg.theta_max));

  Detection d = detect_codes(report.freq_estimates, report.timing_estimates);
  report.detected = std::move(d.detected);
  report.per_code = std::move(d.per_code);
  report.freq_collisions = d.freq_collisions;
  report.timing_collisions = d.timing_collisions;
  return report;
}

}  // namespace rangesim::ranger
