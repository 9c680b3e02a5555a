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

#include "rangesim/airmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "rangesim/error.hpp"

namespace rangesim::airmodel {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

[[noreturn]] void bad_layout(const std::string& msg) {
  throw Error(ErrorKind::validation, "TileLayout: " + msg);
}

}  // namespace

TileLayout::TileLayout(int fft_size, int num_blocks, int tile_width, std::vector<int> tile_starts,
                       int cp_len, int data_cp_len)
    : fft_size_(fft_size),
      num_blocks_(num_blocks),
      tile_width_(tile_width),
      tile_starts_(std::move(tile_starts)),
      cp_len_(cp_len),
      data_cp_len_(data_cp_len) {
  if (fft_size_ < 2) bad_layout("N must be at least 2");
  if (num_blocks_ < 2) bad_layout("M must be at least 2");
  if (tile_width_ < 2) bad_layout("V must be at least 2");
  if (tile_starts_.empty()) bad_layout("at least one tile is required");
  if (cp_len_ < 0 || data_cp_len_ < 0) bad_layout("cyclic prefix lengths must be non-negative");
  if (max_codes() < 1) bad_layout("min(V, M) - 1 must be at least 1");

  std::vector<int> sorted = tile_starts_;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] < 0 || sorted[i] + tile_width_ > fft_size_) {
      bad_layout("tile starting at " + std::to_string(sorted[i]) + " exceeds the DFT size");
    }
    if (i > 0 && sorted[i] < sorted[i - 1] + tile_width_) {
      bad_layout("tiles starting at " + std::to_string(sorted[i - 1]) + " and " +
                 std::to_string(sorted[i]) + " overlap");
    }
  }
}

TileLayout TileLayout::uniform(int fft_size, int num_blocks, int num_tiles, int tile_width,
                               int spacing, int cp_len, int data_cp_len) {
  if (num_tiles < 1) bad_layout("Q must be at least 1");
  std::vector<int> starts(static_cast<std::size_t>(num_tiles));
  for (int q = 0; q < num_tiles; ++q) starts[static_cast<std::size_t>(q)] = q * spacing;
  return TileLayout(fft_size, num_blocks, tile_width, std::move(starts), cp_len, data_cp_len);
}

int TileLayout::max_codes() const noexcept { return std::min(tile_width_, num_blocks_) - 1; }

bool TileLayout::is_ranging_bin(int n) const noexcept {
  return std::any_of(tile_starts_.begin(), tile_starts_.end(),
                     [&](int s) { return n >= s && n < s + tile_width_; });
}

TileObservations::TileObservations(TileLayout layout)
    : layout_(std::move(layout)),
      grid_(static_cast<std::size_t>(layout_.num_blocks()) *
            static_cast<std::size_t>(layout_.num_tiles()) *
            static_cast<std::size_t>(layout_.tile_width())) {}

std::vector<double> ChannelProfile::tap_variances() const {
  if (taps < 1) throw Error(ErrorKind::validation, "ChannelProfile: at least one tap required");
  if (!(decay > 0.0)) throw Error(ErrorKind::validation, "ChannelProfile: decay must be positive");
  std::vector<double> var(static_cast<std::size_t>(taps));
  double total = 0.0;
  for (int l = 0; l < taps; ++l) {
    var[static_cast<std::size_t>(l)] = std::exp(-static_cast<double>(l) / decay);
    total += var[static_cast<std::size_t>(l)];
  }
  for (double& v : var) v /= total;
  return var;
}

cx code_entry(int code, int v, int m, int tile_width, int num_blocks) {
  if (tile_width < 2 || num_blocks < 2) {
    throw Error(ErrorKind::validation, "code_entry: V and M must be at least 2");
  }
  if (v < 0 || v >= tile_width || m < 0 || m >= num_blocks) {
    throw Error(ErrorKind::validation, "code_entry: (v, m) outside the code matrix");
  }
  const double cycles = static_cast<double>(code) *
                        (static_cast<double>(v) / (tile_width - 1) +
                         static_cast<double>(m) / (num_blocks - 1));
  return std::polar(1.0, kTwoPi * cycles);
}

cx gamma_n(double epsilon, int fft_size) {
  if (!(std::abs(epsilon) < 1.0)) {
    throw Error(ErrorKind::validation, "gamma_n: |epsilon| must be below 1");
  }
  if (epsilon == 0.0) return 1.0;
  const double n = static_cast<double>(fft_size);
  const double pi = std::numbers::pi;
  const double mag = std::sin(pi * epsilon) / (n * std::sin(pi * epsilon / n));
  return std::polar(mag, pi * epsilon * (n - 1.0) / n);
}

EffectiveOffsets effective_params(const UserTruth& user, const TileLayout& layout) {
  const double n = layout.fft_size();
  return {
      static_cast<double>(user.code) / (layout.num_blocks() - 1) +
          user.epsilon * layout.block_len() / n,
      static_cast<double>(user.code) / (layout.tile_width() - 1) - user.theta / n,
  };
}

cx channel_freq_response(std::span<const cx> cir, int n, int fft_size) {
  cx acc = 0.0;
  for (std::size_t l = 0; l < cir.size(); ++l) {
    // reduce n*l mod N before scaling so the phase stays exact for large indices
    const long long idx = (static_cast<long long>(n) * static_cast<long long>(l)) % fft_size;
    acc += cir[l] * std::polar(1.0, -kTwoPi * static_cast<double>(idx) / fft_size);
  }
  return acc;
}

cx tile_average_response(std::span<const cx> cir, int q, const TileLayout& layout) {
  const int start = layout.tile_start(q);
  cx acc = 0.0;
  for (int v = 0; v < layout.tile_width(); ++v) {
    acc += channel_freq_response(cir, start + v, layout.fft_size());
  }
  return acc / static_cast<double>(layout.tile_width());
}

cx complex_gaussian(Rng& rng, double variance) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double s = std::sqrt(0.5 * variance);
  const double re = gauss(rng);
  const double im = gauss(rng);
  return {s * re, s * im};
}

std::vector<cx> draw_channel(const ChannelProfile& profile, Rng& rng) {
  const std::vector<double> var = profile.tap_variances();
  std::vector<cx> h(var.size());
  for (std::size_t l = 0; l < var.size(); ++l) h[l] = complex_gaussian(rng, var[l]);
  return h;
}

void validate_users(std::span<const UserTruth> users, const TileLayout& layout) {
  const int kmax = layout.max_codes();
  if (static_cast<int>(users.size()) > kmax) {
    throw Error(ErrorKind::validation, "at most " + std::to_string(kmax) +
                                           " ranging users fit one subchannel");
  }
  std::vector<bool> used(static_cast<std::size_t>(kmax), false);
  for (const UserTruth& u : users) {
    if (u.code < 0 || u.code >= kmax) {
      throw Error(ErrorKind::validation, "code index " + std::to_string(u.code) +
                                             " outside [0, " + std::to_string(kmax) + ")");
    }
    if (used[static_cast<std::size_t>(u.code)]) {
      throw Error(ErrorKind::validation, "duplicate code index " + std::to_string(u.code));
    }
    used[static_cast<std::size_t>(u.code)] = true;
    if (u.cir.empty()) throw Error(ErrorKind::validation, "empty channel impulse response");
    if (u.theta < 0) throw Error(ErrorKind::validation, "negative timing offset");
  }
}

TileObservations synthesize_model_mode(std::span<const UserTruth> users,
                                       const TileLayout& layout, double noise_var, Rng& rng) {
  validate_users(users, layout);
  TileObservations obs(layout);
  const int M = layout.num_blocks();
  const int Q = layout.num_tiles();
  const int V = layout.tile_width();
  const double N = layout.fft_size();

  for (const UserTruth& u : users) {
    const EffectiveOffsets off = effective_params(u, layout);
    const cx gamma = gamma_n(u.epsilon, layout.fft_size());
    for (int q = 0; q < Q; ++q) {
      const cx s = gamma * tile_average_response(u.cir, q, layout) *
                   std::polar(1.0, -kTwoPi * layout.tile_start(q) * u.theta / N);
      for (int m = 0; m < M; ++m)
        for (int v = 0; v < V; ++v)
          obs.at(m, q, v) += s * std::polar(1.0, kTwoPi * (m * off.xi + v * off.eta));
    }
  }
  if (noise_var > 0.0) {
    for (cx& x : obs.grid()) x += complex_gaussian(rng, noise_var);
  }
  return obs;
}

TileObservations synthesize_waveform_mode(std::span<const UserTruth> users,
                                          const TileLayout& layout, double noise_var, Rng& rng,
                                          const WaveformOptions& options) {
  validate_users(users, layout);
  const int N = layout.fft_size();
  const int M = layout.num_blocks();
  const int Q = layout.num_tiles();
  const int V = layout.tile_width();
  const int NG = layout.cp_len();
  const int NT = layout.block_len();
  const std::size_t slot_len = static_cast<std::size_t>(M) * static_cast<std::size_t>(NT);

  for (const UserTruth& u : users) {
    if (u.theta + static_cast<int>(u.cir.size()) > NG) {
      throw Error(ErrorKind::validation, "timing offset plus channel length exceeds the CP");
    }
  }

  std::vector<cx> rx(slot_len);
  std::vector<cx> tx(slot_len);
  std::vector<cx> block(static_cast<std::size_t>(N));

  for (const UserTruth& u : users) {
    std::fill(tx.begin(), tx.end(), cx(0.0));
    for (int m = 0; m < M; ++m) {
      std::fill(block.begin(), block.end(), cx(0.0));
      for (int q = 0; q < Q; ++q)
        for (int v = 0; v < V; ++v)
          block[static_cast<std::size_t>(layout.tile_start(q) + v)] = code_entry(u.code, v, m, V, M);
      detail::dft_inverse(block);
      const std::size_t base = static_cast<std::size_t>(m) * static_cast<std::size_t>(NT);
      for (int n = 0; n < N; ++n)
        tx[base + static_cast<std::size_t>(NG + n)] = block[static_cast<std::size_t>(n)] / static_cast<double>(N);
      for (int g = 0; g < NG; ++g)
        tx[base + static_cast<std::size_t>(g)] = tx[base + static_cast<std::size_t>(N + g)];
    }

    // Delay, multipath, then a carrier rotation referenced to the first DFT window.
    const double w = kTwoPi * u.epsilon / N;
    for (std::size_t n = 0; n < slot_len; ++n) {
      cx acc = 0.0;
      for (std::size_t l = 0; l < u.cir.size(); ++l) {
        const long long src = static_cast<long long>(n) - u.theta - static_cast<long long>(l);
        if (src < 0) break;
        acc += u.cir[l] * tx[static_cast<std::size_t>(src)];
      }
      const double n_abs = static_cast<double>(static_cast<long long>(n) - NG);
      rx[n] += acc * std::polar(1.0, w * n_abs);
    }
  }

  TileObservations obs(layout);
  const double time_noise_var = noise_var / N;
  for (int m = 0; m < M; ++m) {
    const std::size_t start = static_cast<std::size_t>(m) * static_cast<std::size_t>(NT) +
                              static_cast<std::size_t>(NG);
    for (int n = 0; n < N; ++n) block[static_cast<std::size_t>(n)] = rx[start + static_cast<std::size_t>(n)];

    if (options.qpsk_data) {
      std::vector<cx> data(static_cast<std::size_t>(N));
      std::bernoulli_distribution bit(0.5);
      const double a = std::numbers::sqrt2 / 2.0;
      for (int n = 0; n < N; ++n) {
        if (layout.is_ranging_bin(n)) continue;
        const double re = bit(rng) ? a : -a;
        const double im = bit(rng) ? a : -a;
        data[static_cast<std::size_t>(n)] = {re, im};
      }
      detail::dft_inverse(data);
      for (int n = 0; n < N; ++n) block[static_cast<std::size_t>(n)] += data[static_cast<std::size_t>(n)] / static_cast<double>(N);
    }
    if (time_noise_var > 0.0) {
      for (cx& x : block) x += complex_gaussian(rng, time_noise_var);
    }

    detail::dft_forward(block);
    for (int q = 0; q < Q; ++q)
      for (int v = 0; v < V; ++v)
        obs.at(m, q, v) = block[static_cast<std::size_t>(layout.tile_start(q) + v)];
  }
  return obs;
}

}  // namespace rangesim::airmodel
