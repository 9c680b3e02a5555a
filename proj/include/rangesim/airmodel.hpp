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

// Uplink air interface for one ranging subchannel: tile geometry, ranging
// codes, multipath channels and the two observation synthesizers.
//
// Model mode evaluates the flat-tile signal model directly in the frequency
// domain. Waveform mode builds the cyclic-prefixed time-domain slot of every
// ranging user, applies delay, multipath and carrier offset, and runs the
// base-station DFT, so inter-carrier interference appears physically.

#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace rangesim::airmodel {

using cx = std::complex<double>;
using Rng = std::mt19937_64;

/// Ranging subcarrier geometry. Construction validates every invariant.
class TileLayout {
public:
  /// `tile_starts` must hold `num_tiles` disjoint starting bins.
  TileLayout(int fft_size, int num_blocks, int tile_width, std::vector<int> tile_starts,
             int cp_len, int data_cp_len);

  /// Q tiles spaced `spacing` bins apart starting at bin 0.
  static TileLayout uniform(int fft_size, int num_blocks, int num_tiles, int tile_width,
                            int spacing, int cp_len, int data_cp_len);

  int fft_size() const noexcept { return fft_size_; }      // N
  int num_blocks() const noexcept { return num_blocks_; }  // M
  int num_tiles() const noexcept { return static_cast<int>(tile_starts_.size()); }  // Q
  int tile_width() const noexcept { return tile_width_; }  // V
  int cp_len() const noexcept { return cp_len_; }          // N_G
  int data_cp_len() const noexcept { return data_cp_len_; }
  int block_len() const noexcept { return fft_size_ + cp_len_; }  // N_T
  int max_codes() const noexcept;                                  // min(V, M) - 1
  std::span<const int> tile_starts() const noexcept { return tile_starts_; }
  int tile_start(int q) const { return tile_starts_.at(static_cast<std::size_t>(q)); }
  bool is_ranging_bin(int n) const noexcept;

private:
  int fft_size_;
  int num_blocks_;
  int tile_width_;
  std::vector<int> tile_starts_;
  int cp_len_;
  int data_cp_len_;
};

/// Ground truth of one ranging station.
struct UserTruth {
  int code = 0;        // ranging code index in [0, K_max)
  int theta = 0;       // timing offset in samples
  double epsilon = 0;  // CFO normalised to the subcarrier spacing
  std::vector<cx> cir; // channel impulse response, length L
};

/// Received DFT outputs X_m(i_q + v) of one ranging slot, indexed (m, q, v).
class TileObservations {
public:
  explicit TileObservations(TileLayout layout);

  const TileLayout& layout() const noexcept { return layout_; }
  cx& at(int m, int q, int v) noexcept { return grid_[index(m, q, v)]; }
  const cx& at(int m, int q, int v) const noexcept { return grid_[index(m, q, v)]; }
  std::span<cx> grid() noexcept { return grid_; }
  std::span<const cx> grid() const noexcept { return grid_; }

private:
  std::size_t index(int m, int q, int v) const noexcept {
    return (static_cast<std::size_t>(m) * static_cast<std::size_t>(layout_.num_tiles()) +
            static_cast<std::size_t>(q)) * static_cast<std::size_t>(layout_.tile_width()) +
           static_cast<std::size_t>(v);
  }

  TileLayout layout_;
  std::vector<cx> grid_;
};

/// Exponential power delay profile with unit total power.
struct ChannelProfile {
  int taps = 12;
  double decay = 12.0;

  /// Per-tap variances sigma_h^2 exp(-l / decay), summing to one.
  std::vector<double> tap_variances() const;
};

struct EffectiveOffsets {
  double xi;   // effective CFO, in cycles per block
  double eta;  // effective timing, in cycles per subcarrier
};

/// Entry (v, m) of ranging code `code`: exp(j 2 pi code (v/(V-1) + m/(M-1))).
cx code_entry(int code, int v, int m, int tile_width, int num_blocks);

/// CFO attenuation sin(pi e) / (N sin(pi e / N)) exp(j pi e (N-1)/N); requires |e| < 1.
cx gamma_n(double epsilon, int fft_size);

EffectiveOffsets effective_params(const UserTruth& user, const TileLayout& layout);

/// Sum_l h(l) exp(-j 2 pi n l / N).
cx channel_freq_response(std::span<const cx> cir, int n, int fft_size);

/// Mean of the channel frequency response over the bins of tile q.
cx tile_average_response(std::span<const cx> cir, int q, const TileLayout& layout);

cx complex_gaussian(Rng& rng, double variance);

std::vector<cx> draw_channel(const ChannelProfile& profile, Rng& rng);

/// Throws validation on duplicate or out-of-range codes or too many users.
void validate_users(std::span<const UserTruth> users, const TileLayout& layout);

/// Flat-tile frequency-domain model with i.i.d. CN(0, noise_var) per entry.
TileObservations synthesize_model_mode(std::span<const UserTruth> users,
                                       const TileLayout& layout, double noise_var, Rng& rng);

struct WaveformOptions {
  /// Load every non-ranging bin with unit-power QPSK from synchronised data users.
  bool qpsk_data = false;
};

/// Time-domain slot synthesis followed by the receiver DFT. `noise_var` is
/// the per-bin noise variance at the DFT output, so SNR = 1 / noise_var.
TileObservations synthesize_waveform_mode(std::span<const UserTruth> users,
                                          const TileLayout& layout, double noise_var, Rng& rng,
                                          const WaveformOptions& options = {});

}  // namespace rangesim::airmodel
