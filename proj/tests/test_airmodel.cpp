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

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rangesim/airmodel.hpp"
#include "rangesim/error.hpp"
#include "test_helpers.hpp"

using namespace rangesim::airmodel;
using rangesim::Error;
using rangesim::ErrorKind;
using testing::cx;

namespace {

constexpr double kPi = std::numbers::pi;

TileLayout reference_layout() { return TileLayout::uniform(1024, 4, 16, 4, 64, 256, 32); }

cx expj(double phase) { return std::exp(cx(0.0, phase)); }

double max_grid_diff(const TileObservations& a, const TileObservations& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.grid().size(); ++i)
    m = std::max(m, std::abs(a.grid()[i] - b.grid()[i]));
  return m;
}

}  // namespace

TEST_CASE("TileLayout validates geometry") {
  const TileLayout lay = reference_layout();
  CHECK(lay.block_len() == 1280);
  CHECK(lay.max_codes() == 3);
  CHECK(lay.tile_start(15) == 960);
  CHECK(lay.is_ranging_bin(963));
  CHECK_FALSE(lay.is_ranging_bin(964));

  CHECK_THROWS_AS(TileLayout(64, 4, 4, {0, 2}, 16, 8), Error);   // overlapping tiles
  CHECK_THROWS_AS(TileLayout(64, 4, 4, {61}, 16, 8), Error);     // past the last bin
  CHECK_THROWS_AS(TileLayout(64, 1, 4, {0}, 16, 8), Error);      // M = 1
  CHECK_THROWS_AS(TileLayout(64, 4, 1, {0}, 16, 8), Error);      // V = 1
  CHECK_NOTHROW(TileLayout(64, 4, 4, {8, 0}, 16, 8));            // order does not matter
}

TEST_CASE("code_entry") {
  CHECK(code_entry(0, 3, 2, 4, 4) == cx(1.0));
  CHECK(std::abs(code_entry(1, 0, 0, 4, 4) - 1.0) <= 1e-15);
  CHECK(std::abs(code_entry(2, 1, 2, 4, 4) - 1.0) <= 1e-12);
  CHECK(std::abs(code_entry(1, 1, 0, 4, 4) - expj(2 * kPi / 3)) <= 1e-12);
  CHECK(std::abs(std::abs(code_entry(2, 3, 1, 4, 4)) - 1.0) <= 1e-15);
  CHECK_THROWS_AS(code_entry(1, 0, 0, 1, 4), Error);
  CHECK_THROWS_AS(code_entry(1, 0, 0, 4, 1), Error);
}

TEST_CASE("gamma_n") {
  CHECK(gamma_n(0.0, 1024) == cx(1.0));

  const cx g = gamma_n(0.1, 1024);
  const double mag = std::sin(0.1 * kPi) / (1024 * std::sin(0.1 * kPi / 1024));
  CHECK(std::abs(g) == doctest::Approx(mag).epsilon(1e-14));
  CHECK(std::abs(g) == doctest::Approx(0.983632).epsilon(1e-6));
  CHECK(std::arg(g) == doctest::Approx(kPi * 0.1 * 1023 / 1024).epsilon(1e-14));
  CHECK(std::abs(g - testing::dirichlet_sum(0.1, 1024)) <= 1e-12);

  CHECK(std::abs(gamma_n(-0.07, 1024) - std::conj(gamma_n(0.07, 1024))) <= 1e-15);
  CHECK_THROWS_AS(gamma_n(1.0, 1024), Error);
}

TEST_CASE("gamma_n magnitude is even and decreasing on [0, 0.5]") {
  double prev = 1.0 + 1e-15;
  for (int i = 0; i <= 500; ++i) {
    const double e = 0.001 * i;
    const double m = std::abs(gamma_n(e, 1024));
    CHECK(m < prev);
    CHECK(std::abs(m - std::abs(gamma_n(-e, 1024))) <= 1e-15);
    prev = m;
  }
}

TEST_CASE("effective_params") {
  const TileLayout lay = reference_layout();
  const EffectiveOffsets zero = effective_params({0, 0, 0.0, {1.0}}, lay);
  CHECK(zero.xi == 0.0);
  CHECK(zero.eta == 0.0);

  const EffectiveOffsets a = effective_params({1, 0, 0.05, {1.0}}, lay);
  CHECK(a.xi == doctest::Approx(1.0 / 3 + 0.05 * 1280 / 1024).epsilon(1e-15));
  CHECK(a.xi == doctest::Approx(0.3958333333).epsilon(1e-9));

  const EffectiveOffsets b = effective_params({2, 204, 0.0, {1.0}}, lay);
  CHECK(b.eta == doctest::Approx(0.4674479167).epsilon(1e-9));
}

TEST_CASE("channel_freq_response and tile_average_response") {
  const int n = 1024;
  for (int k : {0, 1, 77, 1023}) {
    CHECK(std::abs(channel_freq_response(std::vector<cx>{1.0}, k, n) - 1.0) <= 1e-15);
    CHECK(std::abs(channel_freq_response(std::vector<cx>{0.0, 1.0}, k, n) - expj(-2 * kPi * k / n)) <= 1e-12);
  }

  std::mt19937_64 rng(7);
  std::vector<cx> h(12);
  for (cx& t : h) t = testing::random_cx(rng);
  for (int k = 0; k < n; k += 37) {
    CHECK(std::abs(channel_freq_response(h, k, n) - testing::dft_bin(h, k, n)) <= 1e-12);
  }

  const TileLayout two(1024, 4, 2, {0}, 256, 32);
  const cx expect = (1.0 + expj(-2 * kPi / 1024)) / 2.0;
  CHECK(std::abs(tile_average_response(std::vector<cx>{0.0, 1.0}, 0, two) - expect) <= 1e-15);

  const TileLayout lay = reference_layout();
  CHECK(std::abs(tile_average_response(std::vector<cx>{cx(0.3, 0.4)}, 5, lay) - cx(0.3, 0.4)) <= 1e-15);
  for (int q = 0; q < lay.num_tiles(); ++q) {
    double max_h = 0.0;
    for (int v = 0; v < 4; ++v) max_h = std::max(max_h, std::abs(channel_freq_response(h, lay.tile_start(q) + v, n)));
    CHECK(std::abs(tile_average_response(h, q, lay)) <= max_h + 1e-12);
  }
}

TEST_CASE("draw_channel power profile") {
  const auto one = ChannelProfile{1, 12.0}.tap_variances();
  REQUIRE(one.size() == 1);
  CHECK(one[0] == doctest::Approx(1.0));

  double geometric = 0.0;
  for (int l = 0; l < 12; ++l) geometric += std::exp(-l / 12.0);
  const auto var = ChannelProfile{}.tap_variances();
  CHECK(var[0] == doctest::Approx(1.0 / geometric).epsilon(1e-14));
  CHECK(var[0] == doctest::Approx(0.126488).epsilon(1e-5));

  Rng rng(99);
  double total = 0.0;
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) {
    for (const cx& t : draw_channel(ChannelProfile{}, rng)) total += std::norm(t);
  }
  CHECK(total / kDraws == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("model mode synthesis") {
  const TileLayout lay = reference_layout();
  Rng rng(1);

  const TileObservations empty = synthesize_model_mode({}, lay, 0.0, rng);
  for (const cx& x : empty.grid()) CHECK(x == cx(0.0));

  const std::vector<UserTruth> flat{{2, 0, 0.0, {1.0}}};
  const TileObservations obs = synthesize_model_mode(flat, lay, 0.0, rng);
  for (int m = 0; m < 4; ++m)
    for (int q = 0; q < 16; ++q)
      for (int v = 0; v < 4; ++v)
        CHECK(std::abs(obs.at(m, q, v) - code_entry(2, v, m, 4, 4)) <= 1e-12);
}

TEST_CASE("model mode matches a direct per-subcarrier evaluation") {
  const TileLayout lay = reference_layout();
  const int N = 1024;
  const int NT = 1280;
  Rng rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<cx> h(12);
    for (cx& t : h) t = testing::random_cx(rng) / std::sqrt(24.0);
    const UserTruth u{1 + trial % 2, 37 * trial + 3, 0.02 * trial - 0.04, h};
    const TileObservations obs = synthesize_model_mode(std::vector<UserTruth>{u}, lay, 0.0, rng);
    const double omega = 2 * kPi * u.epsilon / N;
    const double mag = u.epsilon == 0.0 ? 1.0 : std::sin(kPi * u.epsilon) / (N * std::sin(kPi * u.epsilon / N));
    const cx gamma = mag * expj(kPi * u.epsilon * (N - 1) / N);
    for (int q = 0; q < 16; ++q) {
      cx hbar = 0.0;
      for (int v = 0; v < 4; ++v) hbar += testing::dft_bin(h, lay.tile_start(q) + v, N);
      hbar /= 4.0;
      for (int m = 0; m < 4; ++m)
        for (int v = 0; v < 4; ++v) {
          const int n = lay.tile_start(q) + v;
          const cx code = expj(2 * kPi * u.code * (v / 3.0 + m / 3.0));
          const cx expect = code * expj(m * omega * NT) * gamma * hbar * expj(-2 * kPi * n * u.theta / N);
          CHECK(std::abs(obs.at(m, q, v) - expect) <= 1e-12);
        }
    }
  }
}

TEST_CASE("model mode rejects invalid user sets") {
  const TileLayout lay = reference_layout();
  Rng rng(3);
  const std::vector<UserTruth> dup{{1, 0, 0.0, {1.0}}, {1, 5, 0.0, {1.0}}};
  CHECK_THROWS_AS(synthesize_model_mode(dup, lay, 0.0, rng), Error);
  const std::vector<UserTruth> out_of_range{{3, 0, 0.0, {1.0}}};
  CHECK_THROWS_AS(synthesize_model_mode(out_of_range, lay, 0.0, rng), Error);
  const std::vector<UserTruth> too_many{{0, 0, 0.0, {1.0}}, {1, 0, 0.0, {1.0}}, {2, 0, 0.0, {1.0}}, {2, 0, 0.0, {1.0}}};
  CHECK_THROWS_AS(synthesize_model_mode(too_many, lay, 0.0, rng), Error);
}

TEST_CASE("model mode noise variance") {
  const TileLayout lay = reference_layout();
  Rng rng(4);
  double power = 0.0;
  std::size_t count = 0;
  for (int t = 0; t < 200; ++t) {
    const TileObservations obs = synthesize_model_mode({}, lay, 0.25, rng);
    for (const cx& x : obs.grid()) power += std::norm(x);
    count += obs.grid().size();
  }
  CHECK(power / static_cast<double>(count) == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("waveform mode loopback and delay phase ramp") {
  const TileLayout lay = reference_layout();
  Rng rng(5);

  const std::vector<UserTruth> sync{{1, 0, 0.0, {1.0}}};
  const TileObservations obs = synthesize_waveform_mode(sync, lay, 0.0, rng);
  for (int m = 0; m < 4; ++m)
    for (int q = 0; q < 16; ++q)
      for (int v = 0; v < 4; ++v)
        CHECK(std::abs(obs.at(m, q, v) - code_entry(1, v, m, 4, 4)) <= 1e-10);

  std::vector<cx> h(12);
  for (cx& t : h) t = testing::random_cx(rng);
  const std::vector<UserTruth> delayed{{2, 180, 0.0, h}};
  const TileObservations d = synthesize_waveform_mode(delayed, lay, 0.0, rng);
  for (int m = 0; m < 4; ++m)
    for (int q = 0; q < 16; ++q)
      for (int v = 0; v < 4; ++v) {
        const int n = lay.tile_start(q) + v;
        const cx expect = code_entry(2, v, m, 4, 4) * testing::dft_bin(h, n, 1024) * expj(-2 * kPi * n * 180 / 1024.0);
        CHECK(std::abs(d.at(m, q, v) - expect) <= 1e-10);
      }
}

TEST_CASE("waveform mode CFO attenuation and inter-carrier leakage") {
  const TileLayout lay = reference_layout();
  Rng rng(6);
  const double eps = 0.08;
  const UserTruth u{1, 0, eps, {1.0}};
  const TileObservations obs = synthesize_waveform_mode(std::vector<UserTruth>{u}, lay, 0.0, rng);

  // Bin k of the DFT collects sum_i X(i) (1/N) sum_n exp(j 2 pi (eps + i - k) n / N),
  // times the block-to-block carrier rotation.
  const cx gamma_ref = testing::dirichlet_sum(eps, 1024);
  CHECK(std::abs(gamma_n(eps, 1024) - gamma_ref) <= 1e-12);
  double leakage = 0.0;
  for (int m = 0; m < 4; ++m) {
    const cx rot = expj(2 * kPi * eps * m * 1280 / 1024.0);
    for (int q = 0; q < 16; ++q)
      for (int v = 0; v < 4; ++v) {
        const int k = lay.tile_start(q) + v;
        cx expect = 0.0;
        for (int qq = 0; qq < 16; ++qq)
          for (int vv = 0; vv < 4; ++vv) {
            const int i = lay.tile_start(qq) + vv;
            expect += code_entry(1, vv, m, 4, 4) * testing::dirichlet_sum(eps + i - k, 1024);
          }
        expect *= rot;
        CHECK(std::abs(obs.at(m, q, v) - expect) <= 1e-10);
        leakage = std::max(leakage, std::abs(obs.at(m, q, v) - rot * gamma_ref * code_entry(1, v, m, 4, 4)));
      }
  }
  CHECK(leakage > 1e-3);
}

TEST_CASE("waveform mode equals model mode for flat channels without CFO") {
  const TileLayout lay = reference_layout();
  Rng rng(8);
  const std::vector<UserTruth> users{{0, 17, 0.0, {cx(0.6, -0.2)}}, {2, 200, 0.0, {cx(-0.3, 0.9)}}};
  const TileObservations w = synthesize_waveform_mode(users, lay, 0.0, rng);
  const TileObservations m = synthesize_model_mode(users, lay, 0.0, rng);
  CHECK(max_grid_diff(w, m) <= 1e-10);
}

TEST_CASE("synchronised data users do not disturb ranging tiles") {
  const TileLayout lay = reference_layout();
  std::vector<UserTruth> users{{0, 40, 0.07, {}}, {1, 150, -0.09, {}}};
  Rng chan(9);
  for (UserTruth& u : users) u.cir = draw_channel(ChannelProfile{}, chan);
  Rng a(10);
  Rng b(10);
  const TileObservations off = synthesize_waveform_mode(users, lay, 0.0, a);
  const TileObservations on = synthesize_waveform_mode(users, lay, 0.0, b, {.qpsk_data = true});
  CHECK(max_grid_diff(off, on) <= 1e-10);
}

TEST_CASE("waveform mode energy accounting and noise level") {
  const TileLayout lay = reference_layout();
  Rng rng(11);
  double model_total = 0.0;
  double wave_total = 0.0;
  for (int t = 0; t < 20; ++t) {
    const UserTruth u{t % 3, (t * 13) % 205, 0.0, draw_channel(ChannelProfile{}, rng)};
    const TileObservations w = synthesize_waveform_mode(std::vector<UserTruth>{u}, lay, 0.0, rng);
    double exact = 0.0;
    double flat = 0.0;
    for (int q = 0; q < 16; ++q) {
      flat += std::norm(tile_average_response(u.cir, q, lay)) * 4 * 4;
      for (int v = 0; v < 4; ++v) exact += std::norm(channel_freq_response(u.cir, lay.tile_start(q) + v, 1024)) * 4;
    }
    double got = 0.0;
    for (const cx& x : w.grid()) got += std::norm(x);
    CHECK(got == doctest::Approx(exact).epsilon(1e-10));
    model_total += flat;
    wave_total += got;
  }
  // the flat-tile approximation only loses the in-tile channel variation
  CHECK(model_total <= wave_total);
  CHECK(model_total / wave_total > 0.9);

  double noise = 0.0;
  std::size_t count = 0;
  for (int t = 0; t < 100; ++t) {
    const TileObservations w = synthesize_waveform_mode({}, lay, 0.5, rng);
    for (const cx& x : w.grid()) noise += std::norm(x);
    count += w.grid().size();
  }
  CHECK(noise / static_cast<double>(count) == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("waveform mode requires the delay spread to fit the CP") {
  const TileLayout lay = reference_layout();
  Rng rng(12);
  const std::vector<UserTruth> users{{0, 250, 0.0, std::vector<cx>(12, cx(0.1))}};
  CHECK_THROWS_AS(synthesize_waveform_mode(users, lay, 0.0, rng), Error);
}
