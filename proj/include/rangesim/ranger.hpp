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

// Base-station ranging receiver for one subchannel.
//
// The pipeline runs in four stages:
//   1. order selection: MDL over the eigenvalues of the forward-backward
//      averaged block-domain correlation matrix (Q*V snapshots of length M);
//   2. frequency stage: ESPRIT on the same matrix yields effective CFOs, which
//      split into a code index and a normalised CFO by rounding;
//   3. timing stage: ESPRIT on the subcarrier-domain matrix (M*Q snapshots of
//      length V) yields effective timing errors, split the same way;
//   4. code detection: a code is declared active when both stages agree.

#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "rangesim/airmodel.hpp"
#include "rangesim/cxmath.hpp"

namespace rangesim::ranger {

using cx = std::complex<double>;
using Snapshot = std::vector<cx>;

struct FreqEstimate {
  double xi_hat = 0;      // effective CFO in [-1/2, 1/2)
  int ell_raw = 0;        // round((M-1) xi_hat)
  int ell_F = 0;          // ell_raw reduced to [0, M-2]
  double epsilon_hat = 0; // (N/N_T)(xi_hat - ell_raw/(M-1))
};

struct TimingEstimate {
  double eta_hat = 0;     // effective timing error in [-1/2, 1/2)
  int ell_raw = 0;        // round((V-1) eta_hat + alpha)
  int ell_f = 0;          // ell_raw reduced to [0, V-2]
  double theta_hat = 0;   // N(ell_raw/(V-1) - eta_hat), samples, not rounded
};

struct CodeEstimate {
  double epsilon_hat = 0;
  double theta_hat = 0;
};

struct Detection {
  std::vector<int> detected;            // ascending
  std::map<int, CodeEstimate> per_code; // keyed by detected code
  int freq_collisions = 0;              // repeated ell_F values
  int timing_collisions = 0;            // repeated ell_f values
};

struct RangingReport {
  int k_hat = 0;
  std::vector<FreqEstimate> freq_estimates;
  std::vector<TimingEstimate> timing_estimates;
  std::vector<int> detected;
  std::map<int, CodeEstimate> per_code;
  int freq_collisions = 0;
  int timing_collisions = 0;
  std::vector<double> freq_eigenvalues;  // spectrum used for order selection
};

struct RangerConfig {
  int theta_max = 0;
  /// Skip order selection and use this many codes.
  std::optional<int> known_k;
};

/// Wraps x into [-1/2, 1/2).
double wrap_unit(double x);

/// Q*V block-domain snapshots; snapshot q*V + v holds X_m(i_q + v), m = 0..M-1.
std::vector<Snapshot> freq_snapshots(const airmodel::TileObservations& obs);

/// M*Q subcarrier-domain snapshots; snapshot m*Q + q holds X_m(i_q + v), v = 0..V-1.
std::vector<Snapshot> tile_snapshots(const airmodel::TileObservations& obs);

/// (1/S) sum y y^H over S equal-length snapshots.
cxmath::CxMatrix sample_corr(std::span<const Snapshot> snapshots);

/// MDL objective for a candidate order over descending eigenvalues of an
/// n x n correlation estimate built from `snapshot_count` snapshots.
double mdl_objective(std::span<const double> eigenvalues, std::size_t snapshot_count, int order);

/// Argmin of the MDL objective over orders 0..k_cap (first minimum wins).
int estimate_num_codes(std::span<const double> eigenvalues, std::size_t snapshot_count, int k_cap);

/// Largest order the receiver may select for an n-dimensional stage.
int order_cap(const airmodel::TileLayout& layout);

/// Shift-invariance ESPRIT on the `k` dominant eigenvectors; returns the
/// rotation eigenvalue phases in cycles, each in [-1/2, 1/2), ordered by
/// increasing distance of the eigenvalue from the unit circle.
std::vector<double> esprit_phases(const cxmath::HermitianSpectrum& spectrum, int k);

FreqEstimate map_cfo(double xi_hat, const airmodel::TileLayout& layout);

/// Throws config unless theta_max < N / (V - 1).
TimingEstimate map_timing(double eta_hat, const airmodel::TileLayout& layout, int theta_max);

void check_timing_range(const airmodel::TileLayout& layout, int theta_max);

Detection detect_codes(std::span<const FreqEstimate> freq, std::span<const TimingEstimate> timing);

/// Full pipeline. Numerical failures are rethrown with the stage name prefixed.
RangingReport range_subchannel(const airmodel::TileObservations& obs, const RangerConfig& cfg);

}  // namespace rangesim::ranger
