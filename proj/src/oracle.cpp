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

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rangesim/simlab.hpp"

namespace rangesim::simlab {

namespace {

std::string fmt(double x) { return format_double(x); }

OracleCheck noiseless_exactness(std::uint64_t seed) {
  SimConfig cfg;
  cfg.mode = SynthesisMode::model;
  cfg.master_seed = seed;
  const double inf = std::numeric_limits<double>::infinity();
  int correct = 0;
  double max_eps = 0.0;
  double max_theta = 0.0;
  constexpr int kTrials = 100;
  for (int t = 0; t < kTrials; ++t) {
    cfg.K = 1 + t % 3;
    const TrialResult r = run_trial(cfg, inf, static_cast<std::uint64_t>(t), {.known_k = true});
    if (r.set_correct) ++correct;
    for (const UserOutcome& u : r.users) {
      if (u.epsilon_error) max_eps = std::max(max_eps, std::abs(*u.epsilon_error));
      if (u.theta_error) max_theta = std::max(max_theta, std::abs(*u.theta_error));
    }
  }
  OracleCheck c{"noiseless exactness", correct == kTrials && max_eps <= 1e-5 && max_theta <= 1e-2, {}};
  c.detail = std::to_string(correct) + "/" + std::to_string(kTrials) + " sets, max|de|=" +
             fmt(max_eps) + ", max|dtheta|=" + fmt(max_theta);
  return c;
}

OracleCheck wrap_consistency() {
  SimConfig cfg;
  const airmodel::TileLayout layout = cfg.layout();
  int failures = 0;
  double max_eps = 0.0;
  double max_theta = 0.0;
  for (int ell = 0; ell < layout.max_codes(); ++ell) {
    for (int i = 0; i <= 200; ++i) {
      airmodel::UserTruth u{ell, 0, -0.1 + 0.001 * i, {}};
      const auto off = airmodel::effective_params(u, layout);
      const ranger::FreqEstimate f = ranger::map_cfo(ranger::wrap_unit(off.xi), layout);
      if (f.ell_F != ell) ++failures;
      max_eps = std::max(max_eps, std::abs(f.epsilon_hat - u.epsilon));
    }
    for (int theta = 0; theta <= cfg.theta_max; ++theta) {
      airmodel::UserTruth u{ell, theta, 0.0, {}};
      const auto off = airmodel::effective_params(u, layout);
      const ranger::TimingEstimate t =
          ranger::map_timing(ranger::wrap_unit(off.eta), layout, cfg.theta_max);
      if (t.ell_f != ell) ++failures;
      max_theta = std::max(max_theta, std::abs(t.theta_hat - theta));
    }
  }
  OracleCheck c{"wrap consistency", failures == 0 && max_eps <= 1e-12 && max_theta <= 1e-9, {}};
  c.detail = std::to_string(failures) + " code mismatches, max|de|=" + fmt(max_eps) +
             ", max|dtheta|=" + fmt(max_theta);
  return c;
}

OracleCheck periodogram_agreement(std::uint64_t seed) {
  SimConfig cfg;
  cfg.mode = SynthesisMode::model;
  cfg.K = 1;
  cfg.master_seed = seed;
  const airmodel::TileLayout layout = cfg.layout();
  constexpr int kTrials = 50;
  double worst = 0.0;
  for (int t = 0; t < kTrials; ++t) {
    airmodel::Rng rng = trial_rng(seed, static_cast<std::uint64_t>(t));
    const auto users = draw_users(cfg, rng);
    const auto obs = airmodel::synthesize_model_mode(users, layout, 0.0, rng);
    const auto snaps = ranger::freq_snapshots(obs);
    const auto spectrum = cxmath::hermitian_evd(cxmath::forward_backward(ranger::sample_corr(snaps)));
    const double esprit = ranger::esprit_phases(spectrum, 1).front();
    const double grid = oracle_periodogram(snaps, 1e-4);
    worst = std::max(worst, std::abs(ranger::wrap_unit(grid - esprit)));
  }
  OracleCheck c{"periodogram agreement", worst <= 2e-4, {}};
  c.detail = "max|xi_esprit - xi_grid|=" + fmt(worst) + " over " + std::to_string(kTrials) + " trials";
  return c;
}

}  // namespace

std::vector<OracleCheck> run_oracle_suite(std::uint64_t seed,
                                          const std::function<void(const OracleCheck&)>& on_check) {
  std::vector<OracleCheck> checks;
  auto record = [&](OracleCheck c) {
    if (on_check) on_check(c);
    checks.push_back(std::move(c));
  };
  record(noiseless_exactness(seed));
  record(wrap_consistency());
  record(periodogram_agreement(seed));
  return checks;
}

}  // namespace rangesim::simlab
