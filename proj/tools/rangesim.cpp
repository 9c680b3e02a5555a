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

// rangesim: Monte Carlo driver for the OFDMA initial-ranging receiver.
//
//   rangesim run --config sim.cfg [--snr 0,10,20] [--trials N] [--k K]
//                [--omega X] [--mode model|waveform] [--seed S]
//                [--out results.csv] [--gnuplot]
//   rangesim validate --config sim.cfg
//   rangesim oracle [--seed S]

#include <cstdio>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rangesim/rangesim.h"

namespace {

struct ConfigDeleter {
  void operator()(rs_config* c) const { rs_config_destroy(c); }
};
struct ResultsDeleter {
  void operator()(rs_results* r) const { rs_results_destroy(r); }
};
using ConfigPtr = std::unique_ptr<rs_config, ConfigDeleter>;
using ResultsPtr = std::unique_ptr<rs_results, ResultsDeleter>;

int report_failure(rs_status status) {
  std::fprintf(stderr, "rangesim: %s: %s\n", rs_status_string(status), rs_last_error());
  return static_cast<int>(status);
}

ConfigPtr load(const std::string& path, rs_status& status) {
  rs_config* raw = nullptr;
  status = rs_config_load(path.c_str(), &raw);
  return ConfigPtr(raw);
}

void print_summary(const rs_config_summary& s) {
  std::printf("beta        = %.6g  (frequency acquisition requires < 0.5)\n", s.beta);
  std::printf("alpha       = %.6g  (timing acquisition requires < 0.5)\n", s.alpha);
  std::printf("K_max       = %d\n", s.k_max);
  std::printf("Omega bound = %.6g  (N / (2 N_T (M-1)))\n", s.omega_bound);
  std::printf("theta bound = %.6g  (N / (V-1))\n", s.theta_bound);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OFDMA initial-ranging simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> snr;
  std::optional<std::string> trials;
  std::optional<std::string> k;
  std::optional<std::string> omega;
  std::optional<std::string> mode;
  std::optional<std::string> seed;
  std::string out_path = "results.csv";
  bool gnuplot = false;
  unsigned threads = 0;

  auto* run = app.add_subcommand("run", "run a Monte Carlo SNR sweep and write CSV metrics");
  run->add_option("--config", config_path, "configuration file (key = value)")->required();
  run->add_option("--snr", snr, "comma-separated SNR list in dB, overrides snr_list_db");
  run->add_option("--trials", trials, "trials per SNR point");
  run->add_option("--k", k, "number of active ranging users");
  run->add_option("--omega", omega, "maximum |CFO| in subcarrier spacings");
  run->add_option("--mode", mode, "synthesis mode")->check(CLI::IsMember({"model", "waveform"}));
  run->add_option("--seed", seed, "master seed");
  run->add_option("--out", out_path, "output CSV path ('-' for stdout)");
  run->add_flag("--gnuplot", gnuplot, "also write <out>.gp plotting the CSV");
  run->add_option("--threads", threads, "worker threads (0 = all cores)");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "check a configuration and print derived bounds");
  validate->add_option("--config", validate_path, "configuration file")->required();

  std::uint64_t oracle_seed = 1;
  auto* oracle = app.add_subcommand("oracle", "run the noiseless and periodogram cross-checks");
  oracle->add_option("--seed", oracle_seed, "seed for the randomised checks");

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    rs_status st = RS_OK;
    ConfigPtr cfg = load(config_path, st);
    if (st != RS_OK) return report_failure(st);
    const std::pair<const char*, const std::optional<std::string>*> overrides[] = {
        {"snr_list_db", &snr}, {"trials", &trials}, {"K", &k},
        {"Omega", &omega},     {"mode", &mode},     {"master_seed", &seed},
    };
    for (const auto& [key, value] : overrides) {
      if (!value->has_value()) continue;
      st = rs_config_set(cfg.get(), key, (*value)->c_str());
      if (st != RS_OK) return report_failure(st);
    }
    rs_results* raw = nullptr;
    st = rs_run_sweep(cfg.get(), threads, &raw);
    ResultsPtr results(raw);
    if (st != RS_OK) return report_failure(st);
    st = rs_results_write_csv(results.get(), out_path.c_str());
    if (st != RS_OK) return report_failure(st);
    if (gnuplot && out_path != "-") {
      st = rs_write_gnuplot(out_path.c_str(), (out_path + ".gp").c_str());
      if (st != RS_OK) return report_failure(st);
    }
    if (out_path != "-") {
      std::fprintf(stderr, "wrote %zu rows to %s\n", rs_results_count(results.get()),
                   out_path.c_str());
    }
    return 0;
  }

  if (*validate) {
    rs_status st = RS_OK;
    ConfigPtr cfg = load(validate_path, st);
    if (st != RS_OK) return report_failure(st);
    rs_config_summary summary{};
    rs_config_summary_get(cfg.get(), &summary);
    print_summary(summary);
    st = rs_config_validate(cfg.get(), nullptr);
    if (st != RS_OK) return report_failure(st);
    std::printf("configuration OK\n");
    return 0;
  }

  if (*oracle) {
    int all_passed = 0;
    const rs_status st = rs_oracle_run(
        oracle_seed,
        [](const char* name, int passed, const char* detail, void*) {
          std::printf("[%s] %s: %s\n", passed ? "PASS" : "FAIL", name, detail);
        },
        nullptr, &all_passed);
    if (st != RS_OK) return report_failure(st);
    return all_passed ? 0 : 1;
  }
  return 0;
}
