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

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>

#include "rangesim/error.hpp"
#include "rangesim/simlab.hpp"

namespace rangesim::simlab {

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::config, msg); }

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class Int>
Int parse_int(std::string_view key, std::string_view text) {
  Int value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    config_error("invalid integer for " + std::string(key) + ": '" + std::string(text) + "'");
  }
  return value;
}

double parse_real(std::string_view key, std::string_view text) {
  if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty() || std::isnan(value)) {
    config_error("invalid number for " + std::string(key) + ": '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

const char* to_string(SynthesisMode mode) noexcept {
  return mode == SynthesisMode::model ? "model" : "waveform";
}

const char* to_string(DataLoad load) noexcept { return load == DataLoad::off ? "off" : "qpsk"; }

airmodel::TileLayout SimConfig::layout() const {
  const int spacing = tile_spacing > 0 ? tile_spacing : (Q > 0 ? N / Q : 0);
  return airmodel::TileLayout::uniform(N, M, Q, V, spacing, N_G, N_GD);
}

std::vector<double> parse_snr_list(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string_view item =
        trim(text.substr(pos, comma == std::string_view::npos ? text.size() - pos : comma - pos));
    out.push_back(parse_real("snr_list_db", item));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

void apply_setting(SimConfig& cfg, std::string_view key, std::string_view raw) {
  const std::string_view value = trim(raw);
  if (key == "N") cfg.N = parse_int<int>(key, value);
  else if (key == "M") cfg.M = parse_int<int>(key, value);
  else if (key == "Q") cfg.Q = parse_int<int>(key, value);
  else if (key == "V") cfg.V = parse_int<int>(key, value);
  else if (key == "N_G") cfg.N_G = parse_int<int>(key, value);
  else if (key == "N_GD") cfg.N_GD = parse_int<int>(key, value);
  else if (key == "tile_spacing") cfg.tile_spacing = parse_int<int>(key, value);
  else if (key == "L") cfg.L = parse_int<int>(key, value);
  else if (key == "decay") cfg.decay = parse_real(key, value);
  else if (key == "K") cfg.K = parse_int<int>(key, value);
  else if (key == "Omega") cfg.Omega = parse_real(key, value);
  else if (key == "theta_max") cfg.theta_max = parse_int<int>(key, value);
  else if (key == "snr_list_db") cfg.snr_list_db = parse_snr_list(value);
  else if (key == "trials") cfg.trials = parse_int<int>(key, value);
  else if (key == "master_seed") cfg.master_seed = parse_int<std::uint64_t>(key, value);
  else if (key == "mode") {
    if (value == "model") cfg.mode = SynthesisMode::model;
    else if (value == "waveform") cfg.mode = SynthesisMode::waveform;
    else config_error("mode must be 'model' or 'waveform', got '" + std::string(value) + "'");
  } else if (key == "data_subcarrier_load") {
    if (value == "off") cfg.data_subcarrier_load = DataLoad::off;
    else if (value == "qpsk") cfg.data_subcarrier_load = DataLoad::qpsk;
    else config_error("data_subcarrier_load must be 'off' or 'qpsk', got '" + std::string(value) + "'");
  } else {
    config_error("unknown configuration key '" + std::string(key) + "'");
  }
}

SimConfig parse_config(std::string_view text) {
  SimConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv = line;
    if (const auto hash = sv.find('#'); hash != std::string_view::npos) sv = sv.substr(0, hash);
    sv = trim(sv);
    if (sv.empty()) continue;
    const auto eq = sv.find('=');
    if (eq == std::string_view::npos) {
      config_error("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string_view key = trim(sv.substr(0, eq));
    if (!seen.emplace(key).second) {
      config_error("line " + std::to_string(lineno) + ": duplicate key '" + std::string(key) + "'");
    }
    try {
      apply_setting(cfg, key, sv.substr(eq + 1));
    } catch (const Error& e) {
      config_error("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

ConfigSummary summarize(const SimConfig& cfg) {
  const double n = cfg.N;
  const double nt = cfg.N + cfg.N_G;
  return {
      cfg.Omega * nt * (cfg.M - 1) / n,
      cfg.theta_max * (cfg.V - 1) / (2.0 * n),
      std::min(cfg.V, cfg.M) - 1,
      n / (2.0 * nt * (cfg.M - 1)),
      n / (cfg.V - 1),
  };
}

void validate(const SimConfig& cfg) {
  if (cfg.Q < 1) config_error("Q must be at least 1");
  if (cfg.tile_spacing < 0) config_error("tile_spacing must be non-negative");
  try {
    (void)cfg.layout();
  } catch (const Error& e) {
    config_error(e.what());
  }
  const ConfigSummary s = summarize(cfg);
  if (cfg.L < 1) config_error("L must be at least 1");
  if (!(cfg.decay > 0.0) || !std::isfinite(cfg.decay)) config_error("decay must be positive");
  if (cfg.K < 0 || cfg.K > s.k_max) {
    config_error("K = " + std::to_string(cfg.K) + " outside [0, K_max = " +
                 std::to_string(s.k_max) + "]");
  }
  if (!(cfg.Omega >= 0.0) || !std::isfinite(cfg.Omega)) config_error("Omega must be non-negative");
  if (!(s.beta < 0.5)) {
    config_error("Omega = " + format_double(cfg.Omega) +
                 " exceeds the frequency acquisition range N/(2 N_T (M-1)) = " +
                 format_double(s.omega_bound));
  }
  if (cfg.theta_max < 0) config_error("theta_max must be non-negative");
  if (!(cfg.theta_max < s.theta_bound)) {
    config_error("theta_max = " + std::to_string(cfg.theta_max) +
                 " violates theta_max < N/(V-1) = " + format_double(s.theta_bound));
  }
  if (cfg.theta_max + cfg.L > cfg.N_G) {
    config_error("theta_max + L = " + std::to_string(cfg.theta_max + cfg.L) +
                 " exceeds the ranging CP N_G = " + std::to_string(cfg.N_G));
  }
  if (cfg.N_GD <= cfg.L) config_error("N_GD must exceed L for a non-empty timing window");
  if (cfg.snr_list_db.empty()) config_error("snr_list_db is empty");
  if (cfg.trials < 1) config_error("trials must be at least 1");
}

}  // namespace rangesim::simlab
