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

#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "rangesim/error.hpp"

namespace rangesim::detail {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

Plan make_plan(int n, int sign) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * static_cast<std::size_t>(n)));
  fftw_plan p = fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
  if (p == nullptr) throw Error(ErrorKind::numerical, "fft: FFTW planner failed");
  return Plan(p);
}

void execute(std::span<std::complex<double>> data, int sign) {
  thread_local std::map<std::pair<int, int>, Plan> cache;
  const int n = static_cast<int>(data.size());
  auto key = std::make_pair(n, sign);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, make_plan(n, sign)).first;
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(it->second.get(), buf, buf);
}

}  // namespace

void dft_forward(std::span<std::complex<double>> data) { execute(data, FFTW_FORWARD); }

void dft_inverse(std::span<std::complex<double>> data) { execute(data, FFTW_BACKWARD); }

}  // namespace rangesim::detail
