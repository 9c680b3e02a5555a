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

#pragma once

#include <stdexcept>
#include <string>

namespace rangesim {

enum class ErrorKind {
  dimension,    // shape mismatch between operands
  validation,   // input violates a documented precondition
  numerical,    // iteration failed to converge or a solve was singular
  unsupported,  // size outside the supported range
  config,       // simulation configuration is inconsistent
  io,           // file could not be read or written
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; the kind selects the C status code.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

}  // namespace rangesim
