// Copyright 2026 The ioncycle Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ioncycle {

enum class ErrorKind {
  invalid_config,
  invalid_argument,
  invalid_state,
  invalid_distribution,
  integration_accuracy,
  fock_overflow,
  unreachable_target,
  overflow,
  scaling_undefined,
  underdetermined_fit,
  fit_failure,
  schema,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_config: return "invalid-config";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::invalid_state: return "invalid-state";
    case ErrorKind::invalid_distribution: return "invalid-distribution";
    case ErrorKind::integration_accuracy: return "integration-accuracy";
    case ErrorKind::fock_overflow: return "fock-overflow";
    case ErrorKind::unreachable_target: return "unreachable-target";
    case ErrorKind::overflow: return "overflow";
    case ErrorKind::scaling_undefined: return "scaling-undefined";
    case ErrorKind::underdetermined_fit: return "underdetermined-fit";
    case ErrorKind::fit_failure: return "fit-failure";
    case ErrorKind::schema: return "schema";
  }
  return "unknown";
}

/// Single exception type for the library; `kind()` is what callers branch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ioncycle
