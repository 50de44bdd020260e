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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "app/config.hpp"

namespace ioncycle::app {

/// Process exit codes.
enum ExitCode : int { kOk = 0, kInternal = 1, kValidation = 2, kPhysics = 3 };

ExitCode exit_code_for(ErrorKind kind);

struct CommonOptions {
  std::optional<std::string> spec;
  std::optional<std::string> preset;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
};

struct TomoOptions {
  std::string scan;
  std::string prior;
  std::optional<std::string> out;
  std::optional<std::string> spec;  ///< calibration source
  Index n_levels = 14;
  double box_halfwidth = 0.05;
  double gamma_base = kDefaultGammaBase;
  std::optional<int> grid_points;
  std::optional<double> grid_spacing;
  bool reference_grid = false;
};

/// Spec from --spec or --preset with --seed applied.
ExperimentSpec resolve_spec(const CommonOptions& options);

int cmd_run(const CommonOptions& options, std::ostream& out, std::ostream& err);
int cmd_sweep(const CommonOptions& options, std::ostream& out, std::ostream& err);
int cmd_tomo(const TomoOptions& options, std::ostream& out, std::ostream& err);
int cmd_validate(const CommonOptions& options, std::ostream& out, std::ostream& err);

/// Error document printed on failure: {"error": kind, "message": ...}.
Json error_json(const Error& e);

}  // namespace ioncycle::app
