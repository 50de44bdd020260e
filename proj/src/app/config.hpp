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

// Experiment specifications: JSON documents with units in every physical key.
//
// {
//   "name": "fig1c", "seed": 7, "emit_snapshots": false,
//   "cycle": { "p_D_A": 0.32, "protocol": "resonant", ..., "calibration": { "carrier_rabi_rad_s": ... } },
//   "tomography": { "shots": 150, "grid_points": 35, "grid_spacing_s": 3e-6, ... },
//   "grid": { "cycle.p_D_A": [0.15, 0.32, 0.5] }
// }

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ioncycle/params.hpp"
#include "ioncycle/tomography.hpp"

namespace ioncycle::app {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

struct TomographySpec {
  int shots = 150;
  int grid_points = 35;
  double grid_spacing = 3e-6;  ///< s
  bool reference = false;      ///< 200 points up to 600 us instead of the regular grid
  double gamma_base = kDefaultGammaBase;
  Index n_levels = 14;
  double box_halfwidth = 0.05;
  std::optional<std::uint64_t> seed;  ///< defaults to the experiment seed

  Eigen::VectorXd times() const { return reference ? reference_grid() : scan_grid(grid_points, grid_spacing); }
};

struct ExperimentSpec {
  std::string name = "experiment";
  std::uint64_t seed = 0;
  bool emit_snapshots = false;
  CycleConfig cycle;
  std::optional<TomographySpec> tomography;
  /// Sweep axes: dotted key path -> values, applied in lexicographic-product order.
  std::vector<std::pair<std::string, std::vector<Json>>> grid;
  /// Output directory given inside the spec (the --out flag wins).
  std::optional<std::string> outputs;

  void validate() const;
};

/// Strict parse: unknown keys and wrong types are schema errors. Accepts a run.json too
/// (its "spec" member is used).
ExperimentSpec parse_spec(const Json& doc);
ExperimentSpec load_spec_file(const std::string& path);
Json to_json(const ExperimentSpec& spec);

/// Sets a dotted path such as "cycle.calibration.heating_rate_per_s" in a spec document.
void set_path(Json& doc, const std::string& dotted, const Json& value);

/// Stable derived seed for grid point `index`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace ioncycle::app
