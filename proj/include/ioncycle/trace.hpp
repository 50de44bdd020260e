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

#include <optional>
#include <string>
#include <vector>

#include "ioncycle/hilbert.hpp"
#include "ioncycle/params.hpp"

namespace ioncycle {

/// Stroke-boundary points of a cycle, in the order they are reached.
enum class BoundaryPoint { A, B, C, D };

constexpr char to_char(BoundaryPoint p) { return "ABCD"[static_cast<int>(p)]; }

struct BoundaryState {
  int cycle = 0;  ///< 1-based; the lead-in blue stroke is recorded as cycle 0, point D
  BoundaryPoint point = BoundaryPoint::A;
  double time = 0.0;
  DensityMatrix<double> state;
};

struct ObservableSample {
  double time = 0.0;
  std::string stroke;  ///< "init", "I_a", "I_b", "II", "III", "IV"
  int cycle = 0;
  double p_D = 0.0;
  double mean_n = 0.0;
  double entropy_nats = 0.0;
  double ergotropy_hw = 0.0;
  double ergotropy_diag_hw = 0.0;
  double mutual_info_nats = 0.0;
};

struct SimulationTrace {
  CycleConfig config;
  DensityMatrix<double> initial_state;
  std::vector<BoundaryState> boundaries;
  std::vector<ObservableSample> series;

  const BoundaryState* find(int cycle, BoundaryPoint point) const {
    for (const auto& b : boundaries)
      if (b.cycle == cycle && b.point == point) return &b;
    return nullptr;
  }
  const BoundaryState& at(int cycle, BoundaryPoint point) const {
    if (const auto* b = find(cycle, point)) return *b;
    throw Error(ErrorKind::invalid_argument, "no boundary state for that cycle/point");
  }
  const DensityMatrix<double>& final_state() const {
    return boundaries.empty() ? initial_state : boundaries.back().state;
  }
  int completed_cycles() const {
    int c = 0;
    for (const auto& b : boundaries)
      if (b.point == BoundaryPoint::D && b.cycle > c) c = b.cycle;
    return c;
  }
};

/// <n> of the load at the end of every cycle, starting with the initial state.
std::vector<double> end_of_cycle_mean_n(const SimulationTrace& trace);

/// Mean gain of <n> per completed cycle.
double delta_n_per_cycle(const SimulationTrace& trace);

}  // namespace ioncycle
