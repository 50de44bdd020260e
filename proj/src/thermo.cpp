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

#include "ioncycle/thermo.hpp"

#include "ioncycle/trace.hpp"

namespace ioncycle {

std::vector<double> end_of_cycle_mean_n(const SimulationTrace& trace) {
  const BoundaryState* lead_in = trace.find(0, BoundaryPoint::D);
  std::vector<double> out{mean_phonon(lead_in ? lead_in->state : trace.initial_state)};
  for (int c = 1; c <= trace.completed_cycles(); ++c) out.push_back(mean_phonon(trace.at(c, BoundaryPoint::D).state));
  return out;
}

double delta_n_per_cycle(const SimulationTrace& trace) {
  const std::vector<double> n = end_of_cycle_mean_n(trace);
  if (n.size() < 2) throw Error(ErrorKind::invalid_argument, "trace holds no complete cycle");
  return (n.back() - n.front()) / double(n.size() - 1);
}

double quanta_efficiency(const SimulationTrace& trace) {
  if (trace.config.direction != Direction::forward)
    throw Error(ErrorKind::invalid_argument, "quanta efficiency is defined for forward cycles");
  const int cycles = trace.completed_cycles();
  if (cycles < 1) throw Error(ErrorKind::invalid_argument, "trace holds no complete cycle");
  double invested = 0.0;
  for (int c = 1; c <= cycles; ++c)
    invested += excited_population(trace.at(c, BoundaryPoint::B).state) +
                excited_population(trace.at(c, BoundaryPoint::D).state);
  invested /= double(cycles);
  const double gain = delta_n_per_cycle(trace);
  return invested > 0.0 ? gain / invested : 0.0;
}

}  // namespace ioncycle
