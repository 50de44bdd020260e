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

// Physical and protocol parameters of one experiment. All rates are in 1/s, angular
// frequencies in rad/s, durations in s.

#include <numbers>
#include <string_view>

#include "ioncycle/error.hpp"
#include "ioncycle/hilbert.hpp"

namespace ioncycle {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct CalibrationParams {
  double omega = kTwoPi * 1.7e6;            ///< trap (load) angular frequency
  double carrier_rabi = kTwoPi * 121.7e3;   ///< carrier Rabi frequency Omega_0
  double lamb_dicke = 0.012;                ///< eta
  double pump_rate = 7.0e5;                 ///< engine decay rate while optically pumping
  double pump_duration = 20e-6;
  double dephasing_rate = 318.0;            ///< load dephasing, jump operator n
  double heating_rate = 0.4;                ///< load heating gamma_h
  double heating_target = 100.0;            ///< n_m of the heating dissipator
  double residual_engine_decay = 0.4;       ///< engine decay outside the pump strokes
  double sideband_duration = 180e-6;        ///< t_M of a resonant sideband stroke
  double rap_half_span = kTwoPi * 30e3;     ///< Delta_0
  double rap_duration = 4.0e-3;             ///< tau
  double laser_phase = 0.0;                 ///< phi of the reset superposition

  /// Sideband Rabi frequency of the |down,0> <-> |up,1> transition.
  double sideband_rabi() const { return lamb_dicke * carrier_rabi; }

  void validate() const;
};

enum class Protocol { resonant, rap };
enum class Direction { forward, reverse };

constexpr std::string_view to_string(Protocol p) { return p == Protocol::resonant ? "resonant" : "rap"; }
constexpr std::string_view to_string(Direction d) { return d == Direction::forward ? "forward" : "reverse"; }

struct CycleConfig {
  CalibrationParams calib;
  double p_D_A = 0.32;
  Protocol protocol = Protocol::resonant;
  Direction direction = Direction::forward;
  int n_cycles = 8;
  double initial_nbar = 1.2;
  Index fock_dim = 40;

  /// Resonant strokes last one pi-pulse of the n=0 sideband transition instead of t_M.
  bool ideal_timing = false;
  /// Sideband matrix elements made independent of n (perfect transfer for every level).
  bool ideal_transfer = false;
  /// Average the reset over the laser phase: engine coherence is removed after I_b.
  bool randomize_phase = true;
  /// Run one blue stroke before the first cycle, so the sequence starts at point C_0.
  bool lead_in_blue = false;
  /// Extra observable samples recorded inside each stroke (0 = boundaries only).
  int samples_per_stroke = 0;
  /// Integration step override in s (0 = default rule).
  double step = 0.0;

  void validate() const;

  /// A dissipation-free copy: all ambient rates zero, pump kept as the only reset channel.
  static CycleConfig ideal(double p_D_A, int n_cycles, Index fock_dim);
};

}  // namespace ioncycle
