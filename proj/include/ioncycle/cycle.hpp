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

// The four strokes and the cycle scheduler.
//
//   forward (engine):        I_a pump, I_b carrier -> A, II red -> B, III pump -> C, IV blue -> D
//   reverse (refrigerator):  I_a pump, I_b carrier -> A, IV blue -> B, III pump -> C, II red -> D
//
// Strokes are evolved in the interaction picture of H_E + H_L.

#include <exception>
#include <optional>
#include <vector>

#include "ioncycle/dynamics.hpp"
#include "ioncycle/hilbert.hpp"
#include "ioncycle/params.hpp"
#include "ioncycle/trace.hpp"

namespace ioncycle {

enum class SidebandKind { red_jc, blue_ajc };

/// Knobs shared by all strokes beyond the calibration itself.
struct StrokeSettings {
  EvolveOptions evolve;
  /// Sideband matrix elements independent of n (unit lowering operator instead of a).
  bool unit_coupling = false;
  /// Resonant stroke duration; unset means calib.sideband_duration.
  std::optional<double> duration;
};

struct StrokeResult {
  DensityMatrix<double> state;
  std::vector<Snapshot> snapshots;
};

/// Ambient dissipators active during every stroke except the pump's engine channel.
std::vector<DissipatorSpec> ambient_dissipators(const CalibrationParams& calib);

/// Carrier Hamiltonian (Omega_0 / 2)(i e^{-i phi} sigma+ - i e^{i phi} sigma-), lifted to the joint space.
/// From |down> it produces cos(Omega_0 t / 2)|down> + e^{-i phi} sin(Omega_0 t / 2)|up>.
Operator<double> carrier_hamiltonian(const CalibrationParams& calib, Index fock_dim);

/// sigma+ a + sigma- a^dag (red) or sigma+ a^dag + sigma- a (blue), without any rate prefactor.
Operator<double> sideband_coupling(SidebandKind kind, Index fock_dim, bool unit_coupling = false);

/// Carrier duration giving an undamped excited population of p_target.
double reset_pulse_duration(double p_target, const CalibrationParams& calib);

/// Largest excited population the damped carrier can reach from |down>.
double max_reachable_population(const CalibrationParams& calib);

StrokeResult stroke_pump(const DensityMatrix<double>& rho, const CalibrationParams& calib,
                         const StrokeSettings& settings = {});
StrokeResult stroke_reset_superposition(const DensityMatrix<double>& rho, double p_target,
                                        const CalibrationParams& calib, const StrokeSettings& settings = {});
StrokeResult stroke_sideband_resonant(const DensityMatrix<double>& rho, SidebandKind kind,
                                      const CalibrationParams& calib, const StrokeSettings& settings = {});
StrokeResult stroke_sideband_rap(const DensityMatrix<double>& rho, SidebandKind kind, const CalibrationParams& calib,
                                 const StrokeSettings& settings = {});

/// Removes engine coherences: the state averaged over a uniformly random laser phase.
DensityMatrix<double> dephase_engine(const DensityMatrix<double>& rho);

/// |down><down| (x) thermal(initial_nbar).
DensityMatrix<double> initial_state(const CycleConfig& config);

/// Runs the configured cycles. With `failure` set, a physics error stops the run early and the
/// partial trace is returned with the error stored there instead of thrown.
SimulationTrace run_cycles(const CycleConfig& config, std::exception_ptr* failure = nullptr);

/// Observable record of a joint state.
ObservableSample observe(const DensityMatrix<double>& rho, double time, std::string stroke, int cycle);

}  // namespace ioncycle
