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

#include "ioncycle/cycle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ioncycle/thermo.hpp"

namespace ioncycle {

namespace {

using cd = std::complex<double>;

// Tolerance on the excited population for strokes that require a ground-state engine.
constexpr double kGroundTolerance = 0.01;
// Accuracy promised by the reset stroke; targets further than this above the reachable maximum are refused.
constexpr double kResetAccuracy = 0.02;

StrokeResult run(const DensityMatrix<double>& rho, const HamiltonianSchedule& schedule,
                 const std::vector<DissipatorSpec>& dissipators, const EvolveOptions& options) {
  EvolutionResult r = evolve(rho, schedule, dissipators, options);
  return {std::move(r.final_state), std::move(r.snapshots)};
}

}  // namespace

std::vector<DissipatorSpec> ambient_dissipators(const CalibrationParams& calib) {
  return {DissipatorSpec::dephasing(calib.dephasing_rate),
          DissipatorSpec::heating(calib.heating_rate, calib.heating_target),
          DissipatorSpec::decay(calib.residual_engine_decay)};
}

Operator<double> carrier_hamiltonian(const CalibrationParams& calib, Index fock_dim) {
  const cd up = cd(0, 1) * std::exp(cd(0, -calib.laser_phase));
  CMatrix<double> h = CMatrix<double>::Zero(kEngineDim, kEngineDim);
  h(kUp, kDown) = 0.5 * calib.carrier_rabi * up;
  h(kDown, kUp) = std::conj(h(kUp, kDown));
  return lift(Operator<double>(std::move(h), Factor::engine), fock_dim);
}

Operator<double> sideband_coupling(SidebandKind kind, Index fock_dim, bool unit_coupling) {
  const Operator<double> lower = unit_coupling ? unit_lowering(fock_dim) : destroy(fock_dim);
  const Operator<double> raise = lower.adjoint();
  const auto sp = pauli(PauliKind::plus);
  const auto sm = pauli(PauliKind::minus);
  if (kind == SidebandKind::red_jc) return tensor(sp, lower) + tensor(sm, raise);
  return tensor(sp, raise) + tensor(sm, lower);
}

double reset_pulse_duration(double p_target, const CalibrationParams& calib) {
  if (!(p_target >= 0.0 && p_target <= 1.0)) throw Error(ErrorKind::invalid_argument, "p_target must lie in [0, 1]");
  if (p_target == 0.0) return 0.0;
  if (!(calib.carrier_rabi > 0.0)) throw Error(ErrorKind::invalid_config, "carrier_rabi must be > 0");
  return 2.0 * std::asin(std::sqrt(p_target)) / calib.carrier_rabi;
}

double max_reachable_population(const CalibrationParams& calib) {
  // e^{-gamma t} sin^2(Omega t / 2) peaks just before the pi time; scan the first half period finely.
  const double pi_time = std::numbers::pi / calib.carrier_rabi;
  constexpr int kSamples = 4000;
  double best = 0.0;
  for (int k = 0; k <= kSamples; ++k) {
    const double t = 1.2 * pi_time * k / kSamples;
    const double s = std::sin(0.5 * calib.carrier_rabi * t);
    best = std::max(best, std::exp(-calib.residual_engine_decay * t) * s * s);
  }
  return best;
}

StrokeResult stroke_pump(const DensityMatrix<double>& rho, const CalibrationParams& calib,
                         const StrokeSettings& settings) {
  std::vector<DissipatorSpec> d = ambient_dissipators(calib);
  d.back() = DissipatorSpec::decay(calib.pump_rate + calib.residual_engine_decay);
  return run(rho, HamiltonianSchedule::none(calib.pump_duration), d, settings.evolve);
}

StrokeResult stroke_reset_superposition(const DensityMatrix<double>& rho, double p_target,
                                        const CalibrationParams& calib, const StrokeSettings& settings) {
  if (rho.factor() != Factor::joint) throw Error(ErrorKind::invalid_argument, "reset stroke needs a joint state");
  if (excited_population(rho) > kGroundTolerance)
    throw Error(ErrorKind::invalid_state, "reset stroke needs the engine in its ground state");
  const double dt = reset_pulse_duration(p_target, calib);
  if (p_target > max_reachable_population(calib) + kResetAccuracy)
    throw Error(ErrorKind::unreachable_target, "excited population not reachable under engine decay");
  if (dt == 0.0) return {rho, {}};
  return run(rho, HamiltonianSchedule::constant(carrier_hamiltonian(calib, rho.fock_dim()), dt),
             ambient_dissipators(calib), settings.evolve);
}

StrokeResult stroke_sideband_resonant(const DensityMatrix<double>& rho, SidebandKind kind,
                                      const CalibrationParams& calib, const StrokeSettings& settings) {
  // Half-Rabi-frequency convention: the n=0 <-> 1 transition completes at t = pi / (eta Omega_0).
  const double duration = settings.duration.value_or(calib.sideband_duration);
  const Operator<double> v = 0.5 * calib.sideband_rabi() * sideband_coupling(kind, rho.fock_dim(), settings.unit_coupling);
  return run(rho, HamiltonianSchedule::constant(v, duration), ambient_dissipators(calib), settings.evolve);
}

StrokeResult stroke_sideband_rap(const DensityMatrix<double>& rho, SidebandKind kind, const CalibrationParams& calib,
                                 const StrokeSettings& settings) {
  const Index fock_dim = rho.fock_dim();
  const double tau = calib.rap_duration;
  const double d0 = calib.rap_half_span;
  HamiltonianSchedule s;
  s.duration = tau;
  s.terms.push_back({lift(pauli(PauliKind::z), fock_dim), [d0, tau](double t) { return -d0 * (1.0 - 2.0 * t / tau); }});
  const double g = calib.sideband_rabi();
  s.terms.push_back({sideband_coupling(kind, fock_dim, settings.unit_coupling), [g](double) { return g; }});
  return run(rho, s, ambient_dissipators(calib), settings.evolve);
}

DensityMatrix<double> dephase_engine(const DensityMatrix<double>& rho) {
  if (rho.factor() != Factor::joint) throw Error(ErrorKind::invalid_argument, "dephase_engine needs a joint state");
  const Index n = rho.fock_dim();
  CMatrix<double> m = rho.matrix();
  m.topRightCorner(n, n).setZero();
  m.bottomLeftCorner(n, n).setZero();
  return DensityMatrix<double>(std::move(m), Factor::joint, rho.trace_tolerance());
}

DensityMatrix<double> initial_state(const CycleConfig& config) {
  return tensor(engine_state(kDown), thermal_state(config.initial_nbar, config.fock_dim));
}

ObservableSample observe(const DensityMatrix<double>& rho, double time, std::string stroke, int cycle) {
  const ThermoReport r = thermo_report(rho);
  ObservableSample s;
  s.time = time;
  s.stroke = std::move(stroke);
  s.cycle = cycle;
  s.p_D = excited_population(rho);
  s.mean_n = r.mean_n;
  s.entropy_nats = r.entropy_nats;
  s.ergotropy_hw = r.ergotropy_units_hw;
  s.ergotropy_diag_hw = r.ergotropy_diag_units_hw;
  s.mutual_info_nats = r.mutual_info_nats;
  return s;
}

namespace {

class Scheduler {
 public:
  explicit Scheduler(const CycleConfig& config) : config_(config), trace_{config, initial_state(config), {}, {}} {
    state_.emplace(trace_.initial_state);
    settings_.unit_coupling = config.ideal_transfer;
    settings_.evolve.step = config.step;
    if (config.ideal_timing) settings_.duration = std::numbers::pi / config.calib.sideband_rabi();
    trace_.series.push_back(observe(*state_, 0.0, "init", 0));
  }

  void stroke(const char* label, int cycle, std::optional<BoundaryPoint> point) {
    const std::string name = label;
    const auto& calib = config_.calib;
    double duration = 0.0;
    StrokeSettings settings = settings_;
    settings.evolve.snapshot_count = config_.samples_per_stroke;

    StrokeResult r{*state_, {}};
    if (name == "I_a" || name == "III") {
      duration = calib.pump_duration;
      r = stroke_pump(*state_, calib, settings);
    } else if (name == "I_b") {
      duration = reset_pulse_duration(config_.p_D_A, calib);
      r = stroke_reset_superposition(*state_, config_.p_D_A, calib, settings);
      if (config_.randomize_phase) r.state = dephase_engine(r.state);
    } else {
      const SidebandKind kind = name == "II" ? SidebandKind::red_jc : SidebandKind::blue_ajc;
      if (config_.protocol == Protocol::resonant) {
        duration = settings.duration.value_or(calib.sideband_duration);
        r = stroke_sideband_resonant(*state_, kind, calib, settings);
      } else {
        duration = calib.rap_duration;
        r = stroke_sideband_rap(*state_, kind, calib, settings);
      }
    }

    for (const auto& snap : r.snapshots)
      if (snap.time < duration) trace_.series.push_back(observe(snap.state, time_ + snap.time, name, cycle));
    time_ += duration;
    state_.emplace(std::move(r.state));
    trace_.series.push_back(observe(*state_, time_, name, cycle));
    if (point) trace_.boundaries.push_back({cycle, *point, time_, *state_});
  }

  SimulationTrace finish() && { return std::move(trace_); }

 private:
  const CycleConfig& config_;
  SimulationTrace trace_;
  std::optional<DensityMatrix<double>> state_;
  StrokeSettings settings_;
  double time_ = 0.0;
};

}  // namespace

SimulationTrace run_cycles(const CycleConfig& config, std::exception_ptr* failure) {
  config.validate();
  Scheduler s(config);
  using P = BoundaryPoint;
  const bool forward = config.direction == Direction::forward;
  try {
    if (config.lead_in_blue) s.stroke("IV", 0, P::D);
    for (int c = 1; c <= config.n_cycles; ++c) {
      s.stroke("I_a", c, std::nullopt);
      s.stroke("I_b", c, P::A);
      s.stroke(forward ? "II" : "IV", c, P::B);
      s.stroke("III", c, P::C);
      s.stroke(forward ? "IV" : "II", c, P::D);
    }
  } catch (const Error&) {
    if (!failure) throw;
    *failure = std::current_exception();
  }
  return std::move(s).finish();
}

}  // namespace ioncycle
