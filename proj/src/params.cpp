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

#include "ioncycle/params.hpp"

#include <cmath>
#include <string>

namespace ioncycle {

namespace {

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorKind::invalid_config, std::string(name) + " must be finite and >= 0");
}

}  // namespace

void CalibrationParams::validate() const {
  require_nonnegative(omega, "omega");
  require_nonnegative(carrier_rabi, "carrier_rabi");
  require_nonnegative(lamb_dicke, "lamb_dicke");
  require_nonnegative(pump_rate, "pump_rate");
  require_nonnegative(pump_duration, "pump_duration");
  require_nonnegative(dephasing_rate, "dephasing_rate");
  require_nonnegative(heating_rate, "heating_rate");
  require_nonnegative(heating_target, "heating_target");
  require_nonnegative(residual_engine_decay, "residual_engine_decay");
  require_nonnegative(sideband_duration, "sideband_duration");
  require_nonnegative(rap_half_span, "rap_half_span");
  require_nonnegative(rap_duration, "rap_duration");
  if (!std::isfinite(laser_phase)) throw Error(ErrorKind::invalid_config, "laser_phase must be finite");
  if (!(lamb_dicke < 1.0)) throw Error(ErrorKind::invalid_config, "lamb_dicke must be < 1");
  if (!(carrier_rabi > 0.0)) throw Error(ErrorKind::invalid_config, "carrier_rabi must be > 0");
  if (pump_duration < 5e-6 || pump_duration > 50e-6)
    throw Error(ErrorKind::invalid_config, "pump_duration must lie in [5, 50] us");
}

void CycleConfig::validate() const {
  calib.validate();
  if (!(p_D_A >= 0.0 && p_D_A <= 1.0)) throw Error(ErrorKind::invalid_config, "p_D_A must lie in [0, 1]");
  if (n_cycles < 0) throw Error(ErrorKind::invalid_config, "n_cycles must be >= 0");
  require_nonnegative(initial_nbar, "initial_nbar");
  if (fock_dim < 2 || fock_dim > 400) throw Error(ErrorKind::invalid_config, "fock_dim must lie in [2, 400]");
  if (samples_per_stroke < 0) throw Error(ErrorKind::invalid_config, "samples_per_stroke must be >= 0");
  require_nonnegative(step, "step");
  if (ideal_timing && !(calib.sideband_rabi() > 0.0))
    throw Error(ErrorKind::invalid_config, "ideal_timing needs a nonzero sideband Rabi frequency");
}

CycleConfig CycleConfig::ideal(double p_D_A, int n_cycles, Index fock_dim) {
  CycleConfig c;
  c.p_D_A = p_D_A;
  c.n_cycles = n_cycles;
  c.fock_dim = fock_dim;
  c.initial_nbar = 0.0;
  c.calib.dephasing_rate = 0.0;
  c.calib.heating_rate = 0.0;
  c.calib.residual_engine_decay = 0.0;
  // e^{-gamma t / 2} of the engine coherence must vanish below 1e-6 after pumping
  c.calib.pump_duration = 50e-6;
  c.ideal_timing = true;
  c.ideal_transfer = true;
  c.randomize_phase = false;
  c.lead_in_blue = true;
  return c;
}

}  // namespace ioncycle
