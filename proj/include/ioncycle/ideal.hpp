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

// Lossless, perfect-transfer cycle as maps on phonon distributions. The cycle starts at point C_0
// (|down, 0>) with stroke IV, so stage C of cycle N carries the binomial
//   p_{2k} = C(N, k) p^k (1 - p)^(N - k)
// and stage D/A carries the same weights one level higher.

#include <vector>

#include "ioncycle/distribution.hpp"

namespace ioncycle {

enum class IdealStrokeKind { iv_blue, ii_red_after_reset };

struct IdealStroke {
  IdealStrokeKind kind = IdealStrokeKind::iv_blue;
  double p_D_A = 0.0;  ///< reset population, II only

  static IdealStroke blue() { return {IdealStrokeKind::iv_blue, 0.0}; }
  static IdealStroke red(double p_D_A) { return {IdealStrokeKind::ii_red_after_reset, p_D_A}; }
};

enum class IdealStageLabel { C, DA, B };

struct IdealStage {
  IdealStageLabel label = IdealStageLabel::C;
  int cycle_index = 0;
};

/// One stroke on the load distribution. The engine is |down> before IV; II acts on the reset
/// superposition and is followed by the pump, so both outputs leave the engine in |down>.
PhononDistribution ideal_step_map(const PhononDistribution& p, const IdealStroke& stroke);

/// Closed-form distribution at a stage point, on at least `min_levels` levels.
PhononDistribution ideal_distribution(int n_cycles, double p_D_A, IdealStageLabel stage, Index min_levels = 0);
PhononDistribution ideal_distribution(const IdealStage& stage, double p_D_A, Index min_levels = 0);

struct EntropyFit {
  double a = 0.0;  ///< S = a + b ln N
  double b = 0.0;
  double max_relative_residual = 0.0;
};

struct ErgotropyFit {
  double c = 0.0;  ///< E = c N - alpha sqrt(N)
  double alpha = 0.0;
  double max_relative_residual = 0.0;
};

struct ScalingReport {
  double delta_n_per_cycle = 0.0;
  std::vector<double> entropy_series;    ///< stage C, index = N_c, nats
  std::vector<double> ergotropy_series;  ///< stage C, index = N_c, units of hbar*omega
  EntropyFit entropy_fit;
  ErgotropyFit ergotropy_fit;
  int fit_first = 0;
  int fit_last = 0;
};

/// Series for N_c = 0..max_cycles and least-squares fits over [fit_first, fit_last]
/// (default: the last half of the range).
ScalingReport ideal_scaling_report(double p_D_A, int max_cycles, int fit_first = -1, int fit_last = -1);

}  // namespace ioncycle
