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

// Blue-sideband Rabi scans of the load and their inversion to occupation probabilities:
//   p_S(t) = sum_n p_n cos^2(eta sqrt(n+1) Omega_0 t) exp(-gamma_base sqrt(n+1) t)

#include <cstdint>

#include <Eigen/Dense>

#include "ioncycle/distribution.hpp"
#include "ioncycle/params.hpp"
#include "ioncycle/thermo.hpp"

namespace ioncycle {

inline constexpr double kDefaultGammaBase = 318.0;  // 1/s

struct RabiScan {
  Eigen::VectorXd times;    ///< s
  Eigen::VectorXd p_S;
  Eigen::VectorXd sigma_p;  ///< 1-sigma per point
  int shots_per_point = 150;

  void validate() const;
};

/// `points` times spaced by `spacing` starting at 0 (default 0, 3, ..., 102 us).
Eigen::VectorXd scan_grid(int points = 35, double spacing = 3e-6);
/// 200 points from 0 to 600 us.
Eigen::VectorXd reference_grid();

/// Design matrix: column n is the signal of a pure Fock state |n>.
Eigen::MatrixXd rabi_design(const Eigen::VectorXd& times, Index levels, const CalibrationParams& calib,
                            double gamma_base = kDefaultGammaBase);

Eigen::VectorXd rabi_signal(const PhononDistribution& p, const Eigen::VectorXd& times, const CalibrationParams& calib,
                            double gamma_base = kDefaultGammaBase);

/// Binomial(shots, p_S) / shots per point, from a 64-bit Mersenne twister seeded with `seed`.
RabiScan sample_scan(const Eigen::VectorXd& times, const Eigen::VectorXd& ideal_p_S, int shots, std::uint64_t seed);

/// Noise-free scan: p_S as given, sigma at the floor sqrt(0.25 / shots) / 10.
RabiScan exact_scan(const Eigen::VectorXd& times, const Eigen::VectorXd& p_S, int shots = 150);

/// Load distribution seen by a scan of a joint state: the engine is pumped to |down> first.
PhononDistribution measured_distribution(const DensityMatrix<double>& joint, const CalibrationParams& calib);

struct FitOptions {
  double box_halfwidth = 0.05;  ///< absolute, around the prior, clipped to [0, 1]
  Index n_levels = 14;
  double gamma_base = kDefaultGammaBase;
  int max_iterations = 0;  ///< active-set iterations; 0 = 10 * n_levels + 10
};

struct FitResult {
  PhononDistribution p_fit;  ///< with per-level sigma (zero for levels held at the prior)
  double reduced_chi2 = 0.0;
  double chi2 = 0.0;
  Index n_levels_used = 0;
  PhononDistribution prior;
  int iterations = 0;
};

/// Box-constrained weighted least squares on the lowest n_levels occupations; higher levels are
/// held at the prior. The solution is projected onto the box intersected with sum p = 1.
FitResult fit_distribution(const RabiScan& scan, const PhononDistribution& prior, const CalibrationParams& calib,
                           const FitOptions& options = {});

/// Mean, diagonal entropy and diagonal ergotropy of the fit, with first-order propagated errors.
ThermoReport reconstruct_observables(const FitResult& fit);

}  // namespace ioncycle
