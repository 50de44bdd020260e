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

// Markovian master-equation integration for the joint engine+load state:
//
//   drho/dt = -i [H(t), rho] + sum_k D_k(rho)
//
// with H in rad/s (hbar = 1). Integration is fixed-step classical Runge-Kutta.

#include <functional>
#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "ioncycle/hilbert.hpp"

namespace ioncycle {

enum class DissipatorKind { load_dephasing, load_heating, engine_decay };

struct DissipatorSpec {
  DissipatorKind kind = DissipatorKind::engine_decay;
  double rate = 0.0;  ///< 1/s
  double n_m = 0.0;   ///< target occupation, heating only

  static DissipatorSpec dephasing(double rate) { return {DissipatorKind::load_dephasing, rate, 0.0}; }
  static DissipatorSpec heating(double rate, double n_m) { return {DissipatorKind::load_heating, rate, n_m}; }
  static DissipatorSpec decay(double rate) { return {DissipatorKind::engine_decay, rate, 0.0}; }

  void validate() const;
};

struct ScheduleTerm {
  Operator<double> op;                      ///< joint operator
  std::function<double(double)> coefficient;  ///< real coefficient over [0, duration]
};

struct HamiltonianSchedule {
  std::vector<ScheduleTerm> terms;
  double duration = 0.0;

  /// One time-independent term.
  static HamiltonianSchedule constant(Operator<double> op, double duration);
  /// No Hamiltonian at all: pure dissipation.
  static HamiltonianSchedule none(double duration);

  void validate() const;
};

struct Snapshot {
  double time = 0.0;
  DensityMatrix<double> state;
};

struct EvolutionResult {
  DensityMatrix<double> final_state;
  std::vector<Snapshot> snapshots;
  long step_count = 0;
  double step = 0.0;
};

struct EvolveOptions {
  double step = 0.0;           ///< s; 0 selects default_step()
  int snapshot_every = 0;      ///< record a snapshot every k steps (0 = none)
  int snapshot_count = 0;      ///< alternative to snapshot_every: about this many evenly spaced snapshots
  double trace_tolerance = 1e-6;
  double truncation_guard = 1e-6;  ///< max population of the two top Fock levels; < 0 disables
  /// Entries of rho0 at or below this magnitude are treated as zero when choosing which matrix
  /// elements to integrate (0 keeps every nonzero entry).
  double support_threshold = 1e-14;
};

/// -i[H, rho] + dissipators, evaluated directly on dense matrices.
Operator<double> lindblad_rhs(const DensityMatrix<double>& rho, const Operator<double>& hamiltonian,
                              std::span<const DissipatorSpec> dissipators);

/// min(1 / (50 * fastest rate), duration / 200), where the fastest rate is the larger of the
/// summed Hamiltonian term norms and the largest dissipator rate.
double default_step(const HamiltonianSchedule& schedule, std::span<const DissipatorSpec> dissipators);

EvolutionResult evolve(const DensityMatrix<double>& rho0, const HamiltonianSchedule& schedule,
                       std::span<const DissipatorSpec> dissipators, const EvolveOptions& options = {});

/// The generator as a sparse superoperator acting on column-major vec(rho), restricted to the
/// matrix elements reachable from a given initial support. Entries outside that closure stay zero
/// under the exact dynamics, so dropping them changes nothing but the cost.
class LindbladGenerator {
 public:
  using Vector = Eigen::VectorXcd;
  using Dense = CMatrix<double>;

  LindbladGenerator(const HamiltonianSchedule& schedule, std::span<const DissipatorSpec> dissipators,
                    const Dense& support);

  /// Number of matrix elements being integrated.
  Index size() const { return index_.size(); }

  Vector gather(const Dense& rho) const;
  void scatter(const Vector& x, Dense& rho) const;

  /// out = d vec(rho) / dt at time t, on the reduced element set.
  void apply(double t, const Vector& x, Vector& out) const;

 private:
  using Sparse = Eigen::SparseMatrix<std::complex<double>, Eigen::RowMajor>;
  Index dim_ = 0;
  std::vector<Index> index_;  // reduced -> full vec index
  Sparse fixed_;  // dissipators
  std::vector<Sparse> terms_;
  std::vector<std::function<double(double)>> coefficients_;
};

}  // namespace ioncycle
