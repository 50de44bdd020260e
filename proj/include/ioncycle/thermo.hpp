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

// Thermodynamic and information functionals of load and joint states.
// Energies are in units of hbar*omega, entropies in nats.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ioncycle/distribution.hpp"
#include "ioncycle/error.hpp"
#include "ioncycle/hilbert.hpp"
#include "ioncycle/trace.hpp"

namespace ioncycle {

struct ThermoSigma {
  double mean_n = 0.0;
  double entropy_nats = 0.0;
  double ergotropy_units_hw = 0.0;
};

struct ThermoReport {
  double mean_n = 0.0;
  double entropy_nats = 0.0;
  double ergotropy_units_hw = 0.0;
  double ergotropy_diag_units_hw = 0.0;
  double mutual_info_nats = 0.0;  // joint states only
  std::optional<ThermoSigma> sigma;
};

namespace detail {

template <typename Scalar>
RVector<Scalar> eigenvalues_checked(const DensityMatrix<Scalar>& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix<Scalar>> es(rho.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::invalid_state, "eigendecomposition failed");
  RVector<Scalar> w = es.eigenvalues();
  if (w.minCoeff() < -DensityMatrix<Scalar>::kPositivityTolerance)
    throw Error(ErrorKind::invalid_state, "state is not positive semidefinite");
  return w;
}

template <typename Scalar, typename Derived>
Scalar entropy_of(const Eigen::MatrixBase<Derived>& weights) {
  Scalar s = 0;
  for (Index i = 0; i < weights.size(); ++i) {
    const Scalar w = weights(i);
    if (w > Scalar(0)) s -= w * std::log(w);
  }
  return std::max(s, Scalar(0));
}

}  // namespace detail

/// Energy of the passive arrangement of `weights`: largest weight on level 0, and so on.
/// Ties keep their input order (stable sort); the energy does not depend on it.
template <typename Derived>
typename Derived::Scalar passive_energy(const Eigen::MatrixBase<Derived>& weights) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v = weights.reshaped();
  std::vector<Scalar> w(v.begin(), v.end());
  std::stable_sort(w.begin(), w.end(), std::greater<Scalar>());
  Scalar e = 0;
  for (std::size_t n = 0; n < w.size(); ++n) e += Scalar(n) * w[n];
  return e;
}

/// Ergotropy of a load state: tr[H rho] - tr[H rho_passive], from the eigenvalues of rho.
template <typename Scalar>
Scalar ergotropy(const DensityMatrix<Scalar>& rho_load) {
  if (rho_load.factor() != Factor::load) throw Error(ErrorKind::invalid_argument, "ergotropy needs a load state");
  const RVector<Scalar> w = detail::eigenvalues_checked(rho_load);
  const Scalar energy = mean_phonon(rho_load);
  return std::max(Scalar(0), energy - passive_energy(w));
}

/// Ergotropy of the dephased state diag(p): only the occupation probabilities are used.
template <typename Derived>
double ergotropy_diagonal(const Eigen::MatrixBase<Derived>& p) {
  if (p.size() == 0) throw Error(ErrorKind::invalid_distribution, "empty distribution");
  if (p.minCoeff() < -1e-9) throw Error(ErrorKind::invalid_distribution, "negative probability");
  if (std::abs(p.sum() - 1.0) > 1e-6) throw Error(ErrorKind::invalid_distribution, "probabilities do not sum to 1");
  const Eigen::VectorXd pd = p.template cast<double>();
  const double energy = Eigen::VectorXd::LinSpaced(pd.size(), 0.0, double(pd.size() - 1)).dot(pd);
  return std::max(0.0, energy - passive_energy(pd));
}

inline double ergotropy_diagonal(const PhononDistribution& p) { return ergotropy_diagonal(p.probs()); }

template <typename Scalar>
Scalar von_neumann_entropy(const DensityMatrix<Scalar>& rho) {
  return detail::entropy_of<Scalar>(detail::eigenvalues_checked(rho));
}

/// Shannon entropy of the occupation probabilities (entropy of the dephased state).
template <typename Derived>
double diagonal_entropy(const Eigen::MatrixBase<Derived>& p) {
  return detail::entropy_of<double>(p.template cast<double>());
}

inline double diagonal_entropy(const PhononDistribution& p) { return diagonal_entropy(p.probs()); }

/// Quantum mutual information S_E + S_L - S_EL of a joint state.
template <typename Scalar>
Scalar mutual_information(const DensityMatrix<Scalar>& joint) {
  if (joint.factor() != Factor::joint) throw Error(ErrorKind::invalid_argument, "mutual information needs a joint state");
  const Scalar s_e = von_neumann_entropy(partial_trace(joint, Keep::engine));
  const Scalar s_l = von_neumann_entropy(partial_trace(joint, Keep::load));
  const Scalar s_j = von_neumann_entropy(joint);
  return std::max(Scalar(0), s_e + s_l - s_j);
}

/// All functionals of the load, computed from one eigendecomposition per space.
template <typename Scalar>
ThermoReport thermo_report(const DensityMatrix<Scalar>& rho) {
  ThermoReport r;
  if (rho.factor() == Factor::engine) throw Error(ErrorKind::invalid_argument, "thermo_report needs a load or joint state");
  const DensityMatrix<Scalar> load = rho.factor() == Factor::joint ? partial_trace(rho, Keep::load) : rho;
  const RVector<Scalar> w = detail::eigenvalues_checked(load);
  const RVector<Scalar> p = load_populations(load);
  r.mean_n = double(mean_phonon(load));
  r.entropy_nats = double(detail::entropy_of<Scalar>(w));
  r.ergotropy_units_hw = std::max(0.0, r.mean_n - double(passive_energy(w)));
  r.ergotropy_diag_units_hw = std::max(0.0, r.mean_n - double(passive_energy(p)));
  if (rho.factor() == Factor::joint) {
    const Scalar s_e = von_neumann_entropy(partial_trace(rho, Keep::engine));
    const Scalar s_j = von_neumann_entropy(rho);
    r.mutual_info_nats = std::max(0.0, double(s_e + Scalar(r.entropy_nats) - s_j));
  }
  return r;
}

/// Quanta-conversion efficiency of a forward run: mean per-cycle gain in <n> divided by
/// the mean excited population after the two coupling strokes (points B and D).
double quanta_efficiency(const SimulationTrace& trace);

/// Same ratio from already averaged numbers.
inline double quanta_efficiency(double delta_n_per_cycle, double mean_p_D_B, double mean_p_D_D) {
  const double invested = mean_p_D_B + mean_p_D_D;
  if (!(invested > 0.0)) throw Error(ErrorKind::invalid_argument, "no photon quanta invested");
  return delta_n_per_cycle / invested;
}

}  // namespace ioncycle
