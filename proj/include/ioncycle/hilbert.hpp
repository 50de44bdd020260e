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

// Truncated engine (qubit) x load (oscillator) Hilbert space.
//
// Conventions used everywhere in ioncycle:
//   * engine basis: index 0 = |up> (excited, D level), index 1 = |down> (ground, S level)
//   * tensor products put the engine factor leftmost: joint index = s * fock_dim + n
//   * Hamiltonians are angular frequencies (hbar = 1), energies of the load in units of hbar*omega

#include <cmath>
#include <complex>
#include <utility>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "ioncycle/error.hpp"

namespace ioncycle {

using Eigen::Index;

template <typename Scalar>
using CMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using RVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

enum class Factor { engine, load, joint };

inline constexpr Index kEngineDim = 2;
inline constexpr Index kUp = 0;
inline constexpr Index kDown = 1;

struct SpaceConfig {
  Index fock_dim = 40;

  Index joint_dim() const { return kEngineDim * fock_dim; }
  void validate() const {
    if (fock_dim < 2) throw Error(ErrorKind::invalid_config, "fock_dim must be >= 2");
  }
};

/// Square complex matrix tagged with the tensor factor it acts on.
template <typename Scalar = double>
class Operator {
 public:
  using scalar_type = Scalar;
  using Matrix = CMatrix<Scalar>;

  Operator(Matrix entries, Factor factor) : m_(std::move(entries)), factor_(factor) {
    if (m_.rows() != m_.cols()) throw Error(ErrorKind::invalid_argument, "operator must be square");
    switch (factor_) {
      case Factor::engine:
        if (m_.rows() != kEngineDim) throw Error(ErrorKind::invalid_argument, "engine operator must be 2x2");
        break;
      case Factor::load:
        if (m_.rows() < 2) throw Error(ErrorKind::invalid_argument, "load operator needs fock_dim >= 2");
        break;
      case Factor::joint:
        if (m_.rows() < 4 || m_.rows() % 2 != 0)
          throw Error(ErrorKind::invalid_argument, "joint operator dimension must be 2 * fock_dim");
        break;
    }
  }

  Index dim() const { return m_.rows(); }
  Factor factor() const { return factor_; }
  const Matrix& matrix() const { return m_; }

  /// Number of load levels this operator knows about (0 for engine operators).
  Index fock_dim() const {
    switch (factor_) {
      case Factor::engine: return 0;
      case Factor::load: return m_.rows();
      case Factor::joint: return m_.rows() / kEngineDim;
    }
    return 0;
  }

  Operator adjoint() const { return Operator(m_.adjoint(), factor_); }
  std::complex<Scalar> trace() const { return m_.trace(); }

  Operator& operator+=(const Operator& other) {
    require_compatible(other);
    m_ += other.m_;
    return *this;
  }
  Operator& operator-=(const Operator& other) {
    require_compatible(other);
    m_ -= other.m_;
    return *this;
  }
  Operator& operator*=(std::complex<Scalar> s) {
    m_ *= s;
    return *this;
  }

  friend Operator operator+(Operator a, const Operator& b) { return a += b; }
  friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
  friend Operator operator*(Operator a, std::complex<Scalar> s) { return a *= s; }
  friend Operator operator*(std::complex<Scalar> s, Operator a) { return a *= s; }
  friend Operator operator*(const Operator& a, const Operator& b) {
    a.require_compatible(b);
    return Operator(a.m_ * b.m_, a.factor_);
  }

  void require_compatible(const Operator& other) const {
    if (factor_ != other.factor_ || dim() != other.dim())
      throw Error(ErrorKind::invalid_argument, "operators act on different spaces");
  }

 private:
  Matrix m_;
  Factor factor_;
};

/// A validated state: hermitian, unit trace, numerically positive.
template <typename Scalar = double>
class DensityMatrix {
 public:
  using scalar_type = Scalar;
  using Matrix = CMatrix<Scalar>;

  static constexpr Scalar kHermitianTolerance = Scalar(1e-10);
  static constexpr Scalar kPositivityTolerance = Scalar(1e-8);

  explicit DensityMatrix(Operator<Scalar> op, Scalar trace_tolerance = Scalar(1e-6))
      : op_(std::move(op)), trace_tolerance_(trace_tolerance) {
    const Matrix& m = op_.matrix();
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance)
      throw Error(ErrorKind::invalid_state, "density matrix is not hermitian");
    if (std::abs(m.trace().real() - Scalar(1)) > trace_tolerance_ || std::abs(m.trace().imag()) > trace_tolerance_)
      throw Error(ErrorKind::invalid_state, "density matrix trace deviates from 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kPositivityTolerance)
      throw Error(ErrorKind::invalid_state, "density matrix has a negative eigenvalue");
  }

  DensityMatrix(Matrix m, Factor factor, Scalar trace_tolerance = Scalar(1e-6))
      : DensityMatrix(Operator<Scalar>(std::move(m), factor), trace_tolerance) {}

  const Operator<Scalar>& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }
  Factor factor() const { return op_.factor(); }
  Index dim() const { return op_.dim(); }
  Index fock_dim() const { return op_.fock_dim(); }
  Scalar trace_tolerance() const { return trace_tolerance_; }

  /// Occupation of each basis state (the real diagonal).
  RVector<Scalar> populations() const { return matrix().diagonal().real(); }

 private:
  Operator<Scalar> op_;
  Scalar trace_tolerance_;
};

// ---------------------------------------------------------------------------
// Operator constructors

template <typename Scalar = double>
Operator<Scalar> identity(Factor factor, Index fock_dim = 2) {
  const Index d = factor == Factor::engine ? kEngineDim : factor == Factor::load ? fock_dim : kEngineDim * fock_dim;
  return Operator<Scalar>(CMatrix<Scalar>::Identity(d, d), factor);
}

/// Truncated annihilation operator: a[m, m+1] = sqrt(m+1).
template <typename Scalar = double>
Operator<Scalar> destroy(Index fock_dim) {
  if (fock_dim < 2) throw Error(ErrorKind::invalid_config, "fock_dim must be >= 2");
  CMatrix<Scalar> a = CMatrix<Scalar>::Zero(fock_dim, fock_dim);
  for (Index m = 0; m + 1 < fock_dim; ++m) a(m, m + 1) = std::sqrt(Scalar(m + 1));
  return Operator<Scalar>(std::move(a), Factor::load);
}

template <typename Scalar = double>
Operator<Scalar> create(Index fock_dim) {
  return destroy<Scalar>(fock_dim).adjoint();
}

template <typename Scalar = double>
Operator<Scalar> number(Index fock_dim) {
  if (fock_dim < 2) throw Error(ErrorKind::invalid_config, "fock_dim must be >= 2");
  CMatrix<Scalar> n = CMatrix<Scalar>::Zero(fock_dim, fock_dim);
  for (Index m = 0; m < fock_dim; ++m) n(m, m) = Scalar(m);
  return Operator<Scalar>(std::move(n), Factor::load);
}

/// Normalised lowering operator sum_n |n><n+1|: every sideband matrix element equals one.
template <typename Scalar = double>
Operator<Scalar> unit_lowering(Index fock_dim) {
  if (fock_dim < 2) throw Error(ErrorKind::invalid_config, "fock_dim must be >= 2");
  CMatrix<Scalar> e = CMatrix<Scalar>::Zero(fock_dim, fock_dim);
  for (Index m = 0; m + 1 < fock_dim; ++m) e(m, m + 1) = Scalar(1);
  return Operator<Scalar>(std::move(e), Factor::load);
}

enum class PauliKind { z, plus, minus, x };

template <typename Scalar = double>
Operator<Scalar> pauli(PauliKind kind) {
  CMatrix<Scalar> m = CMatrix<Scalar>::Zero(kEngineDim, kEngineDim);
  switch (kind) {
    case PauliKind::z:
      m(kUp, kUp) = 1;
      m(kDown, kDown) = -1;
      break;
    case PauliKind::plus: m(kUp, kDown) = 1; break;
    case PauliKind::minus: m(kDown, kUp) = 1; break;
    case PauliKind::x:
      m(kUp, kDown) = 1;
      m(kDown, kUp) = 1;
      break;
  }
  return Operator<Scalar>(std::move(m), Factor::engine);
}

template <typename Scalar>
Operator<Scalar> tensor(const Operator<Scalar>& engine_op, const Operator<Scalar>& load_op) {
  if (engine_op.factor() != Factor::engine || load_op.factor() != Factor::load)
    throw Error(ErrorKind::invalid_argument, "tensor expects (engine, load) operators");
  CMatrix<Scalar> k = Eigen::kroneckerProduct(engine_op.matrix(), load_op.matrix());
  return Operator<Scalar>(std::move(k), Factor::joint);
}

template <typename Scalar>
Operator<Scalar> lift(const Operator<Scalar>& op, Index fock_dim) {
  if (op.factor() == Factor::engine) return tensor(op, identity<Scalar>(Factor::load, fock_dim));
  if (op.factor() == Factor::load) return tensor(identity<Scalar>(Factor::engine), op);
  return op;
}

// ---------------------------------------------------------------------------
// States

template <typename Scalar>
DensityMatrix<Scalar> tensor(const DensityMatrix<Scalar>& engine, const DensityMatrix<Scalar>& load) {
  return DensityMatrix<Scalar>(tensor(engine.op(), load.op()));
}

template <typename Scalar = double>
DensityMatrix<Scalar> engine_state(Index level) {
  CMatrix<Scalar> m = CMatrix<Scalar>::Zero(kEngineDim, kEngineDim);
  m(level, level) = 1;
  return DensityMatrix<Scalar>(std::move(m), Factor::engine);
}

template <typename Scalar = double>
DensityMatrix<Scalar> fock_state(Index n, Index fock_dim) {
  if (n < 0 || n >= fock_dim) throw Error(ErrorKind::invalid_argument, "Fock level outside truncation");
  CMatrix<Scalar> m = CMatrix<Scalar>::Zero(fock_dim, fock_dim);
  m(n, n) = 1;
  return DensityMatrix<Scalar>(std::move(m), Factor::load);
}

/// |psi><psi| for a (not necessarily normalised) vector; the result is normalised.
template <typename Scalar, typename Derived>
DensityMatrix<Scalar> pure_state(const Eigen::MatrixBase<Derived>& psi, Factor factor) {
  const Scalar norm = psi.norm();
  if (norm == Scalar(0)) throw Error(ErrorKind::invalid_argument, "zero state vector");
  CMatrix<Scalar> m = (psi / norm) * (psi / norm).adjoint();
  return DensityMatrix<Scalar>(std::move(m), factor);
}

/// Thermal load state, renormalised over the retained levels.
template <typename Scalar = double>
DensityMatrix<Scalar> thermal_state(Scalar nbar, Index fock_dim) {
  if (!(nbar >= Scalar(0))) throw Error(ErrorKind::invalid_argument, "nbar must be >= 0");
  if (fock_dim < 2) throw Error(ErrorKind::invalid_config, "fock_dim must be >= 2");
  RVector<Scalar> p(fock_dim);
  const Scalar ratio = nbar / (Scalar(1) + nbar);
  for (Index n = 0; n < fock_dim; ++n) p(n) = std::pow(ratio, Scalar(n)) / (Scalar(1) + nbar);
  p /= p.sum();
  CMatrix<Scalar> m = p.template cast<std::complex<Scalar>>().asDiagonal();
  return DensityMatrix<Scalar>(std::move(m), Factor::load);
}

enum class Keep { engine, load };

/// Reduced state on the kept factor of a joint state.
template <typename Scalar>
DensityMatrix<Scalar> partial_trace(const DensityMatrix<Scalar>& rho, Keep keep) {
  if (rho.factor() != Factor::joint) throw Error(ErrorKind::invalid_argument, "partial_trace needs a joint state");
  const Index n = rho.fock_dim();
  const auto& m = rho.matrix();
  if (keep == Keep::load) {
    CMatrix<Scalar> r = m.topLeftCorner(n, n) + m.bottomRightCorner(n, n);
    return DensityMatrix<Scalar>(std::move(r), Factor::load, rho.trace_tolerance());
  }
  CMatrix<Scalar> r(kEngineDim, kEngineDim);
  for (Index s = 0; s < kEngineDim; ++s)
    for (Index t = 0; t < kEngineDim; ++t) r(s, t) = m.block(s * n, t * n, n, n).trace();
  return DensityMatrix<Scalar>(std::move(r), Factor::engine, rho.trace_tolerance());
}

template <typename Scalar>
std::complex<Scalar> expectation(const DensityMatrix<Scalar>& rho, const Operator<Scalar>& obs) {
  if (rho.dim() != obs.dim() || rho.factor() != obs.factor())
    throw Error(ErrorKind::invalid_argument, "observable does not act on the state's space");
  // tr(rho * obs) without forming the product
  return (rho.matrix().transpose().cwiseProduct(obs.matrix())).sum();
}

/// Mean phonon number of a load or joint state.
template <typename Scalar>
Scalar mean_phonon(const DensityMatrix<Scalar>& rho) {
  const Index n = rho.fock_dim();
  if (n == 0) throw Error(ErrorKind::invalid_argument, "engine states carry no phonons");
  const auto diag = rho.matrix().diagonal().real();
  Scalar acc = 0;
  for (Index i = 0; i < rho.dim(); ++i) acc += Scalar(i % n) * diag(i);
  return acc;
}

/// Population of the engine's excited level |up>.
template <typename Scalar>
Scalar excited_population(const DensityMatrix<Scalar>& rho) {
  if (rho.factor() == Factor::engine) return rho.matrix()(kUp, kUp).real();
  if (rho.factor() != Factor::joint) throw Error(ErrorKind::invalid_argument, "load states have no engine");
  const Index n = rho.fock_dim();
  return rho.matrix().diagonal().head(n).real().sum();
}

/// Occupation p_n of each load level (engine traced out).
template <typename Scalar>
RVector<Scalar> load_populations(const DensityMatrix<Scalar>& rho) {
  const Index n = rho.fock_dim();
  if (n == 0) throw Error(ErrorKind::invalid_argument, "engine states carry no phonons");
  RVector<Scalar> p = RVector<Scalar>::Zero(n);
  const auto diag = rho.matrix().diagonal().real();
  for (Index i = 0; i < rho.dim(); ++i) p(i % n) += diag(i);
  return p;
}

}  // namespace ioncycle
