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

#include "ioncycle/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

namespace ioncycle {

namespace {

using cd = std::complex<double>;
using Sparse = Eigen::SparseMatrix<cd>;
using SparseCol = Eigen::SparseMatrix<cd>;
using Dense = LindbladGenerator::Dense;

Sparse to_sparse(const CMatrix<double>& m) {
  Sparse s = m.sparseView(1.0, 0.0);
  s.makeCompressed();
  return s;
}

SparseCol kron(const Sparse& a, const Sparse& b) {
  SparseCol k = Eigen::kroneckerProduct(a, b);
  k.prune(cd(0.0));
  return k;
}

// Jump operators of a dissipator, already scaled by sqrt(rate), as joint dense matrices.
std::vector<CMatrix<double>> jump_operators(const DissipatorSpec& d, Index fock_dim) {
  std::vector<CMatrix<double>> out;
  if (d.rate == 0.0) return out;
  switch (d.kind) {
    case DissipatorKind::load_dephasing:
      out.push_back(std::sqrt(d.rate) * lift(number(fock_dim), fock_dim).matrix());
      break;
    case DissipatorKind::load_heating:
      if (d.n_m > 0.0) out.push_back(std::sqrt(d.rate * d.n_m) * lift(create(fock_dim), fock_dim).matrix());
      out.push_back(std::sqrt(d.rate * (1.0 + d.n_m)) * lift(destroy(fock_dim), fock_dim).matrix());
      break;
    case DissipatorKind::engine_decay:
      out.push_back(std::sqrt(d.rate) * lift(pauli(PauliKind::minus), fock_dim).matrix());
      break;
  }
  return out;
}

double infinity_norm(const CMatrix<double>& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

double max_abs_coefficient(const ScheduleTerm& term, double duration) {
  constexpr int kProbes = 64;
  double best = 0.0;
  for (int k = 0; k <= kProbes; ++k) best = std::max(best, std::abs(term.coefficient(duration * k / kProbes)));
  return best;
}

}  // namespace

void DissipatorSpec::validate() const {
  if (!(rate >= 0.0) || !std::isfinite(rate)) throw Error(ErrorKind::invalid_config, "dissipator rate must be >= 0");
  if (!(n_m >= 0.0) || !std::isfinite(n_m)) throw Error(ErrorKind::invalid_config, "n_m must be >= 0");
  if (kind != DissipatorKind::load_heating && n_m != 0.0)
    throw Error(ErrorKind::invalid_config, "n_m only applies to load heating");
}

HamiltonianSchedule HamiltonianSchedule::constant(Operator<double> op, double duration) {
  HamiltonianSchedule s;
  s.terms.push_back({std::move(op), [](double) { return 1.0; }});
  s.duration = duration;
  return s;
}

HamiltonianSchedule HamiltonianSchedule::none(double duration) {
  HamiltonianSchedule s;
  s.duration = duration;
  return s;
}

void HamiltonianSchedule::validate() const {
  if (!(duration >= 0.0) || !std::isfinite(duration)) throw Error(ErrorKind::invalid_argument, "duration must be >= 0");
  for (const auto& t : terms) {
    if (t.op.factor() != Factor::joint) throw Error(ErrorKind::invalid_argument, "schedule terms must be joint operators");
    if (!t.coefficient) throw Error(ErrorKind::invalid_argument, "schedule term without coefficient");
    if (!std::isfinite(t.coefficient(0.0)) || !std::isfinite(t.coefficient(duration)))
      throw Error(ErrorKind::invalid_argument, "schedule coefficient is not finite");
  }
}

Operator<double> lindblad_rhs(const DensityMatrix<double>& rho, const Operator<double>& hamiltonian,
                              std::span<const DissipatorSpec> dissipators) {
  if (rho.factor() != Factor::joint || hamiltonian.factor() != Factor::joint || rho.dim() != hamiltonian.dim())
    throw Error(ErrorKind::invalid_argument, "lindblad_rhs needs a joint state and Hamiltonian of equal size");
  const auto& r = rho.matrix();
  const auto& h = hamiltonian.matrix();
  CMatrix<double> out = cd(0, -1) * (h * r - r * h);
  for (const auto& d : dissipators) {
    d.validate();
    for (const auto& l : jump_operators(d, rho.fock_dim())) {
      const CMatrix<double> ldl = l.adjoint() * l;
      out += l * r * l.adjoint() - 0.5 * (ldl * r + r * ldl);
    }
  }
  return Operator<double>(std::move(out), Factor::joint);
}

double default_step(const HamiltonianSchedule& schedule, std::span<const DissipatorSpec> dissipators) {
  double hamiltonian_rate = 0.0;
  for (const auto& t : schedule.terms)
    hamiltonian_rate += max_abs_coefficient(t, schedule.duration) * infinity_norm(t.op.matrix());
  double dissipator_rate = 0.0;
  for (const auto& d : dissipators) dissipator_rate = std::max(dissipator_rate, d.rate);
  const double fastest = std::max(hamiltonian_rate, dissipator_rate);
  double step = schedule.duration / 200.0;
  if (fastest > 0.0) step = std::min(step, 1.0 / (50.0 * fastest));
  return step;
}

LindbladGenerator::LindbladGenerator(const HamiltonianSchedule& schedule, std::span<const DissipatorSpec> dissipators,
                                     const Dense& support)
    : dim_(support.rows()) {
  if (support.cols() != dim_ || dim_ % kEngineDim != 0)
    throw Error(ErrorKind::invalid_argument, "generator support must be a square joint matrix");
  const Index fock_dim = dim_ / kEngineDim;
  const Index full = dim_ * dim_;
  const Sparse id = to_sparse(CMatrix<double>::Identity(dim_, dim_));

  // vec(A X B) = (B^T kron A) vec(X), column-major
  std::vector<SparseCol> full_terms;
  for (const auto& t : schedule.terms) {
    if (t.op.dim() != dim_) throw Error(ErrorKind::invalid_argument, "schedule term has the wrong dimension");
    const Sparse h = to_sparse(t.op.matrix());
    full_terms.push_back(cd(0, -1) * (kron(id, h) - kron(h.transpose(), id)));
    coefficients_.push_back(t.coefficient);
  }
  SparseCol dissipative(full, full);
  for (const auto& d : dissipators) {
    d.validate();
    for (const auto& l : jump_operators(d, fock_dim)) {
      const Sparse ls = to_sparse(l);
      const Sparse ldl = to_sparse(l.adjoint() * l);
      dissipative += kron(ls.conjugate(), ls) - 0.5 * kron(id, ldl) - 0.5 * kron(ldl.transpose(), id);
    }
  }
  dissipative.prune(cd(0.0));

  // Closure of the initial support under every term's coupling graph.
  std::vector<char> reached(full, 0);
  std::vector<Index> frontier;
  for (Index c = 0; c < dim_; ++c)
    for (Index r = 0; r < dim_; ++r)
      if (support(r, c) != cd(0.0)) {
        reached[c * dim_ + r] = 1;
        frontier.push_back(c * dim_ + r);
      }
  auto visit = [&](const SparseCol& m, Index col) {
    for (SparseCol::InnerIterator it(m, col); it; ++it)
      if (!reached[it.row()]) {
        reached[it.row()] = 1;
        frontier.push_back(it.row());
      }
  };
  while (!frontier.empty()) {
    const Index col = frontier.back();
    frontier.pop_back();
    visit(dissipative, col);
    for (const auto& m : full_terms) visit(m, col);
  }

  std::vector<Index> reduced(full, -1);
  for (Index i = 0; i < full; ++i)
    if (reached[i]) {
      reduced[i] = Index(index_.size());
      index_.push_back(i);
    }
  auto restrict = [&](const SparseCol& m) {
    std::vector<Eigen::Triplet<cd>> triplets;
    for (Index k = 0; k < Index(index_.size()); ++k)
      for (SparseCol::InnerIterator it(m, index_[k]); it; ++it) triplets.emplace_back(reduced[it.row()], k, it.value());
    Sparse out(Index(index_.size()), Index(index_.size()));
    out.setFromTriplets(triplets.begin(), triplets.end());
    out.makeCompressed();
    return out;
  };
  fixed_ = restrict(dissipative);
  for (const auto& m : full_terms) terms_.push_back(restrict(m));
}

LindbladGenerator::Vector LindbladGenerator::gather(const Dense& rho) const {
  Vector x(Index(index_.size()));
  const cd* data = rho.data();
  for (Index k = 0; k < x.size(); ++k) x(k) = data[index_[k]];
  return x;
}

void LindbladGenerator::scatter(const Vector& x, Dense& rho) const {
  rho.setZero(dim_, dim_);
  cd* data = rho.data();
  for (Index k = 0; k < x.size(); ++k) data[index_[k]] = x(k);
}

void LindbladGenerator::apply(double t, const Vector& x, Vector& out) const {
  out.noalias() = fixed_ * x;
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const double c = coefficients_[k](t);
    if (c != 0.0) out.noalias() += c * (terms_[k] * x);
  }
}

EvolutionResult evolve(const DensityMatrix<double>& rho0, const HamiltonianSchedule& schedule,
                       std::span<const DissipatorSpec> dissipators, const EvolveOptions& options) {
  if (rho0.factor() != Factor::joint) throw Error(ErrorKind::invalid_argument, "evolve needs a joint state");
  schedule.validate();
  if (options.step < 0.0 || (options.step > 0.0 && schedule.duration > 0.0 && options.step > schedule.duration))
    throw Error(ErrorKind::invalid_argument, "step must satisfy 0 < step <= duration");
  if (!(options.support_threshold >= 0.0)) throw Error(ErrorKind::invalid_argument, "support_threshold must be >= 0");
  if (options.snapshot_every < 0 || options.snapshot_count < 0) throw Error(ErrorKind::invalid_argument, "snapshot_every must be >= 0");

  EvolutionResult result{rho0, {}, 0, 0.0};
  if (schedule.duration == 0.0) return result;

  const Index fock_dim = rho0.fock_dim();
  const Dense seed = (rho0.matrix().cwiseAbs().array() > options.support_threshold)
                         .select(rho0.matrix(), Dense::Zero(rho0.dim(), rho0.dim()));
  const LindbladGenerator gen(schedule, dissipators, seed);
  const double requested = options.step > 0.0 ? options.step : default_step(schedule, dissipators);
  const long n_steps = std::max<long>(1, static_cast<long>(std::ceil(schedule.duration / requested - 1e-9)));
  const double h = schedule.duration / double(n_steps);
  long every = options.snapshot_every;
  if (every == 0 && options.snapshot_count > 0) every = std::max<long>(1, n_steps / (options.snapshot_count + 1));

  using Vector = LindbladGenerator::Vector;
  Vector x = gen.gather(seed);
  Vector k1(x.size()), k2(x.size()), k3(x.size()), k4(x.size()), tmp(x.size());
  Dense rho;
  for (long s = 0; s < n_steps; ++s) {
    const double t = h * double(s);
    gen.apply(t, x, k1);
    tmp = x + (0.5 * h) * k1;
    gen.apply(t + 0.5 * h, tmp, k2);
    tmp = x + (0.5 * h) * k2;
    gen.apply(t + 0.5 * h, tmp, k3);
    tmp = x + h * k3;
    gen.apply(t + h, tmp, k4);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (every > 0 && (s + 1) % every == 0 && s + 1 < n_steps) {
      gen.scatter(x, rho);
      Dense sym = 0.5 * (rho + rho.adjoint());
      result.snapshots.push_back({t + h, DensityMatrix<double>(std::move(sym), Factor::joint, options.trace_tolerance)});
    }
  }
  gen.scatter(x, rho);

  rho = 0.5 * (rho + rho.adjoint()).eval();
  const double drift = std::abs(rho.trace().real() - 1.0);
  if (!(drift <= options.trace_tolerance))
    throw Error(ErrorKind::integration_accuracy,
                "trace drifted by " + std::to_string(drift) + "; use a smaller integration step");
  if (options.truncation_guard >= 0.0) {
    const auto d = rho.diagonal().real();
    double top = 0.0;
    for (Index i = 0; i < rho.rows(); ++i)
      if (i % fock_dim >= fock_dim - 2) top += d(i);
    if (top > options.truncation_guard)
      throw Error(ErrorKind::fock_overflow,
                  "population " + std::to_string(top) + " in the top two Fock levels; increase fock_dim");
  }
  result.final_state = DensityMatrix<double>(std::move(rho), Factor::joint, options.trace_tolerance);
  result.step_count = n_steps;
  result.step = h;
  if (every > 0 && n_steps % every == 0)
    result.snapshots.push_back({schedule.duration, result.final_state});
  return result;
}

}  // namespace ioncycle
