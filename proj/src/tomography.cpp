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

#include "ioncycle/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "ioncycle/cycle.hpp"

namespace ioncycle {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double sigma_floor(int shots) { return std::sqrt(0.25 / shots) / 10.0; }

enum class Bound : char { free, lower, upper };

// Relative pivot size below which a direction of the design counts as unresolved by the data.
constexpr double kRankThreshold = 1e-10;

// Bounded-variable least squares, min |y - M x| with lo <= x <= hi, by the active-set method.
// Starts from the feasible point x and returns the number of iterations used.
int bounded_least_squares(const MatrixXd& m, const VectorXd& y, const VectorXd& lo, const VectorXd& hi, VectorXd& x,
                          int max_iterations) {
  const Index k = m.cols();
  std::vector<Bound> state(std::size_t(k), Bound::free);
  const double scale = std::max(1.0, (m.transpose() * y).cwiseAbs().maxCoeff());
  const double kkt_tol = 1e-12 * scale;
  for (int iter = 1; iter <= max_iterations; ++iter) {
    std::vector<Index> free_set;
    for (Index j = 0; j < k; ++j)
      if (state[std::size_t(j)] == Bound::free) free_set.push_back(j);

    if (!free_set.empty()) {
      VectorXd rhs = y;
      MatrixXd mf(m.rows(), Index(free_set.size()));
      for (Index j = 0; j < k; ++j)
        if (state[std::size_t(j)] != Bound::free) rhs -= m.col(j) * x(j);
      VectorXd xf(Index(free_set.size()));
      for (std::size_t i = 0; i < free_set.size(); ++i) {
        mf.col(Index(i)) = m.col(free_set[i]);
        xf(Index(i)) = x(free_set[i]);
      }
      // minimum-norm correction: directions the data cannot resolve stay where they are
      Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod;
      cod.setThreshold(kRankThreshold);
      cod.compute(mf);
      const VectorXd z = xf + cod.solve(rhs - mf * xf);

      double alpha = 1.0;
      Index blocking = -1;
      for (std::size_t i = 0; i < free_set.size(); ++i) {
        const Index j = free_set[i];
        const double d = z(Index(i)) - x(j);
        if (z(Index(i)) > hi(j) + 1e-12 && d > 0.0 && (hi(j) - x(j)) / d < alpha) {
          alpha = (hi(j) - x(j)) / d;
          blocking = j;
        } else if (z(Index(i)) < lo(j) - 1e-12 && d < 0.0 && (lo(j) - x(j)) / d < alpha) {
          alpha = (lo(j) - x(j)) / d;
          blocking = j;
        }
      }
      alpha = std::clamp(alpha, 0.0, 1.0);
      for (std::size_t i = 0; i < free_set.size(); ++i) {
        const Index j = free_set[i];
        x(j) = std::clamp(x(j) + alpha * (z(Index(i)) - x(j)), lo(j), hi(j));
      }
      if (blocking >= 0) {
        // the blocking variable and any other free variable pushed onto a bound leave the free set
        for (std::size_t i = 0; i < free_set.size(); ++i) {
          const Index j = free_set[i];
          const double target = z(Index(i));
          if (j == blocking ? target < lo(j) : (x(j) <= lo(j) && target < lo(j))) state[std::size_t(j)] = Bound::lower;
          if (j == blocking ? target > hi(j) : (x(j) >= hi(j) && target > hi(j))) state[std::size_t(j)] = Bound::upper;
        }
        x(blocking) = state[std::size_t(blocking)] == Bound::upper ? hi(blocking) : lo(blocking);
        continue;
      }
    }

    // Optimal on the current free set: release the bound variable with the largest KKT violation.
    const VectorXd g = m.transpose() * (y - m * x);
    Index worst = -1;
    double violation = kkt_tol;
    for (Index j = 0; j < k; ++j) {
      const Bound b = state[std::size_t(j)];
      const double v = b == Bound::lower ? g(j) : b == Bound::upper ? -g(j) : 0.0;
      if (v > violation) {
        violation = v;
        worst = j;
      }
    }
    if (worst < 0) return iter;
    state[std::size_t(worst)] = Bound::free;
  }
  throw Error(ErrorKind::fit_failure, "active-set solver did not converge in " + std::to_string(max_iterations) +
                                          " iterations (" + std::to_string(k) + " levels)");
}

// Euclidean projection of x onto {lo <= x <= hi, sum x = target}; the set must be nonempty.
VectorXd project_box_simplex(const VectorXd& x, const VectorXd& lo, const VectorXd& hi, double target) {
  auto mass = [&](double lambda) { return (x.array() - lambda).max(lo.array()).min(hi.array()).sum(); };
  double a = (x - hi).minCoeff() - 1.0;
  double b = (x - lo).maxCoeff() + 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (a + b);
    (mass(mid) > target ? a : b) = mid;
  }
  const double lambda = 0.5 * (a + b);
  return (x.array() - lambda).max(lo.array()).min(hi.array()).matrix();
}

// Moore-Penrose inverse of a symmetric positive semidefinite matrix.
MatrixXd pseudo_inverse_psd(const MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(a);
  const VectorXd w = es.eigenvalues();
  const double cut = 1e-13 * std::max(1e-300, w.cwiseAbs().maxCoeff());
  VectorXd inv = VectorXd::Zero(w.size());
  for (Index i = 0; i < w.size(); ++i)
    if (w(i) > cut) inv(i) = 1.0 / w(i);
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

void RabiScan::validate() const {
  if (times.size() != p_S.size() || times.size() != sigma_p.size())
    throw Error(ErrorKind::schema, "scan columns differ in length");
  if (times.size() == 0) throw Error(ErrorKind::schema, "empty scan");
  if (shots_per_point <= 0) throw Error(ErrorKind::schema, "shots_per_point must be > 0");
  for (Index i = 0; i < times.size(); ++i) {
    if (!(times(i) >= 0.0)) throw Error(ErrorKind::schema, "scan times must be >= 0");
    if (i > 0 && !(times(i) > times(i - 1))) throw Error(ErrorKind::schema, "scan times must increase strictly");
    if (!(p_S(i) >= 0.0 && p_S(i) <= 1.0)) throw Error(ErrorKind::schema, "p_S outside [0, 1]");
    if (!(sigma_p(i) > 0.0) || !std::isfinite(sigma_p(i))) throw Error(ErrorKind::schema, "sigma_p must be > 0");
  }
}

VectorXd scan_grid(int points, double spacing) {
  if (points < 1 || !(spacing > 0.0)) throw Error(ErrorKind::invalid_argument, "scan grid needs points >= 1, spacing > 0");
  return VectorXd::LinSpaced(points, 0.0, spacing * (points - 1));
}

VectorXd reference_grid() { return VectorXd::LinSpaced(200, 0.0, 600e-6); }

MatrixXd rabi_design(const VectorXd& times, Index levels, const CalibrationParams& calib, double gamma_base) {
  if (times.size() > 0 && times.minCoeff() < 0.0) throw Error(ErrorKind::invalid_argument, "negative scan time");
  if (!(gamma_base >= 0.0)) throw Error(ErrorKind::invalid_argument, "gamma_base must be >= 0");
  MatrixXd a(times.size(), levels);
  for (Index n = 0; n < levels; ++n) {
    const double root = std::sqrt(double(n + 1));
    const double rabi = calib.sideband_rabi() * root;
    for (Index i = 0; i < times.size(); ++i) {
      const double c = std::cos(rabi * times(i));
      a(i, n) = c * c * std::exp(-gamma_base * root * times(i));
    }
  }
  return a;
}

VectorXd rabi_signal(const PhononDistribution& p, const VectorXd& times, const CalibrationParams& calib,
                     double gamma_base) {
  const VectorXd s = rabi_design(times, p.size(), calib, gamma_base) * p.probs();
  return s.cwiseMax(0.0).cwiseMin(1.0);
}

RabiScan sample_scan(const VectorXd& times, const VectorXd& ideal_p_S, int shots, std::uint64_t seed) {
  if (shots <= 0) throw Error(ErrorKind::invalid_argument, "shots must be > 0");
  if (times.size() != ideal_p_S.size()) throw Error(ErrorKind::invalid_argument, "times and p_S differ in length");
  std::mt19937_64 rng(seed);
  RabiScan scan{times, VectorXd(times.size()), VectorXd(times.size()), shots};
  for (Index i = 0; i < times.size(); ++i) {
    const double p = ideal_p_S(i);
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::invalid_argument, "p_S outside [0, 1]");
    std::binomial_distribution<int> draw(shots, p);
    const double hat = double(draw(rng)) / shots;
    scan.p_S(i) = hat;
    scan.sigma_p(i) = std::max(std::sqrt(hat * (1.0 - hat) / shots), sigma_floor(shots));
  }
  return scan;
}

RabiScan exact_scan(const VectorXd& times, const VectorXd& p_S, int shots) {
  if (shots <= 0) throw Error(ErrorKind::invalid_argument, "shots must be > 0");
  return RabiScan{times, p_S, VectorXd::Constant(times.size(), sigma_floor(shots)), shots};
}

PhononDistribution measured_distribution(const DensityMatrix<double>& joint, const CalibrationParams& calib) {
  return PhononDistribution::from_state(stroke_pump(joint, calib).state);
}

FitResult fit_distribution(const RabiScan& scan, const PhononDistribution& prior, const CalibrationParams& calib,
                           const FitOptions& options) {
  scan.validate();
  const Index k = options.n_levels;
  if (k < 1 || k > prior.size()) throw Error(ErrorKind::invalid_argument, "n_levels must lie in [1, prior size]");
  if (!(options.box_halfwidth >= 0.0)) throw Error(ErrorKind::invalid_argument, "box_halfwidth must be >= 0");
  const Index points = scan.times.size();
  if (points <= k)
    throw Error(ErrorKind::underdetermined_fit,
                std::to_string(points) + " scan points cannot determine " + std::to_string(k) + " levels");

  const MatrixXd a = rabi_design(scan.times, prior.size(), calib, options.gamma_base);
  const VectorXd w = scan.sigma_p.cwiseInverse();
  const VectorXd fixed = a.rightCols(prior.size() - k) * prior.probs().tail(prior.size() - k);
  const MatrixXd m = w.asDiagonal() * a.leftCols(k);
  const VectorXd y = w.asDiagonal() * (scan.p_S - fixed);

  const VectorXd p0 = prior.probs().head(k);
  const VectorXd lo = (p0.array() - options.box_halfwidth).max(0.0).matrix();
  const VectorXd hi = (p0.array() + options.box_halfwidth).min(1.0).matrix();
  VectorXd x = p0.cwiseMax(lo).cwiseMin(hi);
  const int cap = options.max_iterations > 0 ? options.max_iterations : int(10 * k + 10);
  const int iterations = bounded_least_squares(m, y, lo, hi, x, cap);
  x = project_box_simplex(x, lo, hi, 1.0 - prior.probs().tail(prior.size() - k).sum());

  VectorXd p = prior.probs();
  p.head(k) = x.cwiseMax(0.0);
  p /= p.sum();
  const double chi2 = (m * p.head(k) - y).squaredNorm();

  VectorXd sigma = VectorXd::Zero(prior.size());
  sigma.head(k) = pseudo_inverse_psd(m.transpose() * m).diagonal().cwiseMax(0.0).cwiseSqrt();

  return FitResult{PhononDistribution(p, sigma), chi2 / double(points - k), chi2, k, prior, iterations};
}

ThermoReport reconstruct_observables(const FitResult& fit) {
  const PhononDistribution& d = fit.p_fit;
  const VectorXd& p = d.probs();
  const VectorXd sigma = d.sigma().value_or(VectorXd::Zero(p.size()));
  ThermoReport r;
  r.mean_n = d.mean();
  r.entropy_nats = diagonal_entropy(d);
  r.ergotropy_diag_units_hw = ergotropy_diagonal(d);
  r.ergotropy_units_hw = r.ergotropy_diag_units_hw;

  // passive rank of each level: d(passive energy)/d p_n
  std::vector<Index> order(std::size_t(p.size()));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return p(i) > p(j); });
  VectorXd rank(p.size());
  for (std::size_t r_ = 0; r_ < order.size(); ++r_) rank(order[r_]) = double(r_);

  ThermoSigma s;
  double vm = 0.0, vs = 0.0, ve = 0.0;
  for (Index n = 0; n < p.size(); ++n) {
    const double s2 = sigma(n) * sigma(n);
    vm += double(n) * double(n) * s2;
    if (p(n) > 0.0) vs += std::pow(std::log(p(n)) + 1.0, 2) * s2;
    ve += std::pow(double(n) - rank(n), 2) * s2;
  }
  s.mean_n = std::sqrt(vm);
  s.entropy_nats = std::sqrt(vs);
  s.ergotropy_units_hw = std::sqrt(ve);
  r.sigma = s;
  return r;
}

}  // namespace ioncycle
