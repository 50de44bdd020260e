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

#include "ioncycle/ideal.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "ioncycle/thermo.hpp"

namespace ioncycle {

namespace {

constexpr double kOverflowTolerance = 1e-9;

void require_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::invalid_argument, "p_D_A must lie in [0, 1]");
}

double binomial_weight(int n, int k, double p) {
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  const double log_c = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return std::exp(log_c + k * std::log(p) + (n - k) * std::log1p(-p));
}

}  // namespace

PhononDistribution ideal_step_map(const PhononDistribution& p, const IdealStroke& stroke) {
  const Index size = p.size();
  if (size < 2 || p[size - 1] > kOverflowTolerance)
    throw Error(ErrorKind::overflow, "no headroom above the occupied levels");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(size);
  if (stroke.kind == IdealStrokeKind::iv_blue) {
    out.tail(size - 1) = p.probs().head(size - 1);
  } else {
    require_probability(stroke.p_D_A);
    const double q = stroke.p_D_A;
    // |down, n> -> |up, n-1> and |up, n> -> |down, n+1>; |down, 0> is dark
    out(0) += (1.0 - q) * p[0];
    out(1) += q * p[0];
    for (Index n = 1; n + 1 < size; ++n) {
      out(n + 1) += q * p[n];
      out(n - 1) += (1.0 - q) * p[n];
    }
  }
  return PhononDistribution::normalized(out);
}

PhononDistribution ideal_distribution(int n_cycles, double p_D_A, IdealStageLabel stage, Index min_levels) {
  if (n_cycles < 0) throw Error(ErrorKind::invalid_argument, "n_cycles must be >= 0");
  require_probability(p_D_A);
  const int offset = stage == IdealStageLabel::DA ? 1 : 0;
  const Index size = std::max<Index>(min_levels, 2 * Index(n_cycles) + offset + 2);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(size);
  for (int k = 0; k <= n_cycles; ++k) out(2 * k + offset) = binomial_weight(n_cycles, k, p_D_A);
  return PhononDistribution::normalized(out);
}

PhononDistribution ideal_distribution(const IdealStage& stage, double p_D_A, Index min_levels) {
  // B has the load of the following C: the pump only acts on the engine.
  const IdealStageLabel label = stage.label == IdealStageLabel::DA ? IdealStageLabel::DA : IdealStageLabel::C;
  return ideal_distribution(stage.cycle_index, p_D_A, label, min_levels);
}

ScalingReport ideal_scaling_report(double p_D_A, int max_cycles, int fit_first, int fit_last) {
  require_probability(p_D_A);
  if (p_D_A == 0.0 || p_D_A == 1.0)
    throw Error(ErrorKind::scaling_undefined, "scaling laws need 0 < p_D_A < 1");
  if (max_cycles < 10) throw Error(ErrorKind::invalid_argument, "max_cycles must be >= 10");
  if (fit_first < 0) fit_first = max_cycles / 2;
  if (fit_last < 0) fit_last = max_cycles;
  if (fit_first < 1 || fit_last > max_cycles || fit_last - fit_first < 2)
    throw Error(ErrorKind::invalid_argument, "fit window must hold at least three points inside [1, max_cycles]");

  ScalingReport r;
  r.fit_first = fit_first;
  r.fit_last = fit_last;
  for (int n = 0; n <= max_cycles; ++n) {
    const PhononDistribution p = ideal_distribution(n, p_D_A, IdealStageLabel::C);
    r.entropy_series.push_back(diagonal_entropy(p));
    r.ergotropy_series.push_back(ergotropy_diagonal(p));
  }
  const double first_mean = ideal_distribution(0, p_D_A, IdealStageLabel::C).mean();
  const double last_mean = ideal_distribution(max_cycles, p_D_A, IdealStageLabel::C).mean();
  r.delta_n_per_cycle = (last_mean - first_mean) / double(max_cycles);

  const int m = fit_last - fit_first + 1;
  Eigen::MatrixXd xs(m, 2), xe(m, 2);
  Eigen::VectorXd ys(m), ye(m);
  for (int i = 0; i < m; ++i) {
    const double n = double(fit_first + i);
    xs.row(i) << 1.0, std::log(n);
    xe.row(i) << n, -std::sqrt(n);
    ys(i) = r.entropy_series[fit_first + i];
    ye(i) = r.ergotropy_series[fit_first + i];
  }
  const Eigen::Vector2d cs = xs.colPivHouseholderQr().solve(ys);
  const Eigen::Vector2d ce = xe.colPivHouseholderQr().solve(ye);
  auto max_relative = [](const Eigen::VectorXd& fit, const Eigen::VectorXd& y) {
    return ((fit - y).array().abs() / y.array().abs()).maxCoeff();
  };
  r.entropy_fit = {cs(0), cs(1), max_relative(xs * cs, ys)};
  r.ergotropy_fit = {ce(0), ce(1), max_relative(xe * ce, ye)};
  return r;
}

}  // namespace ioncycle
