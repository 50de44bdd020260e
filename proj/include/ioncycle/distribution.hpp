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

#include <optional>
#include <utility>

#include <Eigen/Dense>

#include "ioncycle/error.hpp"
#include "ioncycle/hilbert.hpp"

namespace ioncycle {

/// Occupation probabilities p_n of the load levels, optionally with 1-sigma errors.
class PhononDistribution {
 public:
  static constexpr double kNegativeTolerance = 1e-12;
  static constexpr double kSumTolerance = 1e-9;

  explicit PhononDistribution(Eigen::VectorXd probs, std::optional<Eigen::VectorXd> sigma = std::nullopt)
      : probs_(std::move(probs)), sigma_(std::move(sigma)) {
    if (probs_.size() < 1) throw Error(ErrorKind::invalid_distribution, "empty distribution");
    if (!probs_.allFinite()) throw Error(ErrorKind::invalid_distribution, "non-finite probability");
    if (probs_.minCoeff() < -kNegativeTolerance) throw Error(ErrorKind::invalid_distribution, "negative probability");
    if (std::abs(probs_.sum() - 1.0) > kSumTolerance)
      throw Error(ErrorKind::invalid_distribution, "probabilities do not sum to 1");
    if (sigma_ && sigma_->size() != probs_.size())
      throw Error(ErrorKind::invalid_distribution, "sigma length differs from probs");
  }

  /// Normalises a nonnegative weight vector (tiny negative round-off is clipped).
  static PhononDistribution normalized(Eigen::VectorXd weights) {
    if (weights.size() > 0 && weights.minCoeff() < -1e-9)
      throw Error(ErrorKind::invalid_distribution, "negative weight");
    weights = weights.cwiseMax(0.0);
    const double total = weights.sum();
    if (!(total > 0.0)) throw Error(ErrorKind::invalid_distribution, "zero total weight");
    return PhononDistribution(weights / total);
  }

  template <typename Scalar>
  static PhononDistribution from_state(const DensityMatrix<Scalar>& rho) {
    return normalized(load_populations(rho).template cast<double>());
  }

  Index size() const { return probs_.size(); }
  const Eigen::VectorXd& probs() const { return probs_; }
  double operator[](Index n) const { return n < probs_.size() ? probs_(n) : 0.0; }
  const std::optional<Eigen::VectorXd>& sigma() const { return sigma_; }

  double mean() const { return Eigen::VectorXd::LinSpaced(size(), 0.0, double(size() - 1)).dot(probs_); }
  double variance() const {
    const Eigen::VectorXd n = Eigen::VectorXd::LinSpaced(size(), 0.0, double(size() - 1));
    const double m = n.dot(probs_);
    return (n.array() - m).square().matrix().dot(probs_);
  }

  /// Copy padded with zeros (or cut, if the cut mass is zero) to `n` levels.
  PhononDistribution resized(Index n) const {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
    const Index keep = std::min(n, size());
    p.head(keep) = probs_.head(keep);
    if (keep < size() && probs_.tail(size() - keep).sum() > kSumTolerance)
      throw Error(ErrorKind::overflow, "resizing would drop probability mass");
    return normalized(p);
  }

 private:
  Eigen::VectorXd probs_;
  std::optional<Eigen::VectorXd> sigma_;
};

/// Total-variation distance, shorter vector zero-padded.
inline double total_variation(const PhononDistribution& a, const PhononDistribution& b) {
  const Index n = std::max(a.size(), b.size());
  double acc = 0.0;
  for (Index i = 0; i < n; ++i) acc += std::abs(a[i] - b[i]);
  return 0.5 * acc;
}

}  // namespace ioncycle
