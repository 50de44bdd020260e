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


#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ioncycle/cycle.hpp"
#include "ioncycle/tomography.hpp"

using namespace ioncycle;
using Eigen::VectorXd;

namespace {

PhononDistribution thermal(double nbar, Index n) { return PhononDistribution::from_state(thermal_state(nbar, n)); }

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::invalid_state;
}

// moves `amount` of probability from level `from` to level `to`
PhononDistribution shifted(const PhononDistribution& p, Index from, Index to, double amount) {
  VectorXd q = p.probs();
  q(from) -= amount;
  q(to) += amount;
  return PhononDistribution(q);
}

bool within_box(const FitResult& f, double halfwidth) {
  const VectorXd d = f.p_fit.probs() - f.prior.probs();
  return d.cwiseAbs().maxCoeff() <= halfwidth + 1e-12 && std::abs(f.p_fit.probs().sum() - 1.0) <= 1e-12 &&
         f.p_fit.probs().minCoeff() >= 0.0;
}

}  // namespace

TEST_CASE("scan grids") {
  const VectorXd g = scan_grid();
  CHECK(g.size() == 35);
  CHECK(g(0) == 0.0);
  CHECK(g(34) == doctest::Approx(102e-6));
  const VectorXd r = reference_grid();
  CHECK(r.size() == 200);
  CHECK(r(199) == doctest::Approx(600e-6));
  CHECK_THROWS_AS(scan_grid(0), Error);
}

TEST_CASE("rabi_signal") {
  CalibrationParams calib;
  const auto th = thermal(1.2, 40);
  VectorXd t0(1);
  t0 << 0.0;
  CHECK(rabi_signal(th, t0, calib)(0) == doctest::Approx(1.0).epsilon(1e-14));

  VectorXd null(1);
  null << 0.5 * std::numbers::pi / calib.sideband_rabi();
  VectorXd ground = VectorXd::Zero(4);
  ground(0) = 1.0;
  CHECK(rabi_signal(PhononDistribution(ground), null, calib)(0) <= 1e-15);

  // term-by-term oracle at 100 us
  VectorXd t(1);
  t << 100e-6;
  double expected = 0.0;
  for (Index n = 0; n < 40; ++n) {
    const double c = std::cos(calib.lamb_dicke * std::sqrt(n + 1.0) * calib.carrier_rabi * 100e-6);
    expected += th[n] * c * c * std::exp(-318.0 * std::sqrt(n + 1.0) * 100e-6);
  }
  CHECK(rabi_signal(th, t, calib)(0) == doctest::Approx(expected).epsilon(1e-13));

  // linear in p
  const auto q = PhononDistribution::normalized(VectorXd::LinSpaced(40, 40.0, 1.0));
  const VectorXd grid = reference_grid();
  const double a = 0.3;
  const auto mix = PhononDistribution(a * th.probs() + (1 - a) * q.probs());
  const VectorXd lhs = rabi_signal(mix, grid, calib);
  const VectorXd rhs = a * rabi_signal(th, grid, calib) + (1 - a) * rabi_signal(q, grid, calib);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);

  VectorXd negative(1);
  negative << -1e-6;
  CHECK(kind_of([&] { rabi_signal(th, negative, calib); }) == ErrorKind::invalid_argument);
}

TEST_CASE("sample_scan") {
  const VectorXd t = scan_grid(5, 1e-6);
  const auto one = sample_scan(t, VectorXd::Ones(5), 150, 1);
  CHECK(one.p_S == VectorXd::Ones(5));
  CHECK(one.sigma_p.minCoeff() == doctest::Approx(std::sqrt(0.25 / 150) / 10));

  double mean = 0.0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) mean += sample_scan(t, VectorXd::Constant(5, 0.5), 150, seed).p_S.mean();
  mean /= 1000.0;
  CHECK(std::abs(mean - 0.5) <= 0.005);

  const auto a = sample_scan(t, VectorXd::Constant(5, 0.3), 150, 42);
  const auto b = sample_scan(t, VectorXd::Constant(5, 0.3), 150, 42);
  CHECK(a.p_S == b.p_S);
  CHECK(a.sigma_p == b.sigma_p);

  CHECK(kind_of([&] { sample_scan(t, VectorXd::Ones(5), 0, 1); }) == ErrorKind::invalid_argument);
  CHECK(kind_of([&] { sample_scan(t, VectorXd::Constant(5, 1.5), 10, 1); }) == ErrorKind::invalid_argument);
}

TEST_CASE("scan validation") {
  RabiScan s = exact_scan(scan_grid(4, 1e-6), VectorXd::Constant(4, 0.5));
  CHECK_NOTHROW(s.validate());
  auto broken = s;
  broken.times(2) = broken.times(1);
  CHECK(kind_of([&] { broken.validate(); }) == ErrorKind::schema);
  broken = s;
  broken.sigma_p(0) = 0.0;
  CHECK(kind_of([&] { broken.validate(); }) == ErrorKind::schema);
  broken = s;
  broken.p_S.conservativeResize(3);
  CHECK(kind_of([&] { broken.validate(); }) == ErrorKind::schema);
  broken = s;
  broken.p_S(1) = 1.2;
  CHECK(kind_of([&] { broken.validate(); }) == ErrorKind::schema);
}

TEST_CASE("noiseless self-fit returns the prior") {
  CalibrationParams calib;
  for (const auto& prior : {thermal(1.2, 40), thermal(4.0, 60)}) {
    const VectorXd t = scan_grid();
    const auto fit = fit_distribution(exact_scan(t, rabi_signal(prior, t, calib)), prior, calib);
    CHECK((fit.p_fit.probs() - prior.probs()).cwiseAbs().maxCoeff() <= 1e-6);
    CHECK(fit.reduced_chi2 <= 1e-9);
    CHECK(fit.n_levels_used == 14);
    REQUIRE(fit.p_fit.sigma());
    CHECK(fit.p_fit.sigma()->tail(prior.size() - 14).isZero());
  }
}

TEST_CASE("fit recovers a perturbed distribution") {
  CalibrationParams calib;
  const auto prior = thermal(1.2, 40);
  const auto truth = shifted(prior, 0, 2, 0.03);
  const VectorXd t = reference_grid();
  const VectorXd signal = rabi_signal(truth, t, calib);

  // without noise the perturbation is found exactly
  const auto exact = fit_distribution(exact_scan(t, signal), prior, calib);
  CHECK((exact.p_fit.probs() - truth.probs()).cwiseAbs().maxCoeff() <= 1e-6);

  int covered = 0, total = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto fit = fit_distribution(sample_scan(t, signal, 150, seed), prior, calib);
    CHECK(within_box(fit, 0.05));
    CHECK(fit.reduced_chi2 >= 0.0);
    for (Index n = 0; n < 14; ++n) {
      ++total;
      if (std::abs(fit.p_fit[n] - truth[n]) <= (*fit.p_fit.sigma())(n)) ++covered;
    }
  }
  CHECK(double(covered) / total >= 0.6);
}

TEST_CASE("box constraints hold even for data far from the prior") {
  CalibrationParams calib;
  const auto prior = thermal(1.2, 40);
  VectorXd far = VectorXd::Zero(40);
  far(6) = 1.0;
  const VectorXd t = scan_grid();
  const auto fit = fit_distribution(exact_scan(t, rabi_signal(PhononDistribution(far), t, calib)), prior, calib);
  CHECK(within_box(fit, 0.05));
  CHECK(fit.iterations > 1);
  CHECK(fit.reduced_chi2 > 1.0);

  FitOptions tight;
  tight.box_halfwidth = 0.01;
  CHECK(within_box(fit_distribution(exact_scan(t, rabi_signal(PhononDistribution(far), t, calib)), prior, calib, tight),
                   0.01));

  FitOptions capped;
  capped.max_iterations = 1;
  CHECK(kind_of([&] {
          fit_distribution(exact_scan(t, rabi_signal(PhononDistribution(far), t, calib)), prior, calib, capped);
        }) == ErrorKind::fit_failure);
}

TEST_CASE("fit errors") {
  CalibrationParams calib;
  const auto prior = thermal(1.2, 40);
  const VectorXd few = scan_grid(14, 3e-6);
  CHECK(kind_of([&] { fit_distribution(exact_scan(few, rabi_signal(prior, few, calib)), prior, calib); }) ==
        ErrorKind::underdetermined_fit);
  FitOptions wide;
  wide.n_levels = 41;
  const VectorXd t = scan_grid();
  CHECK(kind_of([&] { fit_distribution(exact_scan(t, rabi_signal(prior, t, calib)), prior, calib, wide); }) ==
        ErrorKind::invalid_argument);
}

TEST_CASE("four times the shots halves the fitted sigma") {
  CalibrationParams calib;
  const auto prior = thermal(1.2, 40);
  const VectorXd t = reference_grid();
  const VectorXd signal = rabi_signal(prior, t, calib);
  double ratio = 0.0;
  const int trials = 20;
  for (int s = 0; s < trials; ++s) {
    const auto lo = fit_distribution(sample_scan(t, signal, 150, 100 + s), prior, calib);
    const auto hi = fit_distribution(sample_scan(t, signal, 600, 100 + s), prior, calib);
    ratio += (*lo.p_fit.sigma())(0) / (*hi.p_fit.sigma())(0);
  }
  ratio /= trials;
  CHECK(ratio == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("reconstructed observables") {
  auto exact_fit = [](const PhononDistribution& p) {
    return FitResult{PhononDistribution(p.probs(), VectorXd::Zero(p.size())), 0.0, 0.0, p.size(), p, 0};
  };
  const auto th = reconstruct_observables(exact_fit(thermal(1.2, 40)));
  CHECK(th.ergotropy_diag_units_hw == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(th.mean_n == doctest::Approx(1.2).epsilon(1e-6));
  REQUIRE(th.sigma);
  CHECK(th.sigma->mean_n == 0.0);

  VectorXd c2(5);
  c2 << 9.0 / 16, 0.0, 6.0 / 16, 0.0, 1.0 / 16;
  const auto r = reconstruct_observables(exact_fit(PhononDistribution(c2)));
  CHECK(r.mean_n == doctest::Approx(1.0));
  CHECK(r.ergotropy_diag_units_hw == doctest::Approx(0.5));

  // first-order propagation of the mean: sqrt(sum n^2 sigma_n^2)
  VectorXd sigma = VectorXd::Zero(5);
  sigma(2) = 0.01;
  sigma(4) = 0.02;
  const FitResult noisy{PhononDistribution(c2, sigma), 0.0, 0.0, 5, PhononDistribution(c2), 0};
  CHECK(reconstruct_observables(noisy).sigma->mean_n == doctest::Approx(std::sqrt(4 * 1e-4 + 16 * 4e-4)));
}

TEST_CASE("measured distribution pumps the engine first") {
  CalibrationParams calib;
  const auto joint = tensor(engine_state(kUp), thermal_state(1.2, 40));
  const auto p = measured_distribution(joint, calib);
  CHECK((p.probs() - thermal(1.2, 40).probs()).cwiseAbs().maxCoeff() <= 1e-3);
}
