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
#include <random>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "ioncycle/dynamics.hpp"

using namespace ioncycle;
using Mat = CMatrix<double>;
using cd = std::complex<double>;

namespace {

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

Mat random_hermitian(Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat m(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) m(i, j) = cd(g(rng), g(rng));
  return 0.5 * (m + m.adjoint());
}

DensityMatrix<double> random_state(Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat m(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) m(i, j) = cd(g(rng), g(rng));
  Mat rho = m * m.adjoint();
  rho /= rho.trace();
  return DensityMatrix<double>(rho, Factor::joint);
}

DensityMatrix<double> joint_basis_state(Index s, Index n, Index fock_dim) {
  return tensor(engine_state(s), fock_state(n, fock_dim));
}

Operator<double> jc(Index fock_dim, double g) {
  return tensor(pauli(PauliKind::plus), destroy(fock_dim)) * cd(g) +
         tensor(pauli(PauliKind::minus), create(fock_dim)) * cd(g);
}

}  // namespace

TEST_CASE("lindblad_rhs: engine decay empties the excited level at rate gamma") {
  const double gamma = 2.5e3;
  const std::vector<DissipatorSpec> d{DissipatorSpec::decay(gamma)};
  const auto rho = joint_basis_state(kUp, 0, 4);
  const Mat drho = lindblad_rhs(rho, identity(Factor::joint, 4) * cd(0.0), d).matrix();
  CHECK(drho(kUp * 4, kUp * 4).real() == doctest::Approx(-gamma));
  CHECK(drho(kDown * 4, kDown * 4).real() == doctest::Approx(gamma));
}

TEST_CASE("lindblad_rhs: dephasing leaves diagonal states alone") {
  const Index n = 6;
  const std::vector<DissipatorSpec> d{DissipatorSpec::dephasing(318.0)};
  const auto rho = tensor(engine_state(kDown), thermal_state(1.5, n));
  CHECK(max_abs(lindblad_rhs(rho, identity(Factor::joint, n) * cd(0.0), d).matrix()) <= 1e-12);
}

TEST_CASE("lindblad_rhs is traceless and matches the sparse generator") {
  std::mt19937_64 rng(11);
  const Index n = 5;
  const auto rho = random_state(2 * n, rng);
  const Operator<double> h(random_hermitian(2 * n, rng), Factor::joint);
  const std::vector<DissipatorSpec> d{DissipatorSpec::dephasing(3.0), DissipatorSpec::heating(0.7, 2.0),
                                      DissipatorSpec::decay(5.0)};
  const Mat drho = lindblad_rhs(rho, h, d).matrix();
  CHECK(std::abs(drho.trace()) <= 1e-12);
  CHECK(max_abs(drho - drho.adjoint()) <= 1e-12);

  const auto schedule = HamiltonianSchedule::constant(h, 1.0);
  const LindbladGenerator gen(schedule, d, rho.matrix());
  CHECK(gen.size() == 4 * n * n);
  LindbladGenerator::Vector out(gen.size());
  gen.apply(0.0, gen.gather(rho.matrix()), out);
  Mat back;
  gen.scatter(out, back);
  CHECK(max_abs(back - drho) <= 1e-12);

  CHECK_THROWS_AS(lindblad_rhs(rho, identity(Factor::joint, n + 1), d), Error);
}

TEST_CASE("generator support closes over the couplings only") {
  const Index n = 6;
  const auto rho = joint_basis_state(kUp, 0, n);
  const auto schedule = HamiltonianSchedule::constant(jc(n, 1.0), 1.0);
  const std::vector<DissipatorSpec> none;
  // |up,0> couples to |down,1> only: a 2x2 block of matrix elements
  CHECK(LindbladGenerator(schedule, none, rho.matrix()).size() == 4);
  const std::vector<DissipatorSpec> pump{DissipatorSpec::decay(1.0)};
  // decay adds |down,0><down,0|
  CHECK(LindbladGenerator(schedule, pump, rho.matrix()).size() == 5);
}

TEST_CASE("evolve: single-excitation JC flop is cos^2(g t)") {
  const Index n = 5;
  const double g = 2.0e3;
  const auto rho0 = joint_basis_state(kUp, 0, n);
  for (double t : {1.0e-4, 3.3e-4, 7.85e-4}) {
    const auto r = evolve(rho0, HamiltonianSchedule::constant(jc(n, g), t), {});
    const double c = std::cos(g * t);
    CHECK(r.final_state.matrix()(kUp * n, kUp * n).real() == doctest::Approx(c * c).epsilon(1e-9));
    CHECK(r.final_state.matrix()(kDown * n + 1, kDown * n + 1).real() ==
          doctest::Approx(1 - c * c).epsilon(1e-9));
  }
}

TEST_CASE("evolve: optical-pumping rate empties |up> as exp(-gamma t)") {
  const std::vector<DissipatorSpec> d{DissipatorSpec::decay(7.0e5)};
  const auto r = evolve(joint_basis_state(kUp, 2, 6), HamiltonianSchedule::none(10e-6), d);
  CHECK(excited_population(r.final_state) == doctest::Approx(std::exp(-7.0)).epsilon(1e-6));
  CHECK(r.final_state.matrix()(kDown * 6 + 2, kDown * 6 + 2).real() == doctest::Approx(1 - std::exp(-7.0)));
}

TEST_CASE("evolve: nothing to do leaves the state exactly") {
  std::mt19937_64 rng(3);
  const auto rho0 = random_state(8, rng);
  const auto r = evolve(rho0, HamiltonianSchedule::none(1e-3), {}, {.truncation_guard = -1.0});
  CHECK(max_abs(r.final_state.matrix() - rho0.matrix()) == 0.0);
  const auto z = evolve(rho0, HamiltonianSchedule::none(0.0), {});
  CHECK(z.step_count == 0);
  CHECK(max_abs(z.final_state.matrix() - rho0.matrix()) == 0.0);
}

TEST_CASE("evolve agrees with matrix-exponential propagation on a 2x5 space") {
  std::mt19937_64 rng(5);
  const Index n = 5;
  const auto rho0 = random_state(2 * n, rng);
  const Mat h = 1e3 * random_hermitian(2 * n, rng);
  const double t = 2e-3;
  const Mat u = (cd(0, -t) * h).exp();
  const Mat expected = u * rho0.matrix() * u.adjoint();
  const auto r = evolve(rho0, HamiltonianSchedule::constant(Operator<double>(h, Factor::joint), t), {},
                        {.truncation_guard = -1.0});
  CHECK(max_abs(r.final_state.matrix() - expected) <= 1e-8);
}

TEST_CASE("evolve: time-dependent coefficients are honoured") {
  // H = f(t) sigma_x (x) 1 with f = w t: rotation angle is w t^2 / 2 per unit of the generator
  const Index n = 2;
  const double w = 4e6, t = 1e-3;
  HamiltonianSchedule s;
  s.duration = t;
  s.terms.push_back({lift(pauli(PauliKind::x), n), [w](double tt) { return w * tt; }});
  const auto r = evolve(joint_basis_state(kDown, 0, n), s, {}, {.truncation_guard = -1.0});
  const double angle = w * t * t / 2.0;
  CHECK(excited_population(r.final_state) == doctest::Approx(std::pow(std::sin(angle), 2)).epsilon(1e-8));
}

TEST_CASE("evolve: RK4 step halving converges") {
  // a red-sideband stroke with every ambient channel on, at the default step and at half of it
  const Index n = 12;
  Eigen::VectorXcd e(2);
  e << std::sqrt(0.32), std::sqrt(0.68);
  const auto rho0 = tensor(pure_state<double>(e, Factor::engine), thermal_state(1.2, n));
  const double g = 0.5 * 0.012 * 2.0 * 3.141592653589793 * 121.7e3;
  const auto s = HamiltonianSchedule::constant(jc(n, g), 180e-6);
  const std::vector<DissipatorSpec> d{DissipatorSpec::dephasing(318.0), DissipatorSpec::heating(0.4, 100.0),
                                      DissipatorSpec::decay(0.4)};
  const auto coarse = evolve(rho0, s, d, {.truncation_guard = -1.0});
  const auto fine = evolve(rho0, s, d, {.step = coarse.step / 2.0, .truncation_guard = -1.0});
  CHECK(fine.step_count == 2 * coarse.step_count);
  CHECK(max_abs(fine.final_state.matrix() - coarse.final_state.matrix()) <= 1e-7);
  CHECK(std::abs(coarse.final_state.matrix().trace().real() - 1.0) <= 1e-6);
  CHECK(max_abs(coarse.final_state.matrix() - coarse.final_state.matrix().adjoint()) <= 1e-9);
}

TEST_CASE("evolve: heating relaxes <n> to n_m") {
  const Index n = 60;
  const double n_m = 1.5, gamma = 5.0;
  const std::vector<DissipatorSpec> d{DissipatorSpec::heating(gamma, n_m)};
  const auto rho0 = joint_basis_state(kDown, 0, n);
  const auto r = evolve(rho0, HamiltonianSchedule::none(4.0), d, {.step = 5e-4, .truncation_guard = -1.0});
  // d<n>/dt = gamma (n_m - <n>) away from the truncation edge
  CHECK(mean_phonon(r.final_state) == doctest::Approx(n_m * (1 - std::exp(-gamma * 4.0))).epsilon(1e-4));
  // detailed balance: p_{k+1} / p_k = n_m / (1 + n_m)
  const auto p = load_populations(r.final_state);
  CHECK(p(3) / p(2) == doctest::Approx(n_m / (1 + n_m)).epsilon(1e-3));
}

TEST_CASE("evolve: snapshots are evenly spaced and strictly increasing") {
  const Index n = 4;
  const auto rho0 = joint_basis_state(kUp, 0, n);
  const auto r = evolve(rho0, HamiltonianSchedule::constant(jc(n, 1e3), 1e-3), {}, {.step = 1e-5, .snapshot_every = 10});
  CHECK(r.step_count == 100);
  REQUIRE(r.snapshots.size() == 10);
  for (std::size_t k = 0; k < r.snapshots.size(); ++k)
    CHECK(r.snapshots[k].time == doctest::Approx(1e-4 * double(k + 1)));
  CHECK(max_abs(r.snapshots.back().state.matrix() - r.final_state.matrix()) == 0.0);
  const auto c = evolve(rho0, HamiltonianSchedule::constant(jc(n, 1e3), 1e-3), {}, {.step = 1e-5, .snapshot_count = 4});
  REQUIRE(c.snapshots.size() >= 4);
  for (std::size_t k = 1; k < c.snapshots.size(); ++k) CHECK(c.snapshots[k].time > c.snapshots[k - 1].time);
}

TEST_CASE("default step rule") {
  const Index n = 4;
  const auto h = jc(n, 1e3);
  const double norm = h.matrix().cwiseAbs().rowwise().sum().maxCoeff();
  const std::vector<DissipatorSpec> slow{DissipatorSpec::decay(10.0)};
  CHECK(default_step(HamiltonianSchedule::constant(h, 1.0), slow) == doctest::Approx(1.0 / (50.0 * norm)));
  const std::vector<DissipatorSpec> fast{DissipatorSpec::decay(1e6)};
  CHECK(default_step(HamiltonianSchedule::constant(h, 1.0), fast) == doctest::Approx(1.0 / 5e7));
  CHECK(default_step(HamiltonianSchedule::none(1e-3), {}) == doctest::Approx(1e-3 / 200.0));
}

TEST_CASE("evolve error paths") {
  const Index n = 5;
  const auto rho0 = joint_basis_state(kDown, 0, n);
  auto kind_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::invalid_state;
  };
  // an unstable step explodes and is reported as an accuracy problem
  const std::vector<DissipatorSpec> stiff{DissipatorSpec::decay(1e9), DissipatorSpec::dephasing(1e9)};
  const auto excited = joint_basis_state(kUp, 1, n);
  CHECK(kind_of([&] { evolve(excited, HamiltonianSchedule::none(1e-6), stiff, {.step = 1e-7}); }) ==
        ErrorKind::integration_accuracy);
  // population at the truncation edge
  const auto edge = joint_basis_state(kDown, n - 1, n);
  CHECK(kind_of([&] { evolve(edge, HamiltonianSchedule::none(1e-6), {}); }) == ErrorKind::fock_overflow);
  CHECK_NOTHROW(evolve(edge, HamiltonianSchedule::none(1e-6), {}, {.truncation_guard = -1.0}));
  // bad inputs
  CHECK(kind_of([&] { evolve(rho0, HamiltonianSchedule::none(1e-6), {}, {.step = 1e-5}); }) ==
        ErrorKind::invalid_argument);
  const std::vector<DissipatorSpec> negative{DissipatorSpec::decay(-1.0)};
  CHECK(kind_of([&] { evolve(rho0, HamiltonianSchedule::none(1e-6), negative); }) == ErrorKind::invalid_config);
  const std::vector<DissipatorSpec> misplaced{{DissipatorKind::engine_decay, 1.0, 3.0}};
  CHECK(kind_of([&] { evolve(rho0, HamiltonianSchedule::none(1e-6), misplaced); }) == ErrorKind::invalid_config);
  CHECK(kind_of([&] { evolve(rho0, HamiltonianSchedule::constant(destroy(n), 1e-6), {}); }) ==
        ErrorKind::invalid_argument);
  CHECK(kind_of([&] { evolve(fock_state(0, n), HamiltonianSchedule::none(1e-6), {}); }) ==
        ErrorKind::invalid_argument);
  HamiltonianSchedule bad = HamiltonianSchedule::constant(lift(number(n), n), 1e-6);
  bad.terms[0].coefficient = [](double) { return std::nan(""); };
  CHECK(kind_of([&] { evolve(rho0, bad, {}); }) == ErrorKind::invalid_argument);
}

TEST_CASE("support threshold only drops negligible entries") {
  const Index n = 6;
  const auto rho0 = tensor(engine_state(kDown), thermal_state(0.6, n));
  const auto s = HamiltonianSchedule::constant(jc(n, 3e3), 2e-4);
  const std::vector<DissipatorSpec> d{DissipatorSpec::dephasing(318.0), DissipatorSpec::heating(0.4, 100.0)};
  const auto a = evolve(rho0, s, d, {.truncation_guard = -1.0});
  const auto b = evolve(rho0, s, d, {.truncation_guard = -1.0, .support_threshold = 0.0});
  CHECK(max_abs(a.final_state.matrix() - b.final_state.matrix()) <= 1e-13);
}
