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

#include "ioncycle/hilbert.hpp"

using namespace ioncycle;
using Mat = CMatrix<double>;

namespace {

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("destroy has sqrt(m+1) on the superdiagonal") {
  Mat two(2, 2);
  two << 0, 1, 0, 0;
  CHECK(max_abs(destroy(2).matrix() - two) == 0.0);
  CHECK(destroy(3).matrix()(1, 2).real() == doctest::Approx(std::sqrt(2.0)));
  const Index n = 7;
  const Mat ada = (create(n) * destroy(n)).matrix();
  CHECK(max_abs(ada - number(n).matrix()) < 1e-14);
  CHECK_THROWS_AS(destroy(1), Error);
  try {
    destroy(1);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_config);
  }
}

TEST_CASE("commutator [a, a+] is the identity below the top level") {
  const Index n = 9;
  const Mat c = (destroy(n) * create(n) - create(n) * destroy(n)).matrix();
  CHECK(max_abs(c.topLeftCorner(n - 1, n - 1) - Mat::Identity(n - 1, n - 1)) < 1e-12);
  CHECK(c(n - 1, n - 1).real() == doctest::Approx(-double(n - 1)));
}

TEST_CASE("pauli algebra in the up-first basis") {
  Mat z(2, 2);
  z << 1, 0, 0, -1;
  CHECK(max_abs(pauli(PauliKind::z).matrix() - z) == 0.0);
  Mat proj_up(2, 2);
  proj_up << 1, 0, 0, 0;
  CHECK(max_abs((pauli(PauliKind::plus) * pauli(PauliKind::minus)).matrix() - proj_up) == 0.0);
  const auto x = pauli(PauliKind::x);
  CHECK(max_abs((x * x).matrix() - Mat::Identity(2, 2)) == 0.0);
  CHECK(max_abs(x.matrix() - (pauli(PauliKind::plus) + pauli(PauliKind::minus)).matrix()) == 0.0);
}

TEST_CASE("tensor puts the engine leftmost") {
  const Index n = 4;
  const auto id = tensor(identity(Factor::engine), identity(Factor::load, n));
  CHECK(id.factor() == Factor::joint);
  CHECK(max_abs(id.matrix() - Mat::Identity(2 * n, 2 * n)) == 0.0);

  const auto zi = lift(pauli(PauliKind::z), n);
  const auto in = lift(number(n), n);
  CHECK(max_abs((zi * in - in * zi).matrix()) == 0.0);

  // sigma+ a |down, 1> = |up, 0>
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(2 * n);
  psi(kDown * n + 1) = 1.0;
  const Eigen::VectorXcd out = tensor(pauli(PauliKind::plus), destroy(n)).matrix() * psi;
  Eigen::VectorXcd expected = Eigen::VectorXcd::Zero(2 * n);
  expected(kUp * n + 0) = 1.0;
  CHECK((out - expected).norm() < 1e-15);

  CHECK_THROWS_AS(tensor(destroy(n), pauli(PauliKind::z)), Error);
}

TEST_CASE("operator tags must match their dimension") {
  CHECK_THROWS_AS(Operator<double>(Mat::Identity(3, 3), Factor::engine), Error);
  CHECK_THROWS_AS(Operator<double>(Mat::Identity(5, 5), Factor::joint), Error);
  CHECK_THROWS_AS(Operator<double>(Mat::Identity(2, 3), Factor::load), Error);
  CHECK_THROWS_AS(destroy(3) + destroy(4), Error);
}

TEST_CASE("density matrix invariants are enforced") {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = 0.5;
  m(1, 1) = 0.4;
  CHECK_THROWS_AS(DensityMatrix<double>(m, Factor::engine), Error);
  m(1, 1) = 0.5;
  m(0, 1) = std::complex<double>(0.1, 0.0);
  CHECK_THROWS_AS(DensityMatrix<double>(m, Factor::engine), Error);  // not hermitian
  m(1, 0) = std::complex<double>(0.1, 0.0);
  CHECK_NOTHROW(DensityMatrix<double>(m, Factor::engine));
  m(0, 1) = m(1, 0) = 0.7;  // eigenvalue -0.2
  CHECK_THROWS_AS(DensityMatrix<double>(m, Factor::engine), Error);
  // a looser trace tolerance is honoured
  Mat loose = Mat::Identity(2, 2) * 0.5005;
  CHECK_THROWS_AS(DensityMatrix<double>(loose, Factor::engine), Error);
  CHECK_NOTHROW(DensityMatrix<double>(loose, Factor::engine, 1e-2));
}

TEST_CASE("partial trace of a product state factors exactly") {
  const Index n = 6;
  Mat e(2, 2);
  e << 0.3, std::complex<double>(0.1, 0.2), std::complex<double>(0.1, -0.2), 0.7;
  const DensityMatrix<double> rho_e(e, Factor::engine);
  const auto rho_l = thermal_state(0.8, n);
  const auto joint = tensor(rho_e, rho_l);
  CHECK(max_abs(partial_trace(joint, Keep::load).matrix() - rho_l.matrix()) <= 1e-12);
  CHECK(max_abs(partial_trace(joint, Keep::engine).matrix() - rho_e.matrix()) <= 1e-12);
  CHECK(std::abs(partial_trace(joint, Keep::load).matrix().trace().real() - 1.0) <= 1e-12);
  CHECK_THROWS_AS(partial_trace(rho_l, Keep::load), Error);
}

TEST_CASE("partial trace of the entangled quarter state") {
  const Index n = 5;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(2 * n);
  psi(kDown * n + 2) = 0.5;
  psi(kUp * n + 0) = std::sqrt(3.0) / 2.0;
  const auto rho = pure_state<double>(psi, Factor::joint);
  const Mat load = partial_trace(rho, Keep::load).matrix();
  Mat expected = Mat::Zero(n, n);
  expected(0, 0) = 0.75;
  expected(2, 2) = 0.25;
  CHECK(max_abs(load - expected) < 1e-15);
  const Mat engine = partial_trace(rho, Keep::engine).matrix();
  CHECK(engine(kUp, kUp).real() == doctest::Approx(0.75));
  CHECK(std::abs(engine(kUp, kDown)) < 1e-15);
}

TEST_CASE("thermal state") {
  const auto ground = thermal_state(0.0, 10);
  CHECK(ground.matrix()(0, 0).real() == 1.0);
  CHECK(max_abs(ground.matrix() - fock_state(0, 10).matrix()) == 0.0);

  const double nbar = 1.2;
  const auto rho = thermal_state(nbar, 40);
  CHECK(rho.matrix()(0, 0).real() == doctest::Approx(1.0 / 2.2).epsilon(1e-9));
  CHECK(std::abs(mean_phonon(rho) - nbar) < 1e-6);
  const auto p = rho.populations();
  for (Index k = 1; k < p.size(); ++k) CHECK(p(k) < p(k - 1));
  CHECK(std::abs(p.sum() - 1.0) < 1e-14);

  // renormalised over a harsh truncation
  const auto cut = thermal_state(1.2, 3);
  const double r = 1.2 / 2.2;
  CHECK(cut.populations()(2) == doctest::Approx(r * r / (1 + r + r * r)));
  CHECK_THROWS_AS(thermal_state(-0.1, 10), Error);
}

TEST_CASE("expectation values") {
  const Index n = 40;
  CHECK(expectation(fock_state(0, n), number(n)).real() == 0.0);
  const auto th = thermal_state(1.2, n);
  const auto en = expectation(th, number(n));
  CHECK(std::abs(en.real() - 1.2) < 1e-6);
  CHECK(std::abs(en.imag()) < 1e-9);
  CHECK(std::abs(expectation(th, identity(Factor::load, n)) - 1.0) < 1e-12);
  CHECK_THROWS_AS(expectation(th, number(n - 1)), Error);
  CHECK_THROWS_AS(expectation(th, lift(number(n), n)), Error);

  // joint helpers agree with lifted observables
  const auto joint = tensor(engine_state(kUp), th);
  CHECK(mean_phonon(joint) == doctest::Approx(expectation(joint, lift(number(n), n)).real()));
  CHECK(excited_population(joint) == doctest::Approx(1.0));
  CHECK(load_populations(joint).isApprox(th.populations()));
}

TEST_CASE("pure and fock states") {
  CHECK_THROWS_AS(fock_state(5, 5), Error);
  CHECK_THROWS_AS(pure_state<double>(Eigen::VectorXcd::Zero(4), Factor::joint), Error);
  Eigen::VectorXcd v(2);
  v << 3.0, 4.0;
  const auto rho = pure_state<double>(v, Factor::engine);
  CHECK(rho.matrix()(0, 0).real() == doctest::Approx(0.36));
  CHECK(rho.matrix()(0, 1).real() == doctest::Approx(0.48));
}
