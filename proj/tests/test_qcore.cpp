// Copyright 2026 The holo-refocus Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "holo/qcore.hpp"

using namespace holo;

namespace {

const BasisPtr& optical() {
  static const BasisPtr b = make_basis({"g1", "g2", "g3", "e", "sink"});
  return b;
}

CMatrix random_matrix(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> n;
  CMatrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = Complex(n(rng), n(rng));
  return m;
}

CVector random_vector(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> n;
  CVector v(d);
  for (int i = 0; i < d; ++i) v[i] = Complex(n(rng), n(rng));
  return v;
}

}  // namespace

TEST_CASE("basis rejects duplicates and bad sizes") {
  CHECK_THROWS_AS(LevelBasis({"a", "a"}), DimensionError);
  CHECK_THROWS_AS(LevelBasis({}), DimensionError);
  CHECK_THROWS_AS(LevelBasis({"1", "2", "3", "4", "5", "6", "7", "8", "9"}), DimensionError);
  CHECK(optical()->index("e") == 3);
  CHECK_THROWS_AS(optical()->index("g7"), LookupError);
}

TEST_CASE("adjoint examples") {
  const BasisPtr spin = make_basis({"up", "down"});
  const QOperator sz = pauli::on(spin, pauli::z());
  CHECK((adjoint(sz).matrix() - sz.matrix()).norm() == 0.0);

  const QOperator s2e = QOperator::transition(optical(), "g2", "e");
  const QOperator se2 = QOperator::transition(optical(), "e", "g2");
  CHECK((adjoint(s2e).matrix() - se2.matrix()).norm() == 0.0);

  const QOperator iid = QOperator::identity(spin) * kI;
  CHECK((adjoint(iid).matrix() + iid.matrix()).norm() == 0.0);
}

TEST_CASE("apply examples") {
  const QOperator se2 = QOperator::transition(optical(), "e", "g2");
  const QState g2 = QState::basis_state(optical(), "g2");
  const QState g1 = QState::basis_state(optical(), "g1");
  CHECK(apply(se2, g2).amplitude("e") == Complex(1.0, 0.0));
  CHECK(apply(se2, g1).norm_squared() == 0.0);
  CHECK((apply(QOperator::identity(optical()), g2).amplitudes() - g2.amplitudes()).norm() == 0.0);

  const BasisPtr spin = make_basis({"up", "down"});
  CHECK_THROWS_AS(apply(QOperator::identity(spin), g2), DimensionError);
}

TEST_CASE("project_gate examples") {
  CHECK((project_gate(QOperator::identity(optical()), {"g1", "g2"}) - Mat2::Identity()).norm() == 0.0);

  CMatrix d = CMatrix::Zero(5, 5);
  d.diagonal() << 2.0, Complex(0.0, 3.0), 4.0, 5.0, 6.0;
  const Mat2 g = project_gate(QOperator(optical(), d), {"g1", "g2"});
  CHECK(g(0, 0) == Complex(2.0, 0.0));
  CHECK(g(1, 1) == Complex(0.0, 3.0));
  CHECK(g(0, 1) == Complex(0.0, 0.0));
  CHECK_THROWS_AS(project_gate(QOperator(optical(), d), {"g1", "zz"}), LookupError);

  // exp((phi_d + i phi_g)|1><1|) restricted to the computational pair.
  const double phi_d = -0.3, phi_g = 1.1;
  CMatrix u = CMatrix::Identity(5, 5);
  u(1, 1) = std::exp(Complex(phi_d, phi_g));
  const Mat2 gu = project_gate(QOperator(optical(), u), {"g1", "g2"});
  CHECK(std::abs(gu(1, 1) - std::exp(Complex(phi_d, phi_g))) < 1e-15);
  CHECK(gu(0, 0) == Complex(1.0, 0.0));
}

TEST_CASE("property: adjoint involution, linear apply, positive A^dagger A") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + static_cast<int>(rng() % kMaxDim);
    std::vector<std::string> labels;
    for (int i = 0; i < d; ++i) labels.push_back("l" + std::to_string(i));
    const BasisPtr b = make_basis(labels);
    const QOperator a(b, random_matrix(rng, d));
    CHECK((adjoint(adjoint(a)).matrix() - a.matrix()).norm() == 0.0);

    const QState x(b, random_vector(rng, d)), y(b, random_vector(rng, d));
    const Complex alpha(0.3, -1.2);
    const QState combo(b, x.amplitudes() + alpha * y.amplitudes());
    const CVector lhs = apply(a, combo).amplitudes();
    const CVector rhs = apply(a, x).amplitudes() + alpha * apply(a, y).amplitudes();
    CHECK((lhs - rhs).norm() < 1e-12 * (1.0 + lhs.norm()));

    const Complex q = x.inner(apply(adjoint(a) * a, x));
    CHECK(q.real() >= -1e-12);
    CHECK(std::abs(q.imag()) < 1e-10 * (1.0 + q.real()));
  }
}

TEST_CASE("pauli conventions") {
  CHECK(pauli::z()(0, 0) == Complex(1.0, 0.0));
  CHECK(pauli::y()(0, 1) == Complex(0.0, -1.0));
  CHECK((pauli::x() * pauli::y() - kI * pauli::z()).norm() < 1e-15);
}

TEST_CASE("singular values, polar factor and trace distance") {
  Mat2 m;
  m << 3.0, 0.0, 0.0, Complex(0.0, 2.0);
  const auto sv = singular_values(m);
  CHECK(sv[0] == doctest::Approx(3.0));
  CHECK(sv[1] == doctest::Approx(2.0));
  const Mat2 w = polar_unitary(m);
  CHECK((w.adjoint() * w - Mat2::Identity()).norm() < 1e-14);
  CHECK(std::abs(w(1, 1) - kI) < 1e-14);

  CHECK(commutator_norm(pauli::x(), pauli::x()) == 0.0);
  CHECK(commutator_norm(pauli::x(), pauli::z()) == doctest::Approx(2.0 * std::sqrt(2.0)));

  CMatrix a = CMatrix::Zero(2, 2), b = CMatrix::Zero(2, 2);
  a(0, 0) = 1.0;
  b(1, 1) = 1.0;
  CHECK(trace_distance(a, b) == doctest::Approx(1.0));
  CHECK(min_eigenvalue(a - b) == doctest::Approx(-1.0));
}

TEST_CASE("states: normalization and finiteness") {
  const QState z = QState::zero(optical());
  CHECK_THROWS_AS(z.normalized(), NumericalInstabilityError);
  const QState s = QState::from_components(optical(), {{"g1", 3.0}, {"g3", Complex(0.0, 4.0)}});
  CHECK(s.normalized().norm_squared() == doctest::Approx(1.0));
  CHECK(s.is_finite());
  CHECK_THROWS_AS(QState::from_components(optical(), {{"nope", 1.0}}), LookupError);
}
