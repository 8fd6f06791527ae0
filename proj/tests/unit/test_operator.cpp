// Copyright 2026 The qergo Authors
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

#include <doctest.h>

#include "oracle.hpp"
#include "qergo/operator.hpp"

using namespace qergo;

namespace {

Operator qubit(std::initializer_list<std::initializer_list<Complex>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (Complex v : row) m(r, c++) = v;
    ++r;
  }
  return Operator(2, 1, m);
}

}  // namespace

TEST_SUITE("operator") {

TEST_CASE("tensor product of identities and projectors") {
  CHECK(tensor_product(Operator::identity(2, 1), Operator::identity(2, 1)).matrix() == Matrix::Identity(4, 4));
  const Operator p0 = ops::basis_projector(2, 0);
  const Operator p1 = ops::basis_projector(2, 1);
  Matrix expected = Matrix::Zero(4, 4);
  expected(1, 1) = 1.0;
  const Operator t = tensor_product(p0, p1);
  CHECK(t.sites() == 2);
  CHECK(t.matrix() == expected);
}

TEST_CASE("tensor product matches a loop Kronecker and is associative") {
  const SiteConfig cfg(2);
  const Operator a = random_observable(cfg, 1, 1);
  const Operator b = random_observable(cfg, 2, 2);
  const Operator c = random_observable(cfg, 1, 3);
  const Operator ab = tensor_product(a, b);
  CHECK(oracle::max_abs(ab.matrix() - oracle::kron(a.matrix(), b.matrix())) == 0.0);
  CHECK(std::abs(oracle::trace(ab.matrix()) - oracle::trace(a.matrix()) * oracle::trace(b.matrix())) <= 1e-12);
  CHECK(oracle::max_abs(tensor_product(ab, c).matrix() - tensor_product(a, tensor_product(b, c)).matrix()) <= 1e-15);
  // Exactly representable entries give bit-identical results either way.
  const Operator x = ops::pauli_x(), y = ops::pauli_y(), z = tensor_product(ops::pauli_z(), ops::basis_projector(2, 1));
  CHECK(tensor_product(tensor_product(x, y), z).matrix() == tensor_product(x, tensor_product(y, z)).matrix());
}

TEST_CASE("tensor product rejects mismatched site dimensions and the dense cap") {
  CHECK_THROWS_AS(tensor_product(Operator::identity(2, 1), Operator::identity(3, 1)), ShapeError);
  CHECK_THROWS_AS(tensor_power(Operator::identity(2, 1), 13), ResourceError);
  CHECK_NOTHROW(dense_dim(2, 12));
  try {
    dense_dim(2, 13);
    FAIL("expected ResourceError");
  } catch (const ResourceError& e) {
    CHECK(e.cap() == 4096);
  }
}

TEST_CASE("dense cap can be raised and restored") {
  const std::size_t saved = dense_max_dim();
  set_dense_max_dim(1 << 14);
  CHECK_NOTHROW(dense_dim(2, 14));
  set_dense_max_dim(saved);
  CHECK_THROWS_AS(dense_dim(2, 14), ResourceError);
}

TEST_CASE("operator construction validates shape and finiteness") {
  CHECK_THROWS_AS(Operator(2, 2, Matrix::Identity(2, 2)), ShapeError);
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS(Operator(2, 1, bad));
  CHECK_THROWS(SiteConfig(1));
}

TEST_CASE("trace pairing on hand examples") {
  const DensityOperator mixed(qubit({{0.5, 0}, {0, 0.5}}));
  CHECK(std::abs(trace_pairing(mixed, ops::pauli_z())) == doctest::Approx(0.0));
  const DensityOperator zero(ops::basis_projector(2, 0));
  CHECK(std::abs(trace_pairing(zero, ops::pauli_z()) - 1.0) <= 1e-15);
  // 0.5 |0><0| + 0.5 |+><+| has <X> = 0.5 * 0 + 0.5 * 1.
  const DensityOperator rho(qubit({{0.75, 0.25}, {0.25, 0.25}}));
  const Complex x = trace_pairing(rho, ops::pauli_x());
  CHECK(x.real() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(x.imag()) <= 1e-12);
  CHECK_THROWS_AS(trace_pairing(rho, Operator::identity(2, 2)), ShapeError);
}

TEST_CASE("trace pairing with identity is one and real for Hermitian observables") {
  const SiteConfig cfg(2);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const DensityOperator rho = random_density(cfg, 3, s);
    CHECK(std::abs(trace_pairing(rho, Operator::identity(2, 3)) - 1.0) <= 1e-10);
    const Complex v = trace_pairing(rho, random_observable(cfg, 3, 100 + s));
    CHECK(std::abs(v.imag()) <= 1e-12);
    CHECK(std::abs(v - oracle::trace(rho.matrix() * random_observable(cfg, 3, 100 + s).matrix())) <= 1e-12);
  }
}

TEST_CASE("embedding pads with identities") {
  const Operator a = random_observable(SiteConfig(2), 1, 5);
  CHECK(embed_observable(a, 0, 0).matrix() == a.matrix());
  Matrix expected = Matrix::Zero(4, 4);
  expected.diagonal() << 1.0, -1.0, 1.0, -1.0;
  CHECK(embed_observable(ops::pauli_z(), 1, 0).matrix() == expected);
  const Operator e = embed_observable(a, 2, 1);
  CHECK(oracle::max_abs(e.matrix() - oracle::kron(oracle::kron(oracle::eye(4), a.matrix()), oracle::eye(2))) == 0.0);
  CHECK(std::abs(oracle::trace(e.matrix()) - 8.0 * oracle::trace(a.matrix())) <= 1e-12);
  CHECK(embed_observable(Operator::identity(2, 1), 2, 3).matrix() == Matrix::Identity(64, 64));
  CHECK_THROWS_AS(embed_observable(a, -1, 0), ShapeError);
  CHECK_THROWS_AS(embed_observable(a, 6, 6), ResourceError);
}

TEST_CASE("density validation reports") {
  CHECK(validate_density(qubit({{0.5, 0}, {0, 0.5}})).passed);
  const DensityReport r = validate_density(qubit({{0.75, 0.25}, {0.25, 0.25}}));
  CHECK(r.passed);
  // Eigenvalues of [[0.75,0.25],[0.25,0.25]]: 0.5 -/+ sqrt(0.0625 + 0.0625).
  CHECK(r.min_eigenvalue == doctest::Approx(0.5 - std::sqrt(0.125)).epsilon(1e-12));
  const DensityReport bad = validate_density(qubit({{1, 0}, {0, 0.1}}));
  CHECK_FALSE(bad.passed);
  CHECK(bad.trace_deviation == doctest::Approx(0.1));
  CHECK_FALSE(validate_density(qubit({{0.5, 0.1}, {0.0, 0.5}})).passed);
  CHECK_FALSE(validate_density(qubit({{1.2, 0}, {0, -0.2}})).passed);
  CHECK_THROWS_AS(DensityOperator(qubit({{1, 0}, {0, 0.1}})), ValidationError);
}

TEST_CASE("random observables are deterministic, Hermitian and scaled") {
  const SiteConfig cfg(2);
  const Operator a = random_observable(cfg, 3, 42);
  const Operator b = random_observable(cfg, 3, 42);
  CHECK(a.matrix() == b.matrix());
  CHECK(oracle::max_abs(a.matrix() - a.matrix().adjoint()) <= 1e-15);
  CHECK_FALSE(a.matrix() == random_observable(cfg, 3, 43).matrix());
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Operator o = random_observable(cfg, 2, s);
    // Operator norm of a Hermitian matrix is its largest absolute eigenvalue.
    Eigen::SelfAdjointEigenSolver<Matrix> es(o.matrix());
    const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
    CHECK(norm <= 1.0 + 1e-12);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-9));
  }
  const Operator big = random_observable(SiteConfig(3), 1, 9, 2.5);
  CHECK(operator_norm(big.matrix()) == doctest::Approx(2.5).epsilon(1e-9));
  CHECK_THROWS_AS(random_observable(cfg, 13, 1), ResourceError);
}

TEST_CASE("random states and unitaries") {
  const DensityOperator rho = random_density(SiteConfig(3), 2, 4);
  CHECK(validate_density(rho.op()).passed);
  const Matrix u = random_unitary(3, 8);
  CHECK(oracle::max_abs(u.adjoint() * u - oracle::eye(3)) <= 1e-12);
  CHECK(random_unitary(3, 8) == u);
}

TEST_CASE("Pauli algebra") {
  const Matrix x = ops::pauli_x().matrix();
  const Matrix y = ops::pauli_y().matrix();
  const Matrix z = ops::pauli_z().matrix();
  CHECK(oracle::max_abs(x * y - Complex(0, 1) * z) == 0.0);
  CHECK(oracle::max_abs(x * x - oracle::eye(2)) == 0.0);
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  CHECK(oracle::max_abs(ops::projector(plus).matrix() - 0.5 * (oracle::eye(2) + x)) <= 1e-15);
}

}  // TEST_SUITE
