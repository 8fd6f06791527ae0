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

#include "qergo/expectation.hpp"

#include <algorithm>
#include <random>

#include "qergo/random.hpp"

namespace qergo {

namespace {

void require_basis(const Operator& a, const PinchingBasis& basis) {
  if (a.d() != basis.d()) throw ShapeError("operator and pinching basis have different site dimensions");
}

// Element of the subalgebra with the given coefficients on the product basis.
Operator from_diagonal(const PinchingBasis& basis, int sites, const Vector& coefficients) {
  if (basis.is_computational()) return Operator(basis.d(), sites, coefficients.asDiagonal().toDenseMatrix());
  const Matrix u = basis.product_unitary(sites);
  return Operator(basis.d(), sites, u * coefficients.asDiagonal() * u.adjoint());
}

Vector diagonal_in_basis(const Operator& a, const PinchingBasis& basis) {
  if (basis.is_computational()) return a.matrix().diagonal();
  const Matrix u = basis.product_unitary(a.sites());
  return (u.adjoint() * a.matrix() * u).diagonal();
}

}  // namespace

Operator conditional_expectation(const Operator& a, const PinchingBasis& basis) {
  require_basis(a, basis);
  return from_diagonal(basis, a.sites(), diagonal_in_basis(a, basis));
}

ExpectationPropertyReport verify_expectation_properties(const PinchingBasis& basis, int trials, std::uint64_t seed,
                                                        int max_sites, double tol) {
  if (trials < 1) throw ShapeError("verify_expectation_properties needs trials >= 1");
  if (max_sites < 1) throw ShapeError("max_sites must be >= 1");
  const SiteConfig cfg(basis.d());
  ExpectationPropertyReport r;
  r.trials = trials;
  r.tolerance = tol;
  for (int t = 0; t < trials; ++t) {
    const int sites = 1 + t % max_sites;
    const auto stream = static_cast<std::uint64_t>(t) * 4;
    const Operator a = random_observable(cfg, sites, derive_seed(seed, stream));
    const DensityOperator positive = random_density(cfg, sites, derive_seed(seed, stream + 1));

    std::mt19937_64 rng(derive_seed(seed, stream + 2));
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector coeffs(static_cast<Eigen::Index>(dense_dim(basis.d(), sites)));
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) coeffs(k) = Complex(normal(rng), normal(rng));
    const Operator b = from_diagonal(basis, sites, coeffs);

    // (a) positivity
    const Operator e_pos = conditional_expectation(positive.op(), basis);
    r.positivity = std::max(r.positivity, std::max(0.0, -min_hermitian_eigenvalue(e_pos.matrix())));
    // (b) fixed points
    r.fixed_points = std::max(r.fixed_points, max_abs_entry(conditional_expectation(b, basis).matrix() - b.matrix()));
    // (c) module property
    const Operator ab(basis.d(), sites, a.matrix() * b.matrix());
    const Matrix lhs = conditional_expectation(ab, basis).matrix();
    const Matrix rhs = conditional_expectation(a, basis).matrix() * b.matrix();
    r.module_property = std::max(r.module_property, max_abs_entry(lhs - rhs));
    // (d) trace, prefactor tr_A(I) / tr_C(I) = 1 for a maximal abelian subalgebra
    r.trace = std::max(r.trace, std::abs(a.matrix().trace() - conditional_expectation(a, basis).matrix().trace()));
  }
  r.positivity_passed = r.positivity <= tol;
  r.fixed_points_passed = r.fixed_points <= tol;
  r.module_passed = r.module_property <= tol;
  r.trace_passed = r.trace <= tol;
  return r;
}

MeasureTable state_to_measure(const DensityOperator& rho, const PinchingBasis& basis) {
  require_basis(rho.op(), basis);
  MeasureTable mu;
  mu.alphabet_size = basis.d();
  mu.length = rho.sites();
  const std::size_t words = word_count(basis.d(), rho.sites());
  const Vector diag = diagonal_in_basis(rho.op(), basis);
  mu.probabilities.resize(words);
  for (std::size_t w = 0; w < words; ++w) mu.probabilities[w] = diag(static_cast<Eigen::Index>(w)).real();
  return mu;
}

DensityOperator measure_to_state(const MeasureTable& mu, const PinchingBasis& basis) {
  if (mu.alphabet_size != basis.d()) throw ShapeError("measure alphabet does not match the basis dimension");
  mu.validate();
  Vector coeffs(static_cast<Eigen::Index>(mu.probabilities.size()));
  for (std::size_t w = 0; w < mu.probabilities.size(); ++w) coeffs(static_cast<Eigen::Index>(w)) = mu.probabilities[w];
  return DensityOperator(from_diagonal(basis, mu.length, coeffs));
}

Operator subalgebra_projector(const PinchingBasis& basis, int sites, std::span<const std::size_t> words) {
  const auto dim = static_cast<Eigen::Index>(dense_dim(basis.d(), sites));
  Vector coeffs = Vector::Zero(dim);
  for (std::size_t w : words) {
    if (static_cast<Eigen::Index>(w) >= dim) throw ShapeError("word index out of range");
    coeffs(static_cast<Eigen::Index>(w)) = 1.0;
  }
  return from_diagonal(basis, sites, coeffs);
}

double measure_of(const MeasureTable& mu, std::span<const std::size_t> words) {
  double sum = 0.0;
  for (std::size_t w : words) {
    if (w >= mu.probabilities.size()) throw ShapeError("word index out of range");
    sum += mu.probabilities[w];
  }
  return sum;
}

}  // namespace qergo
