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

#ifndef QERGO_OPERATOR_HPP
#define QERGO_OPERATOR_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "qergo/errors.hpp"

namespace qergo {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Tolerances used when deciding whether a matrix is a density operator.
struct Tolerances {
  double hermitian = 1e-10;
  double psd = 1e-10;
  double trace = 1e-10;
};

/// Single-site Hilbert space dimension.
class SiteConfig {
 public:
  explicit SiteConfig(int d);
  int d() const { return d_; }
  friend bool operator==(const SiteConfig&, const SiteConfig&) = default;

 private:
  int d_;
};

// Dense cap. Every materialized operator must satisfy d^sites <= dense_max_dim().
// The default 4096 is twelve qubits; QERGO_DENSE_MAX_DIM overrides it at startup.
std::size_t dense_max_dim();
void set_dense_max_dim(std::size_t max_dim);

/// d^sites, or ResourceError when it exceeds the dense cap.
std::size_t dense_dim(int d, int sites);

/// A dense operator on `sites` consecutive lattice sites, site 1 leftmost.
class Operator {
 public:
  Operator(int d, int sites, Matrix entries);

  static Operator identity(int d, int sites);
  static Operator zero(int d, int sites);

  int d() const { return d_; }
  int sites() const { return sites_; }
  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }

  Operator adjoint() const;
  bool is_hermitian(double tol) const;

 private:
  int d_;
  int sites_;
  Matrix entries_;
};

/// Diagnostics produced by validate_density.
struct DensityReport {
  double hermiticity_deviation = 0.0;  // max |A - A^dagger| entry
  double min_eigenvalue = 0.0;
  double trace_deviation = 0.0;  // |tr A - 1|
  bool passed = false;
  std::string summary() const;
};

DensityReport validate_density(const Operator& op, const Tolerances& tol = {});

/// Hermitian, positive semidefinite, unit-trace operator. Construction validates.
class DensityOperator {
 public:
  explicit DensityOperator(Operator op, const Tolerances& tol = {});

  /// For states that are positive by construction (products of states, channel
  /// outputs, convex mixtures of projectors): checks Hermiticity and trace but
  /// skips the eigenvalue solve.
  static DensityOperator by_construction(Operator op, const Tolerances& tol = {});

  const Operator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }
  int d() const { return op_.d(); }
  int sites() const { return op_.sites(); }
  Eigen::Index dim() const { return op_.dim(); }

 private:
  struct Unchecked {};
  DensityOperator(Operator op, Unchecked) : op_(std::move(op)) {}

  Operator op_;
};

/// Kronecker product with `a` on the lower site indices.
Operator tensor_product(const Operator& a, const Operator& b);
Operator tensor_power(const Operator& a, int copies);
DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b);
DensityOperator tensor_power(const DensityOperator& a, int copies);

/// tr(rho a).
Complex trace_pairing(const DensityOperator& rho, const Operator& a);
/// tr(x y) for arbitrary operators of equal shape.
Complex trace_product(const Operator& x, const Operator& y);

/// I^{(x) left_pad} (x) a (x) I^{(x) right_pad}.
Operator embed_observable(const Operator& a, int left_pad, int right_pad);

/// Hermitian operator with Gaussian entries, symmetrized and rescaled to
/// operator norm `scale`. Same (d, sites, seed) gives bit-identical output.
Operator random_observable(const SiteConfig& cfg, int sites, std::uint64_t seed,
                           double scale = 1.0);

/// Full-rank random state G G^dagger / tr(G G^dagger) with Gaussian G.
DensityOperator random_density(const SiteConfig& cfg, int sites, std::uint64_t seed);

/// Haar-style random unitary from the QR decomposition of a Gaussian matrix.
Matrix random_unitary(int d, std::uint64_t seed);

/// Largest singular value.
double operator_norm(const Matrix& m);
double max_abs_entry(const Matrix& m);

/// Minimum eigenvalue of the Hermitian part of `m`.
double min_hermitian_eigenvalue(const Matrix& m);

namespace ops {

Operator pauli_x();
Operator pauli_y();
Operator pauli_z();
/// |v><v| on one site of dimension v.size().
Operator projector(const Vector& v);
/// |k><k| in the computational basis of one d-dimensional site.
Operator basis_projector(int d, int k);

}  // namespace ops

}  // namespace qergo

#endif  // QERGO_OPERATOR_HPP
