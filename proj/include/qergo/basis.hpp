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

#ifndef QERGO_BASIS_HPP
#define QERGO_BASIS_HPP

#include <vector>

#include "qergo/operator.hpp"

namespace qergo {

/// Quantum alphabet: k <= d unit vectors of one site, linearly independent
/// but not necessarily orthogonal. Symbol x is encoded by vectors()[x].
class AlphabetSpec {
 public:
  static constexpr double kNormTolerance = 1e-12;
  static constexpr double kGramTolerance = 1e-10;

  AlphabetSpec(int d, std::vector<Vector> vectors);
  static AlphabetSpec computational(int d);

  int d() const { return d_; }
  int size() const { return static_cast<int>(vectors_.size()); }
  const std::vector<Vector>& vectors() const { return vectors_; }
  const Vector& operator[](int x) const { return vectors_[static_cast<std::size_t>(x)]; }
  /// Smallest eigenvalue of the Gram matrix <psi_i|psi_j>.
  double gram_min_eigenvalue() const;
  bool is_orthonormal(double tol = 1e-12) const;

 private:
  int d_;
  std::vector<Vector> vectors_;
};

/// Orthonormal basis e_1..e_d of one site, stored as the columns of a unitary.
/// It spans the maximal abelian subalgebra used by the conditional expectation.
class PinchingBasis {
 public:
  static constexpr double kTolerance = 1e-12;

  explicit PinchingBasis(Matrix columns);
  static PinchingBasis computational(int d);

  int d() const { return static_cast<int>(columns_.rows()); }
  const Matrix& unitary() const { return columns_; }
  Vector vector(int k) const { return columns_.col(k); }
  bool is_computational() const { return computational_; }
  /// U^{(x) sites}, whose columns are the product basis |w_1 ... w_m>.
  Matrix product_unitary(int sites) const;

 private:
  Matrix columns_;
  bool computational_;
};

}  // namespace qergo

#endif  // QERGO_BASIS_HPP
