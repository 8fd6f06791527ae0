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

#include "qergo/basis.hpp"

#include <cmath>

namespace qergo {

AlphabetSpec::AlphabetSpec(int d, std::vector<Vector> vectors) : d_(d), vectors_(std::move(vectors)) {
  SiteConfig cfg(d);
  if (vectors_.empty()) throw InvalidAlphabetError("alphabet is empty");
  if (size() > d) {
    throw InvalidAlphabetError("alphabet has " + std::to_string(size()) +
                               " vectors, more than the site dimension " + std::to_string(d));
  }
  for (int x = 0; x < size(); ++x) {
    const Vector& v = vectors_[static_cast<std::size_t>(x)];
    if (v.size() != d) {
      throw InvalidAlphabetError("alphabet vector " + std::to_string(x) + " has length " +
                                 std::to_string(v.size()) + ", expected " + std::to_string(d));
    }
    if (!v.allFinite()) throw InvalidAlphabetError("alphabet vector " + std::to_string(x) + " is not finite");
    if (std::abs(v.norm() - 1.0) > kNormTolerance) {
      throw InvalidAlphabetError("alphabet vector " + std::to_string(x) + " is not unit norm");
    }
  }
  if (gram_min_eigenvalue() <= kGramTolerance) {
    throw InvalidAlphabetError("alphabet vectors are linearly dependent");
  }
}

AlphabetSpec AlphabetSpec::computational(int d) {
  std::vector<Vector> vs;
  for (int k = 0; k < d; ++k) vs.push_back(Vector::Unit(d, k));
  return AlphabetSpec(d, std::move(vs));
}

double AlphabetSpec::gram_min_eigenvalue() const {
  const auto k = static_cast<Eigen::Index>(vectors_.size());
  Matrix gram(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) gram(i, j) = vectors_[i].dot(vectors_[j]);
  return min_hermitian_eigenvalue(gram);
}

bool AlphabetSpec::is_orthonormal(double tol) const {
  for (std::size_t i = 0; i < vectors_.size(); ++i)
    for (std::size_t j = 0; j < vectors_.size(); ++j) {
      const Complex expected = i == j ? 1.0 : 0.0;
      if (std::abs(vectors_[i].dot(vectors_[j]) - expected) > tol) return false;
    }
  return true;
}

PinchingBasis::PinchingBasis(Matrix columns) : columns_(std::move(columns)), computational_(false) {
  if (columns_.rows() != columns_.cols()) throw ShapeError("pinching basis must be square");
  SiteConfig cfg(static_cast<int>(columns_.rows()));
  const Eigen::Index d = columns_.rows();
  Matrix gram = columns_.adjoint() * columns_;
  if (max_abs_entry(gram - Matrix::Identity(d, d)) > kTolerance) {
    throw InvalidAlphabetError("pinching basis is not orthonormal");
  }
  computational_ = max_abs_entry(columns_ - Matrix::Identity(d, d)) == 0.0;
}

PinchingBasis PinchingBasis::computational(int d) {
  SiteConfig cfg(d);
  return PinchingBasis(Matrix::Identity(d, d));
}

Matrix PinchingBasis::product_unitary(int sites) const {
  const auto dim = static_cast<Eigen::Index>(dense_dim(d(), sites));
  if (computational_) return Matrix::Identity(dim, dim);
  return tensor_power(Operator(d(), 1, columns_), sites).matrix();
}

}  // namespace qergo
