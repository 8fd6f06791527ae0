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

#include "qergo/operator.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>

namespace qergo {

namespace {

constexpr std::size_t kDefaultDenseMaxDim = 4096;

std::size_t initial_dense_max_dim() {
  if (const char* env = std::getenv("QERGO_DENSE_MAX_DIM")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v >= 2) return static_cast<std::size_t>(v);
  }
  return kDefaultDenseMaxDim;
}

std::atomic<std::size_t>& dense_cap_storage() {
  static std::atomic<std::size_t> cap{initial_dense_max_dim()};
  return cap;
}

Matrix gaussian_matrix(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(n, n);
  // Column-major fill order is part of the determinism contract.
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) {
      double re = normal(rng);
      double im = normal(rng);
      g(r, c) = Complex(re, im);
    }
  }
  return g;
}

}  // namespace

SiteConfig::SiteConfig(int d) : d_(d) {
  if (d < 2) throw ParameterError("site dimension must be >= 2, got " + std::to_string(d));
}

std::size_t dense_max_dim() { return dense_cap_storage().load(); }

void set_dense_max_dim(std::size_t max_dim) {
  if (max_dim < 2) throw ParameterError("dense cap must be >= 2");
  dense_cap_storage().store(max_dim);
}

std::size_t dense_dim(int d, int sites) {
  if (d < 2) throw ParameterError("site dimension must be >= 2");
  if (sites < 0) throw ShapeError("negative site count");
  const std::size_t cap = dense_max_dim();
  std::size_t dim = 1;
  for (int s = 0; s < sites; ++s) {
    dim *= static_cast<std::size_t>(d);
    if (dim > cap) {
      throw ResourceError("dense operator on " + std::to_string(sites) + " sites of dimension " +
                              std::to_string(d) + " exceeds the dense cap",
                          cap);
    }
  }
  return dim;
}

Operator::Operator(int d, int sites, Matrix entries) : d_(d), sites_(sites), entries_(std::move(entries)) {
  if (d < 2) throw ParameterError("site dimension must be >= 2");
  if (sites < 1) throw ShapeError("operator needs at least one site");
  const auto dim = static_cast<Eigen::Index>(dense_dim(d, sites));
  if (entries_.rows() != dim || entries_.cols() != dim) {
    std::ostringstream os;
    os << "operator on " << sites << " sites of dimension " << d << " must be " << dim << "x" << dim
       << ", got " << entries_.rows() << "x" << entries_.cols();
    throw ShapeError(os.str());
  }
  if (!entries_.allFinite()) throw ValidationError("operator has non-finite entries");
}

Operator Operator::identity(int d, int sites) {
  const auto dim = static_cast<Eigen::Index>(dense_dim(d, sites));
  return Operator(d, sites, Matrix::Identity(dim, dim));
}

Operator Operator::zero(int d, int sites) {
  const auto dim = static_cast<Eigen::Index>(dense_dim(d, sites));
  return Operator(d, sites, Matrix::Zero(dim, dim));
}

Operator Operator::adjoint() const { return Operator(d_, sites_, entries_.adjoint()); }

bool Operator::is_hermitian(double tol) const {
  return max_abs_entry(entries_ - entries_.adjoint()) <= tol;
}

std::string DensityReport::summary() const {
  std::ostringstream os;
  os << (passed ? "valid" : "invalid") << " density: hermiticity deviation " << hermiticity_deviation
     << ", min eigenvalue " << min_eigenvalue << ", trace deviation " << trace_deviation;
  return os.str();
}

DensityReport validate_density(const Operator& op, const Tolerances& tol) {
  DensityReport r;
  const Matrix& m = op.matrix();
  r.hermiticity_deviation = max_abs_entry(m - m.adjoint());
  r.min_eigenvalue = min_hermitian_eigenvalue(m);
  r.trace_deviation = std::abs(m.trace() - Complex(1.0, 0.0));
  r.passed = r.hermiticity_deviation <= tol.hermitian && r.min_eigenvalue >= -tol.psd &&
             r.trace_deviation <= tol.trace;
  return r;
}

DensityOperator::DensityOperator(Operator op, const Tolerances& tol) : op_(std::move(op)) {
  DensityReport r = validate_density(op_, tol);
  if (!r.passed) throw ValidationError(r.summary());
}

DensityOperator DensityOperator::by_construction(Operator op, const Tolerances& tol) {
  const Matrix& m = op.matrix();
  const double herm = max_abs_entry(m - m.adjoint());
  const double tr = std::abs(m.trace() - Complex(1.0, 0.0));
  if (herm > tol.hermitian || tr > tol.trace) {
    throw ValidationError("not a density operator: hermiticity deviation " + std::to_string(herm) +
                          ", trace deviation " + std::to_string(tr));
  }
  return DensityOperator(std::move(op), Unchecked{});
}

Operator tensor_product(const Operator& a, const Operator& b) {
  if (a.d() != b.d()) throw ShapeError("tensor_product: operands have different site dimensions");
  const int sites = a.sites() + b.sites();
  const auto dim = static_cast<Eigen::Index>(dense_dim(a.d(), sites));
  const Matrix& x = a.matrix();
  const Matrix& y = b.matrix();
  Matrix out(dim, dim);
  const Eigen::Index n = y.rows();
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      out.block(i * n, j * n, n, n) = x(i, j) * y;
    }
  }
  return Operator(a.d(), sites, std::move(out));
}

Operator tensor_power(const Operator& a, int copies) {
  if (copies < 1) throw ShapeError("tensor_power needs at least one copy");
  Operator out = a;
  for (int k = 1; k < copies; ++k) out = tensor_product(out, a);
  return out;
}

DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator::by_construction(tensor_product(a.op(), b.op()));
}

DensityOperator tensor_power(const DensityOperator& a, int copies) {
  return DensityOperator::by_construction(tensor_power(a.op(), copies));
}

Complex trace_product(const Operator& x, const Operator& y) {
  if (x.d() != y.d() || x.sites() != y.sites()) {
    throw ShapeError("trace pairing: operators live on different spaces (" + std::to_string(x.sites()) +
                     " vs " + std::to_string(y.sites()) + " sites)");
  }
  // tr(XY) = sum_ij X_ij Y_ji
  return x.matrix().transpose().cwiseProduct(y.matrix()).sum();
}

Complex trace_pairing(const DensityOperator& rho, const Operator& a) { return trace_product(rho.op(), a); }

Operator embed_observable(const Operator& a, int left_pad, int right_pad) {
  if (left_pad < 0 || right_pad < 0) throw ShapeError("embed_observable: negative padding");
  dense_dim(a.d(), a.sites() + left_pad + right_pad);
  Operator out = a;
  if (left_pad > 0) out = tensor_product(Operator::identity(a.d(), left_pad), out);
  if (right_pad > 0) out = tensor_product(out, Operator::identity(a.d(), right_pad));
  return out;
}

Operator random_observable(const SiteConfig& cfg, int sites, std::uint64_t seed, double scale) {
  const auto dim = static_cast<Eigen::Index>(dense_dim(cfg.d(), sites));
  if (!(scale > 0.0)) throw ParameterError("random_observable: scale must be positive");
  std::mt19937_64 rng(seed);
  Matrix g = gaussian_matrix(dim, rng);
  Matrix h = 0.5 * (g + g.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
  h *= scale / norm;
  // Exact Hermiticity after rescaling.
  Matrix sym = 0.5 * (h + h.adjoint());
  return Operator(cfg.d(), sites, std::move(sym));
}

DensityOperator random_density(const SiteConfig& cfg, int sites, std::uint64_t seed) {
  const auto dim = static_cast<Eigen::Index>(dense_dim(cfg.d(), sites));
  std::mt19937_64 rng(seed);
  Matrix g = gaussian_matrix(dim, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  Matrix sym = 0.5 * (rho + rho.adjoint());
  return DensityOperator(Operator(cfg.d(), sites, std::move(sym)));
}

Matrix random_unitary(int d, std::uint64_t seed) {
  if (d < 1) throw ParameterError("random_unitary: dimension must be positive");
  std::mt19937_64 rng(seed);
  Matrix g = gaussian_matrix(d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix column phases so the distribution is Haar.
  for (Eigen::Index k = 0; k < d; ++k) {
    const Complex diag = r(k, k);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(k) *= diag / mag;
  }
  return q;
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double max_abs_entry(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double min_hermitian_eigenvalue(const Matrix& m) {
  Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

namespace ops {

Operator pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return Operator(2, 1, m);
}

Operator pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return Operator(2, 1, m);
}

Operator pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return Operator(2, 1, m);
}

Operator projector(const Vector& v) {
  return Operator(static_cast<int>(v.size()), 1, v * v.adjoint());
}

Operator basis_projector(int d, int k) {
  if (k < 0 || k >= d) throw ShapeError("basis_projector: index out of range");
  Matrix m = Matrix::Zero(d, d);
  m(k, k) = 1.0;
  return Operator(d, 1, m);
}

}  // namespace ops

}  // namespace qergo
