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

#include "qergo/detail/local.hpp"

namespace qergo::detail {

namespace {

using Strided = Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>;

// m * (I_left (x) x (x) I_right). For fixed l the columns (l, k, t) form a
// contiguous (rows*right) x q block, so each left index is one GEMM.
template <bool Accumulate>
void right_kernel(const Matrix& m, const LocalSlot& slot, const Matrix& x, Matrix& out) {
  const Eigen::Index q = slot.local;
  const Eigen::Index chunk = m.rows() * slot.right;
  for (Eigen::Index l = 0; l < slot.left; ++l) {
    Eigen::Map<const Matrix> in(m.data() + l * q * chunk, chunk, q);
    Eigen::Map<Matrix> dst(out.data() + l * q * chunk, chunk, q);
    if constexpr (Accumulate) {
      dst.noalias() += in * x;
    } else {
      dst.noalias() = in * x;
    }
  }
}

// (I_left (x) a (x) I_right) * m. Column-major storage puts entry ((l, s, t), c)
// at t + right*(s + q*(l + left*c)), so l and c merge into one index L and the
// product acts on the middle index of a right x q x L tensor.
template <bool Accumulate>
void left_kernel(const Matrix& a, const LocalSlot& slot, const Matrix& m, Matrix& out) {
  const Eigen::Index q = slot.local;
  const Eigen::Index right = slot.right;
  const Eigen::Index count = slot.left * m.cols();
  const Matrix at = a.transpose();
  if (right >= q) {
    for (Eigen::Index L = 0; L < count; ++L) {
      Eigen::Map<const Matrix> in(m.data() + L * q * right, right, q);
      Eigen::Map<Matrix> dst(out.data() + L * q * right, right, q);
      if constexpr (Accumulate) {
        dst.noalias() += in * at;
      } else {
        dst.noalias() = in * at;
      }
    }
  } else {
    for (Eigen::Index t = 0; t < right; ++t) {
      Eigen::Map<const Matrix, 0, Strided> in(m.data() + t, q, count, Strided(q * right, right));
      Eigen::Map<Matrix, 0, Strided> dst(out.data() + t, q, count, Strided(q * right, right));
      if constexpr (Accumulate) {
        dst.noalias() += a * in;
      } else {
        dst.noalias() = a * in;
      }
    }
  }
}

}  // namespace

void apply_left(const Matrix& a, const LocalSlot& slot, const Matrix& m, Matrix& out) {
  out.resize(m.rows(), m.cols());
  left_kernel<false>(a, slot, m, out);
}

void conjugate(const Matrix& a, const LocalSlot& slot, const Matrix& m, Matrix& out) {
  out.resize(m.rows(), m.cols());
  Matrix half(m.rows(), m.cols());
  conjugate_accumulate(a, slot, m, half, out, false);
}

void conjugate_accumulate(const Matrix& a, const LocalSlot& slot, const Matrix& m, Matrix& scratch, Matrix& out,
                          bool accumulate) {
  scratch.resize(m.rows(), m.cols());
  right_kernel<false>(m, slot, a.adjoint(), scratch);
  if (accumulate) {
    left_kernel<true>(a, slot, scratch, out);
  } else {
    left_kernel<false>(a, slot, scratch, out);
  }
}

}  // namespace qergo::detail
