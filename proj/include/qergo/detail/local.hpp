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

#ifndef QERGO_DETAIL_LOCAL_HPP
#define QERGO_DETAIL_LOCAL_HPP

#include "qergo/operator.hpp"

namespace qergo::detail {

/// Layout of a local factor inside a Kronecker product: row index = (l*q + s)*right + t.
struct LocalSlot {
  Eigen::Index left;   // dimension of sites before the slot
  Eigen::Index local;  // dimension of the slot
  Eigen::Index right;  // dimension of sites after the slot
};

/// out = (I_left (x) a (x) I_right) * m, without materializing the Kronecker product.
void apply_left(const Matrix& a, const LocalSlot& slot, const Matrix& m, Matrix& out);

/// out = (I (x) a (x) I) * m * (I (x) a (x) I)^dagger.
void conjugate(const Matrix& a, const LocalSlot& slot, const Matrix& m, Matrix& out);

/// out (+)= (I (x) a (x) I) * m * (I (x) a (x) I)^dagger; `out` must already have
/// the shape of `m` when accumulating. `scratch` is reused between calls.
void conjugate_accumulate(const Matrix& a, const LocalSlot& slot, const Matrix& m, Matrix& scratch, Matrix& out,
                          bool accumulate);

}  // namespace qergo::detail

#endif  // QERGO_DETAIL_LOCAL_HPP
