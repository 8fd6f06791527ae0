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

#ifndef QERGO_EXPECTATION_HPP
#define QERGO_EXPECTATION_HPP

#include <cstdint>
#include <span>

#include "qergo/basis.hpp"
#include "qergo/classical.hpp"
#include "qergo/operator.hpp"

namespace qergo {

/// Pinching onto the maximal abelian subalgebra spanned by the product-basis
/// projectors: sum_w <w|a|w> |w><w|.
Operator conditional_expectation(const Operator& a, const PinchingBasis& basis);

struct ExpectationPropertyReport {
  int trials = 0;
  double positivity = 0.0;      // most negative eigenvalue of E(a) for PSD a, as a violation >= 0
  double fixed_points = 0.0;    // max |E(b) - b| for b in the subalgebra
  double module_property = 0.0; // max |E(ab) - E(a) b| for b in the subalgebra
  double trace = 0.0;           // max |tr a - tr E(a)|
  double tolerance = 1e-10;
  bool positivity_passed = false;
  bool fixed_points_passed = false;
  bool module_passed = false;
  bool trace_passed = false;
  bool passed() const { return positivity_passed && fixed_points_passed && module_passed && trace_passed; }
};

/// Checks positivity, fixed points, the module property and trace
/// compatibility on random inputs over 1..max_sites sites.
ExpectationPropertyReport verify_expectation_properties(const PinchingBasis& basis, int trials, std::uint64_t seed,
                                                        int max_sites = 3, double tol = 1e-10);

/// mu(w) = <w|rho|w> over the m-site product basis.
MeasureTable state_to_measure(const DensityOperator& rho, const PinchingBasis& basis);

/// sum_w mu(w) |w><w|. Throws ValidationError for negative or unnormalized tables.
DensityOperator measure_to_state(const MeasureTable& mu, const PinchingBasis& basis);

/// Projector onto span{|w> : w in words} in the subalgebra.
Operator subalgebra_projector(const PinchingBasis& basis, int sites, std::span<const std::size_t> words);

/// sum of mu(w) over the given words.
double measure_of(const MeasureTable& mu, std::span<const std::size_t> words);

}  // namespace qergo

#endif  // QERGO_EXPECTATION_HPP
