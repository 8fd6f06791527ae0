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

#ifndef QERGO_SOURCES_HPP
#define QERGO_SOURCES_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qergo/basis.hpp"
#include "qergo/channels.hpp"
#include "qergo/classical.hpp"
#include "qergo/operator.hpp"

namespace qergo {

enum class SourceKind { iid, classically_correlated, channel_transformed, explicit_family };
enum class Backend { dense, transfer };

std::string to_string(SourceKind kind);
std::string to_string(Backend backend);
Backend backend_from_string(const std::string& name);

/// Generator of a family {rho_m}. Only finite truncations are ever materialized.
/// Copies share the immutable definition.
class QuantumSource {
 public:
  /// rho_m = sigma^{(x) m} for a one-site state sigma.
  static QuantumSource iid(DensityOperator sigma);
  /// rho_m = sum_x p(x_1..x_m) |psi_x1><psi_x1| (x) ... (x) |psi_xm><psi_xm|.
  static QuantumSource classically_correlated(ClassicalProcess proc, AlphabetSpec alphabet);
  /// rho_m = E^{(x) m/k}(base.rho_m).
  static QuantumSource channel_transformed(QuantumSource base, KrausChannel channel);
  /// Arbitrary family given by a callback; dense backend only. Used to build
  /// families that deliberately violate consistency or stationarity.
  static QuantumSource explicit_family(int d, std::function<DensityOperator(int)> family, std::string label);

  SourceKind kind() const;
  int d() const;
  /// Site counts m for which rho_m exists are multiples of alignment().
  int alignment() const;
  std::string describe() const;

  const DensityOperator& iid_state() const;
  const ClassicalProcess& process() const;
  const AlphabetSpec& alphabet() const;
  const QuantumSource& base() const;
  const KrausChannel& channel() const;

 private:
  struct Node;
  explicit QuantumSource(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;

  friend DensityOperator source_density(const QuantumSource&, int);
};

QuantumSource construct_classically_correlated(ClassicalProcess proc, AlphabetSpec alphabet);
QuantumSource channel_transform_source(QuantumSource base, KrausChannel channel);

/// rho_m, or ResourceError when d^m exceeds the dense cap.
DensityOperator source_density(const QuantumSource& src, int m);

/// tr(rho_{2m+gap} (a (x) I^{(x) gap} (x) b)) with a, b on m sites each.
Complex source_correlation(const QuantumSource& src, const Operator& a, const Operator& b, int gap, Backend backend);

/// The same correlation for gap = 0..max_gap.
std::vector<Complex> source_correlation_sequence(const QuantumSource& src, const Operator& a, const Operator& b,
                                                 int max_gap, Backend backend);

struct ObservablePairRef {
  const Operator& a;
  const Operator& b;
};

/// Correlation sequences for several pairs on equal site counts. The dense
/// backend builds each rho_n once for all pairs.
std::vector<std::vector<Complex>> source_correlation_sequences(const QuantumSource& src,
                                                              std::span<const ObservablePairRef> pairs, int max_gap,
                                                              Backend backend);

inline constexpr double kCheckTolerance = 1e-9;

struct CheckReport {
  std::string check;  // "consistency" or "stationarity"
  int m = 0;
  int extension = 0;
  int shift_unit = 1;
  int trials = 0;
  double max_deviation = 0.0;
  int worst_trial = -1;
  double tolerance = kCheckTolerance;
  bool passed = false;
};

/// tr(rho_m a) == tr(rho_{m+i} (a (x) I^{(x) i})) for `trials` random a.
CheckReport check_consistency(const QuantumSource& src, int m, int extension, int trials, std::uint64_t seed,
                              double tol = kCheckTolerance);

/// tr(rho_m a) == tr(rho_{m+iN} (I^{(x) iN} (x) a)) for `trials` random a; N = shift_unit.
CheckReport check_stationarity(const QuantumSource& src, int m, int extension, int trials, std::uint64_t seed,
                               int shift_unit = 1, double tol = kCheckTolerance);

}  // namespace qergo

#endif  // QERGO_SOURCES_HPP
