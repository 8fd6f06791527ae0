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

#ifndef QERGO_CHANNELS_HPP
#define QERGO_CHANNELS_HPP

#include <optional>
#include <string>
#include <vector>

#include "qergo/basis.hpp"
#include "qergo/operator.hpp"

namespace qergo {

/// Memoryless channel on blocks of `block_size` sites, given by Kraus operators
/// of side d^block_size. Completeness is reported by validate_kraus, not
/// enforced here, so incomplete sets can be inspected.
class KrausChannel {
 public:
  KrausChannel(int d, std::vector<Matrix> kraus, int block_size = 1, std::string name = {});

  int d() const { return d_; }
  int block_size() const { return block_size_; }
  Eigen::Index local_dim() const { return kraus_.front().rows(); }
  const std::vector<Matrix>& kraus() const { return kraus_; }
  std::size_t size() const { return kraus_.size(); }
  const std::string& name() const { return name_; }

 private:
  int d_;
  int block_size_;
  std::vector<Matrix> kraus_;
  std::string name_;
};

struct KrausReport {
  double completeness_deviation = 0.0;  // max |sum A^dag A - I| entry
  bool passed = false;
};

inline constexpr double kKrausTolerance = 1e-10;

KrausReport validate_kraus(const KrausChannel& channel, double tol = kKrausTolerance);

/// E^{(x) copies}(rho), one block at a time. Requires rho.sites() == copies * block_size.
DensityOperator apply_channel(const KrausChannel& channel, const DensityOperator& rho, int copies);

/// Same map on an arbitrary operator (no density validation of input or output).
Operator apply_channel_map(const KrausChannel& channel, const Operator& x, int copies);

/// Reference path: sums over every Kraus index tuple (j_1..j_copies) explicitly.
Operator apply_channel_tuples(const KrausChannel& channel, const Operator& x, int copies);

/// Heisenberg image sum (A_j1 (x) ...)^dag a (A_j1 (x) ...).
Operator dual_channel(const KrausChannel& channel, const Operator& a, int copies);

enum class ChannelKind { identity, depolarizing, amplitude_damping, phase_damping, unitary, embedding };

std::string to_string(ChannelKind kind);
ChannelKind channel_kind_from_string(const std::string& name);

struct ChannelSpec {
  ChannelKind kind = ChannelKind::identity;
  int d = 2;
  double parameter = 0.0;  // p, gamma or lambda
  Matrix unitary;          // unitary kind
  std::optional<AlphabetSpec> alphabet;    // embedding kind
  std::optional<PinchingBasis> basis;      // embedding kind; computational when absent
  int block_size = 1;
};

KrausChannel make_standard_channel(const ChannelSpec& spec);

KrausChannel identity_channel(int d);
/// (1-p) rho + p I/d, with Weyl-operator Kraus set (Paulis for d = 2).
KrausChannel depolarizing_channel(int d, double p);
KrausChannel amplitude_damping_channel(double gamma);
KrausChannel phase_damping_channel(double lambda);
KrausChannel unitary_channel(const Matrix& u);
/// A_i = |psi_i><e_i|; basis vectors beyond the alphabet size map to themselves.
KrausChannel embedding_channel(const AlphabetSpec& alphabet, const PinchingBasis& basis);

/// All k-fold tensor products of the Kraus operators, acting on k-site blocks.
KrausChannel block_channel(const KrausChannel& channel, int k);

/// Largest Kraus set block_channel will build.
inline constexpr std::size_t kMaxKrausOperators = 4096;

}  // namespace qergo

#endif  // QERGO_CHANNELS_HPP
