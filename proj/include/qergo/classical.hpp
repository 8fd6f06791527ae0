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

#ifndef QERGO_CLASSICAL_HPP
#define QERGO_CLASSICAL_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qergo/operator.hpp"

namespace qergo {

inline constexpr double kStochasticTolerance = 1e-12;
inline constexpr double kStationaryTolerance = 1e-10;
/// Largest number of words any enumeration will visit.
inline constexpr std::size_t kMaxEnumeratedWords = 1'000'000;

/// One Markov chain (initial law, transition matrix) with a mixture weight.
/// Every process kind flattens to a list of these.
struct ChainComponent {
  double weight = 1.0;
  RealVector initial;
  RealMatrix transition;
};

enum class ProcessKind { iid, markov, mixture };

std::string to_string(ProcessKind kind);

/// Finite-alphabet process p(x_1, ..., x_m).
class ClassicalProcess {
 public:
  static ClassicalProcess iid(RealVector weights);
  /// Without `initial` the unique stationary law is used; reducible chains
  /// with several closed classes need an explicit initial law.
  static ClassicalProcess markov(RealMatrix transition, std::optional<RealVector> initial = std::nullopt);
  static ClassicalProcess mixture(std::vector<ClassicalProcess> components, RealVector weights);

  ProcessKind kind() const { return kind_; }
  int alphabet_size() const { return alphabet_size_; }
  /// iid symbol weights, or mixture weights.
  const RealVector& weights() const { return weights_; }
  const RealMatrix& transition() const { return transition_; }
  const RealVector& initial() const { return initial_; }
  const std::vector<ClassicalProcess>& components() const { return components_; }

  /// Shift invariance of the law: pi P = pi for every chain with positive weight.
  bool is_stationary() const;
  std::vector<ChainComponent> chains() const;

 private:
  ClassicalProcess() = default;

  ProcessKind kind_ = ProcessKind::iid;
  int alphabet_size_ = 0;
  RealVector weights_;
  RealMatrix transition_;
  RealVector initial_;
  std::vector<ClassicalProcess> components_;
};

/// Probabilities of all words of a fixed length. Word index is base-k with the
/// first symbol most significant, matching the Kronecker ordering of sites.
struct MeasureTable {
  int alphabet_size = 0;
  int length = 0;
  std::vector<double> probabilities;

  std::size_t index(std::span<const int> word) const;
  std::vector<int> word(std::size_t index) const;
  double at(std::span<const int> word) const { return probabilities[index(word)]; }
  /// Throws ValidationError when an entry is below -tol or the sum is off by more than tol.
  void validate(double tol = 1e-10) const;
};

/// alphabet_size^length, or ResourceError past kMaxEnumeratedWords.
std::size_t word_count(int alphabet_size, int length);

struct StationaryResult {
  RealVector distribution;
  bool unique = true;
  int closed_classes = 1;
};

/// pi with pi P = pi. For several closed classes, the average of the
/// per-class stationary laws is returned and `unique` is false.
StationaryResult stationary_distribution(const RealMatrix& transition);

/// Throws ValidationError unless P is square, nonnegative and row-stochastic.
void validate_stochastic(const RealMatrix& transition);

double marginal_probability(const ClassicalProcess& proc, std::span<const int> word);

MeasureTable measure_table(const ClassicalProcess& proc, int length);

struct ClassicalConsistencyReport {
  int m = 0;
  int extension = 0;
  double max_deviation = 0.0;
  std::vector<int> worst_word;
  bool passed = false;
};

/// mu_m(w) == sum over suffixes s of mu_{m+i}(w s) for every m-word w.
ClassicalConsistencyReport check_measure_consistency(const MeasureTable& shorter, const MeasureTable& longer,
                                                     double tol = 1e-12);
ClassicalConsistencyReport check_classical_consistency(const ClassicalProcess& proc, int m, int extension,
                                                       double tol = 1e-12);

/// E[f(w_1..w_m) g(w_{m+gap+1}..w_{2m+gap})] with f, g tabulated over m-blocks.
double classical_correlation(const ClassicalProcess& proc, std::span<const double> f, std::span<const double> g,
                             int m, int gap);

/// Same expectation for gap = 0..max_gap using one transfer recurrence.
std::vector<Complex> classical_correlation_sequence(const ClassicalProcess& proc, std::span<const Complex> f,
                                                    std::span<const Complex> g, int m, int max_gap);

struct Classification {
  bool stationary = false;
  bool ergodic = false;
  bool weakly_mixing = false;
  bool strongly_mixing = false;
  std::string note;
};

/// Ground-truth verdicts from the structure of the process (irreducibility,
/// period, distinct mixture components).
Classification classify_process(const ClassicalProcess& proc);

/// Closed communicating classes of a chain and the period of each.
struct ChainStructure {
  std::vector<int> class_of;       // -1 for transient states
  std::vector<int> class_period;   // indexed by closed class id
};
ChainStructure analyze_chain(const RealMatrix& transition);

}  // namespace qergo

#endif  // QERGO_CLASSICAL_HPP
