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

#ifndef QERGO_ERGODICITY_HPP
#define QERGO_ERGODICITY_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qergo/sources.hpp"

namespace qergo {

enum class Criterion { ergodic_mean, weak_mixing, strong_mixing };
enum class Verdict { pass, fail, inconclusive };

std::string to_string(Criterion c);
std::string to_string(Verdict v);
/// fail is worse than inconclusive, which is worse than pass.
Verdict worst(Verdict a, Verdict b);

// Finite-horizon surrogate for the limits. A criterion passes when its final
// statistic is within epsilon and the statistic does not grow over the trailing
// window (max over the window's second half <= max over its first half + slack).
struct VerdictPolicy {
  double epsilon = 1e-2;
  double window_fraction = 0.1;
  double monotone_slack = 1e-12;
  double fit_floor = 1e-13;  // deviations below this are excluded from the decay fit

  /// 1e-2 for the transfer backend (n_max around 2000), 5e-2 for dense (n_max around 200).
  static VerdictPolicy for_backend(Backend backend);
};

struct ErgodicityReport {
  Criterion criterion = Criterion::ergodic_mean;
  int m = 0;
  int n_max = 0;
  /// Statistic for n (or i) = m..n_max: |Cesaro mean - target| for the ergodic
  /// mean, the Cesaro mean of |corr - target| for weak mixing, |corr(i) - target|
  /// for strong mixing.
  std::vector<double> sequence;
  Complex target;
  double final_statistic = 0.0;
  double window_max = 0.0;
  int window = 0;
  Verdict verdict = Verdict::inconclusive;
  std::optional<double> fitted_decay_rate;
};

/// Correlations and derived statistics for one observable pair.
struct PairAnalysis {
  int m = 0;
  int n_max = 0;
  std::vector<Complex> correlations;  // corr(i), i = m..n_max
  Complex target;                     // tr(rho_m a) tr(rho_m b)
  std::vector<Complex> cesaro_means;
  std::array<ErgodicityReport, 3> reports;  // indexed by Criterion

  const ErgodicityReport& report(Criterion c) const { return reports[static_cast<std::size_t>(c)]; }
};

/// [corr(i)] for i = m..n_max, corr(i) = source_correlation(src, a, b, i - m).
std::vector<Complex> correlation_sequence(const QuantumSource& src, const Operator& a, const Operator& b, int n_max,
                                          Backend backend);

ErgodicityReport ergodic_mean_test(const QuantumSource& src, const Operator& a, const Operator& b, int n_max,
                                   Backend backend, const VerdictPolicy& policy = {});
ErgodicityReport weak_mixing_test(const QuantumSource& src, const Operator& a, const Operator& b, int n_max,
                                  Backend backend, const VerdictPolicy& policy = {});
ErgodicityReport strong_mixing_test(const QuantumSource& src, const Operator& a, const Operator& b, int n_max,
                                    Backend backend, const VerdictPolicy& policy = {});

/// All three tests from one correlation sequence.
PairAnalysis analyze_pair(const QuantumSource& src, const Operator& a, const Operator& b, int n_max, Backend backend,
                          const VerdictPolicy& policy = {});

/// Same, with the correlations and target supplied by the caller.
PairAnalysis analyze_sequence(std::vector<Complex> correlations, Complex target, int m, int n_max,
                              const VerdictPolicy& policy);

/// Slope of log|deviation| against i, exponentiated; nullopt with fewer than 3 usable points.
std::optional<double> fit_decay_rate(const std::vector<double>& deviations, double floor);

struct VerdictTriple {
  Verdict ergodic = Verdict::inconclusive;
  Verdict weak = Verdict::inconclusive;
  Verdict strong = Verdict::inconclusive;

  friend bool operator==(const VerdictTriple&, const VerdictTriple&) = default;
  std::string str() const;
};

/// strong pass => weak pass => ergodic pass.
bool implications_hold(const VerdictTriple& t);

struct ObservablePair {
  std::string label;
  Operator a;
  Operator b;
};

/// Single-site basis projectors at every position of an m-site block, all ordered pairs.
std::vector<ObservablePair> canonical_pairs(int d, int m);
/// `count` pairs of seeded random Hermitian observables.
std::vector<ObservablePair> random_pairs(int d, int m, int count, std::uint64_t seed);

struct PairResult {
  std::size_t index = 0;
  std::string label;
  PairAnalysis analysis;
  VerdictTriple verdicts;
};

struct SweepReport {
  int m = 0;
  int n_max = 0;
  Backend backend = Backend::transfer;
  std::vector<PairResult> pairs;  // canonical first, then random
  VerdictTriple aggregate;
  bool implications_consistent = true;
  std::string scope_note;
};

/// Runs the three tests on the canonical pairs plus `observable_count` random
/// pairs. Pairs are evaluated on up to `threads` workers; the result does not
/// depend on the thread count.
SweepReport sweep_report(const QuantumSource& src, int m, int observable_count, std::uint64_t seed, int n_max,
                         Backend backend, const VerdictPolicy& policy = {}, int threads = 1);

/// Sweep over caller-supplied pairs.
SweepReport sweep_pairs(const QuantumSource& src, const std::vector<ObservablePair>& pairs, int n_max,
                        Backend backend, const VerdictPolicy& policy = {}, int threads = 1);

}  // namespace qergo

#endif  // QERGO_ERGODICITY_HPP
