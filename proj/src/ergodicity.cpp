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

#include "qergo/ergodicity.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "qergo/random.hpp"

namespace qergo {

namespace {

constexpr double kHermitianTolerance = 1e-10;

void require_hermitian(const Operator& o, const char* name) {
  if (!o.is_hermitian(kHermitianTolerance)) {
    throw ValidationError(std::string("observable ") + name + " is not Hermitian");
  }
}

int window_length(int length, int n_max, double fraction) {
  const int w = static_cast<int>(std::floor(n_max * fraction));
  return std::clamp(w, std::min(2, length), length);
}

double max_of(const std::vector<double>& v, std::size_t begin, std::size_t end) {
  double out = 0.0;
  for (std::size_t i = begin; i < end; ++i) out = std::max(out, v[i]);
  return out;
}

// Fills window fields and the verdict for a statistic that must go to zero.
void decide_cesaro(ErgodicityReport& r, const VerdictPolicy& policy) {
  const auto len = r.sequence.size();
  r.window = window_length(static_cast<int>(len), r.n_max, policy.window_fraction);
  const std::size_t start = len - static_cast<std::size_t>(r.window);
  const std::size_t mid = start + static_cast<std::size_t>(r.window) / 2;
  r.final_statistic = r.sequence.back();
  r.window_max = max_of(r.sequence, start, len);
  const bool non_increasing =
      r.window < 2 || max_of(r.sequence, mid, len) <= max_of(r.sequence, start, mid) + policy.monotone_slack;
  if (r.final_statistic > policy.epsilon) {
    r.verdict = Verdict::fail;
  } else {
    r.verdict = non_increasing ? Verdict::pass : Verdict::inconclusive;
  }
}

void decide_strong(ErgodicityReport& r, const VerdictPolicy& policy) {
  const auto len = r.sequence.size();
  r.window = window_length(static_cast<int>(len), r.n_max, policy.window_fraction);
  r.final_statistic = r.sequence.back();
  r.window_max = max_of(r.sequence, len - static_cast<std::size_t>(r.window), len);
  r.verdict = (r.final_statistic <= policy.epsilon && r.window_max <= policy.epsilon) ? Verdict::pass : Verdict::fail;
  r.fitted_decay_rate = fit_decay_rate(r.sequence, policy.fit_floor);
}

Complex product_target(const QuantumSource& src, const Operator& a, const Operator& b) {
  const DensityOperator rho = source_density(src, a.sites());
  return trace_pairing(rho, a) * trace_pairing(rho, b);
}

void check_horizon(const Operator& a, const Operator& b, int n_max) {
  if (a.sites() != b.sites()) throw ShapeError("a and b must act on the same number of sites");
  if (n_max < a.sites()) throw ShapeError("n_max must be >= m");
}

}  // namespace

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::ergodic_mean: return "ergodic";
    case Criterion::weak_mixing: return "weak_mixing";
    case Criterion::strong_mixing: return "strong_mixing";
  }
  return "unknown";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

Verdict worst(Verdict a, Verdict b) {
  if (a == Verdict::fail || b == Verdict::fail) return Verdict::fail;
  if (a == Verdict::inconclusive || b == Verdict::inconclusive) return Verdict::inconclusive;
  return Verdict::pass;
}

VerdictPolicy VerdictPolicy::for_backend(Backend backend) {
  VerdictPolicy p;
  p.epsilon = backend == Backend::transfer ? 1e-2 : 5e-2;
  return p;
}

std::vector<Complex> correlation_sequence(const QuantumSource& src, const Operator& a, const Operator& b, int n_max,
                                          Backend backend) {
  check_horizon(a, b, n_max);
  require_hermitian(a, "a");
  require_hermitian(b, "b");
  return source_correlation_sequence(src, a, b, n_max - a.sites(), backend);
}

std::optional<double> fit_decay_rate(const std::vector<double>& deviations, double floor) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < deviations.size(); ++i) {
    if (!(deviations[i] > floor)) continue;
    const double x = static_cast<double>(i);
    const double y = std::log(deviations[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 3) return std::nullopt;
  const double denom = n * sxx - sx * sx;
  if (denom <= 0.0) return std::nullopt;
  return std::exp((n * sxy - sx * sy) / denom);
}

PairAnalysis analyze_sequence(std::vector<Complex> correlations, Complex target, int m, int n_max,
                              const VerdictPolicy& policy) {
  if (correlations.size() != static_cast<std::size_t>(n_max - m + 1)) {
    throw ShapeError("correlation sequence length must be n_max - m + 1");
  }
  PairAnalysis out;
  out.m = m;
  out.n_max = n_max;
  out.target = target;
  out.correlations = std::move(correlations);
  const std::size_t len = out.correlations.size();

  for (std::size_t c = 0; c < 3; ++c) {
    ErgodicityReport& r = out.reports[c];
    r.criterion = static_cast<Criterion>(c);
    r.m = m;
    r.n_max = n_max;
    r.target = target;
    r.sequence.reserve(len);
  }
  out.cesaro_means.reserve(len);

  Complex running(0.0, 0.0);
  double running_abs = 0.0;
  for (std::size_t k = 0; k < len; ++k) {
    const double count = static_cast<double>(k + 1);
    const double dev = std::abs(out.correlations[k] - target);
    running += out.correlations[k];
    running_abs += dev;
    const Complex mean = running / count;
    out.cesaro_means.push_back(mean);
    out.reports[0].sequence.push_back(std::abs(mean - target));
    out.reports[1].sequence.push_back(running_abs / count);
    out.reports[2].sequence.push_back(dev);
  }
  decide_cesaro(out.reports[0], policy);
  decide_cesaro(out.reports[1], policy);
  decide_strong(out.reports[2], policy);
  return out;
}

PairAnalysis analyze_pair(const QuantumSource& src, const Operator& a, const Operator& b, int n_max, Backend backend,
                          const VerdictPolicy& policy) {
  std::vector<Complex> corr = correlation_sequence(src, a, b, n_max, backend);
  return analyze_sequence(std::move(corr), product_target(src, a, b), a.sites(), n_max, policy);
}

ErgodicityReport ergodic_mean_test(const QuantumSource& src, const Operator& a, const Operator& b, int n_max,
                                   Backend backend, const VerdictPolicy& policy) {
  return analyze_pair(src, a, b, n_max, backend, policy).reports[0];
}

ErgodicityReport weak_mixing_test(const QuantumSource& src, const Operator& a, const Operator& b, int n_max,
                                  Backend backend, const VerdictPolicy& policy) {
  return analyze_pair(src, a, b, n_max, backend, policy).reports[1];
}

ErgodicityReport strong_mixing_test(const QuantumSource& src, const Operator& a, const Operator& b, int n_max,
                                    Backend backend, const VerdictPolicy& policy) {
  return analyze_pair(src, a, b, n_max, backend, policy).reports[2];
}

std::string VerdictTriple::str() const {
  return "(" + to_string(ergodic) + ", " + to_string(weak) + ", " + to_string(strong) + ")";
}

bool implications_hold(const VerdictTriple& t) {
  if (t.strong == Verdict::pass && t.weak != Verdict::pass) return false;
  if (t.weak == Verdict::pass && t.ergodic != Verdict::pass) return false;
  return true;
}

std::vector<ObservablePair> canonical_pairs(int d, int m) {
  SiteConfig cfg(d);
  std::vector<std::pair<std::string, Operator>> singles;
  for (int site = 0; site < m; ++site) {
    for (int k = 0; k < d; ++k) {
      singles.emplace_back("P" + std::to_string(k) + "@" + std::to_string(site + 1),
                           embed_observable(ops::basis_projector(d, k), site, m - site - 1));
    }
  }
  std::vector<ObservablePair> out;
  for (const auto& [la, a] : singles)
    for (const auto& [lb, b] : singles) out.push_back({"canonical:" + la + "|" + lb, a, b});
  return out;
}

std::vector<ObservablePair> random_pairs(int d, int m, int count, std::uint64_t seed) {
  SiteConfig cfg(d);
  std::vector<ObservablePair> out;
  for (int p = 0; p < count; ++p) {
    const auto stream = static_cast<std::uint64_t>(p);
    out.push_back({"random:" + std::to_string(p), random_observable(cfg, m, derive_seed(seed, 2 * stream)),
                   random_observable(cfg, m, derive_seed(seed, 2 * stream + 1))});
  }
  return out;
}

SweepReport sweep_pairs(const QuantumSource& src, const std::vector<ObservablePair>& pairs, int n_max,
                        Backend backend, const VerdictPolicy& policy, int threads) {
  if (pairs.empty()) throw ShapeError("sweep needs at least one observable pair");
  SweepReport out;
  out.m = pairs.front().a.sites();
  out.n_max = n_max;
  out.backend = backend;
  out.scope_note =
      "ergodicity is assessed through the Cesaro correlation criterion at a finite horizon; extremality among "
      "stationary states is not certified";
  out.pairs.resize(pairs.size());

  // Dense densities are shared by every pair, so their sequences are built together.
  std::vector<std::vector<Complex>> dense;
  if (backend == Backend::dense) {
    std::vector<ObservablePairRef> refs;
    for (const ObservablePair& p : pairs) {
      check_horizon(p.a, p.b, n_max);
      require_hermitian(p.a, "a");
      require_hermitian(p.b, "b");
      refs.push_back({p.a, p.b});
    }
    dense = source_correlation_sequences(src, refs, n_max - out.m, backend);
  }

  auto run_one = [&](std::size_t i) {
    PairResult& r = out.pairs[i];
    r.index = i;
    r.label = pairs[i].label;
    r.analysis = dense.empty() ? analyze_pair(src, pairs[i].a, pairs[i].b, n_max, backend, policy)
                               : analyze_sequence(std::move(dense[i]), product_target(src, pairs[i].a, pairs[i].b),
                                                  out.m, n_max, policy);
    r.verdicts = {r.analysis.reports[0].verdict, r.analysis.reports[1].verdict, r.analysis.reports[2].verdict};
  };

  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1, pairs.size());
  if (workers == 1) {
    for (std::size_t i = 0; i < pairs.size(); ++i) run_one(i);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < pairs.size(); i += workers) run_one(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  out.aggregate = {Verdict::pass, Verdict::pass, Verdict::pass};
  for (const PairResult& r : out.pairs) {
    out.aggregate.ergodic = worst(out.aggregate.ergodic, r.verdicts.ergodic);
    out.aggregate.weak = worst(out.aggregate.weak, r.verdicts.weak);
    out.aggregate.strong = worst(out.aggregate.strong, r.verdicts.strong);
    out.implications_consistent = out.implications_consistent && implications_hold(r.verdicts);
  }
  return out;
}

SweepReport sweep_report(const QuantumSource& src, int m, int observable_count, std::uint64_t seed, int n_max,
                         Backend backend, const VerdictPolicy& policy, int threads) {
  if (observable_count < 1) throw ShapeError("observable_count must be >= 1");
  std::vector<ObservablePair> pairs = canonical_pairs(src.d(), m);
  std::vector<ObservablePair> extra = random_pairs(src.d(), m, observable_count, seed);
  pairs.insert(pairs.end(), std::make_move_iterator(extra.begin()), std::make_move_iterator(extra.end()));
  return sweep_pairs(src, pairs, n_max, backend, policy, threads);
}

}  // namespace qergo
