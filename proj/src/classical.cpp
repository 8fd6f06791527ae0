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

#include "qergo/classical.hpp"

#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

namespace qergo {

namespace {

void validate_distribution(const RealVector& w, const char* what) {
  if (w.size() == 0) throw ValidationError(std::string(what) + " is empty");
  if (!w.allFinite()) throw ValidationError(std::string(what) + " is not finite");
  if (w.minCoeff() < 0.0) throw ValidationError(std::string(what) + " has a negative entry");
  if (std::abs(w.sum() - 1.0) > kStochasticTolerance) {
    std::ostringstream os;
    os << what << " sums to " << w.sum() << ", not 1";
    throw ValidationError(os.str());
  }
}

bool is_stationary_chain(const ChainComponent& c) {
  RealVector next = c.transition.transpose() * c.initial;
  return (next - c.initial).cwiseAbs().maxCoeff() <= kStationaryTolerance;
}

// Chain law restricted to words of length 2; equal pair laws mean equal
// stationary Markov (and iid) processes.
RealMatrix pair_law(const ChainComponent& c) {
  return c.initial.asDiagonal() * c.transition;
}

Classification classify_chain(const ChainComponent& c) {
  Classification out;
  if (!is_stationary_chain(c)) {
    out.note = "initial law is not stationary";
    return out;
  }
  out.stationary = true;
  const ChainStructure s = analyze_chain(c.transition);
  int support_class = -1;
  for (Eigen::Index x = 0; x < c.initial.size(); ++x) {
    if (c.initial(x) <= 0.0) continue;
    const int cls = s.class_of[static_cast<std::size_t>(x)];
    if (cls < 0) {
      // Stationary laws vanish on transient states up to rounding.
      continue;
    }
    if (support_class >= 0 && cls != support_class) {
      out.note = "not ergodic (reducible): stationary law charges several closed classes";
      return out;
    }
    support_class = cls;
  }
  if (support_class < 0) {
    out.note = "not ergodic (reducible): no closed class charged";
    return out;
  }
  out.ergodic = true;
  const int period = s.class_period[static_cast<std::size_t>(support_class)];
  if (period == 1) {
    out.weakly_mixing = true;
    out.strongly_mixing = true;
    out.note = s.class_period.size() > 1 ? "aperiodic closed class of a reducible chain" : "irreducible aperiodic";
  } else {
    out.note = "periodic with period " + std::to_string(period);
  }
  return out;
}

// Per-chain block sums F (indexed by last symbol) and G (indexed by first symbol).
struct BlockVectors {
  Eigen::VectorXcd head;  // sum_u pi(u_1) P(u) f(u) at u_m
  Eigen::VectorXcd tail;  // sum_v P(v) g(v) at v_1
};

BlockVectors block_vectors(const ChainComponent& c, std::span<const Complex> f, std::span<const Complex> g, int m) {
  const int k = static_cast<int>(c.initial.size());
  BlockVectors out{Eigen::VectorXcd::Zero(k), Eigen::VectorXcd::Zero(k)};
  const std::size_t words = word_count(k, m);
  std::vector<int> w(static_cast<std::size_t>(m), 0);
  for (std::size_t idx = 0; idx < words; ++idx) {
    std::size_t rest = idx;
    for (int j = m - 1; j >= 0; --j) {
      w[static_cast<std::size_t>(j)] = static_cast<int>(rest % static_cast<std::size_t>(k));
      rest /= static_cast<std::size_t>(k);
    }
    double path = 1.0;
    for (int j = 0; j + 1 < m; ++j) path *= c.transition(w[static_cast<std::size_t>(j)], w[static_cast<std::size_t>(j) + 1]);
    if (path == 0.0) continue;
    out.head(w.back()) += c.initial(w.front()) * path * f[idx];
    out.tail(w.front()) += path * g[idx];
  }
  return out;
}

}  // namespace

std::string to_string(ProcessKind kind) {
  switch (kind) {
    case ProcessKind::iid: return "iid";
    case ProcessKind::markov: return "markov";
    case ProcessKind::mixture: return "mixture";
  }
  return "unknown";
}

void validate_stochastic(const RealMatrix& transition) {
  if (transition.rows() == 0 || transition.rows() != transition.cols()) {
    throw ValidationError("transition matrix must be square and nonempty");
  }
  for (Eigen::Index r = 0; r < transition.rows(); ++r) {
    RealVector row = transition.row(r).transpose();
    validate_distribution(row, ("transition row " + std::to_string(r)).c_str());
  }
}

ClassicalProcess ClassicalProcess::iid(RealVector weights) {
  validate_distribution(weights, "iid weights");
  ClassicalProcess p;
  p.kind_ = ProcessKind::iid;
  p.alphabet_size_ = static_cast<int>(weights.size());
  p.weights_ = std::move(weights);
  return p;
}

ClassicalProcess ClassicalProcess::markov(RealMatrix transition, std::optional<RealVector> initial) {
  validate_stochastic(transition);
  ClassicalProcess p;
  p.kind_ = ProcessKind::markov;
  p.alphabet_size_ = static_cast<int>(transition.rows());
  if (initial) {
    if (initial->size() != transition.rows()) throw ValidationError("initial law does not match the alphabet size");
    validate_distribution(*initial, "initial law");
    p.initial_ = std::move(*initial);
  } else {
    StationaryResult s = stationary_distribution(transition);
    if (!s.unique) {
      throw ValidationError("transition matrix has " + std::to_string(s.closed_classes) +
                            " closed classes; supply an explicit initial law");
    }
    p.initial_ = std::move(s.distribution);
  }
  p.transition_ = std::move(transition);
  return p;
}

ClassicalProcess ClassicalProcess::mixture(std::vector<ClassicalProcess> components, RealVector weights) {
  if (components.empty()) throw ValidationError("mixture has no components");
  if (static_cast<Eigen::Index>(components.size()) != weights.size()) {
    throw ValidationError("mixture weights do not match the component count");
  }
  validate_distribution(weights, "mixture weights");
  const int k = components.front().alphabet_size();
  for (const auto& c : components)
    if (c.alphabet_size() != k) throw ValidationError("mixture components have different alphabets");
  ClassicalProcess p;
  p.kind_ = ProcessKind::mixture;
  p.alphabet_size_ = k;
  p.weights_ = std::move(weights);
  p.components_ = std::move(components);
  return p;
}

bool ClassicalProcess::is_stationary() const {
  for (const ChainComponent& c : chains())
    if (c.weight > 0.0 && !is_stationary_chain(c)) return false;
  return true;
}

std::vector<ChainComponent> ClassicalProcess::chains() const {
  switch (kind_) {
    case ProcessKind::iid: {
      RealMatrix rows = weights_.transpose().replicate(alphabet_size_, 1);
      return {ChainComponent{1.0, weights_, rows}};
    }
    case ProcessKind::markov:
      return {ChainComponent{1.0, initial_, transition_}};
    case ProcessKind::mixture: {
      std::vector<ChainComponent> out;
      for (std::size_t i = 0; i < components_.size(); ++i) {
        for (ChainComponent c : components_[i].chains()) {
          c.weight *= weights_(static_cast<Eigen::Index>(i));
          out.push_back(std::move(c));
        }
      }
      return out;
    }
  }
  return {};
}

std::size_t word_count(int alphabet_size, int length) {
  if (alphabet_size < 1 || length < 0) throw ShapeError("invalid word shape");
  std::size_t n = 1;
  for (int j = 0; j < length; ++j) {
    n *= static_cast<std::size_t>(alphabet_size);
    if (n > kMaxEnumeratedWords) {
      throw ResourceError("enumerating words of length " + std::to_string(length) + " over " +
                              std::to_string(alphabet_size) + " symbols",
                          kMaxEnumeratedWords);
    }
  }
  return n;
}

std::size_t MeasureTable::index(std::span<const int> w) const {
  if (static_cast<int>(w.size()) != length) throw ShapeError("word length does not match the table");
  std::size_t idx = 0;
  for (int s : w) {
    if (s < 0 || s >= alphabet_size) throw ShapeError("symbol " + std::to_string(s) + " out of range");
    idx = idx * static_cast<std::size_t>(alphabet_size) + static_cast<std::size_t>(s);
  }
  return idx;
}

std::vector<int> MeasureTable::word(std::size_t idx) const {
  std::vector<int> w(static_cast<std::size_t>(length), 0);
  for (int j = length - 1; j >= 0; --j) {
    w[static_cast<std::size_t>(j)] = static_cast<int>(idx % static_cast<std::size_t>(alphabet_size));
    idx /= static_cast<std::size_t>(alphabet_size);
  }
  return w;
}

void MeasureTable::validate(double tol) const {
  if (alphabet_size < 1 || length < 1) throw ValidationError("measure table has an empty shape");
  if (probabilities.size() != word_count(alphabet_size, length)) {
    throw ValidationError("measure table has the wrong number of entries");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    const double p = probabilities[i];
    if (!std::isfinite(p) || p < -tol) {
      throw ValidationError("measure table entry " + std::to_string(i) + " is negative or not finite");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > tol) {
    std::ostringstream os;
    os << "measure table sums to " << sum << ", not 1";
    throw ValidationError(os.str());
  }
}

ChainStructure analyze_chain(const RealMatrix& transition) {
  const auto k = static_cast<std::size_t>(transition.rows());
  std::vector<std::vector<char>> reach(k, std::vector<char>(k, 0));
  for (std::size_t i = 0; i < k; ++i) {
    reach[i][i] = 1;
    for (std::size_t j = 0; j < k; ++j)
      if (transition(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > 0.0) reach[i][j] = 1;
  }
  for (std::size_t via = 0; via < k; ++via)
    for (std::size_t i = 0; i < k; ++i)
      if (reach[i][via])
        for (std::size_t j = 0; j < k; ++j)
          if (reach[via][j]) reach[i][j] = 1;

  ChainStructure out;
  out.class_of.assign(k, -1);
  std::vector<char> seen(k, 0);
  for (std::size_t root = 0; root < k; ++root) {
    if (seen[root]) continue;
    std::vector<std::size_t> members;
    for (std::size_t j = 0; j < k; ++j)
      if (reach[root][j] && reach[j][root]) members.push_back(j);
    for (std::size_t j : members) seen[j] = 1;
    bool closed = true;
    for (std::size_t u : members)
      for (std::size_t v = 0; v < k; ++v)
        if (reach[u][v] && !reach[v][u]) closed = false;
    if (!closed) continue;

    const int id = static_cast<int>(out.class_period.size());
    for (std::size_t j : members) out.class_of[j] = id;
    // BFS levels inside the class; the period is the gcd of level defects over edges.
    std::vector<long> level(k, -1);
    std::queue<std::size_t> frontier;
    level[members.front()] = 0;
    frontier.push(members.front());
    long period = 0;
    while (!frontier.empty()) {
      const std::size_t u = frontier.front();
      frontier.pop();
      for (std::size_t v : members) {
        if (transition(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) <= 0.0) continue;
        if (level[v] < 0) {
          level[v] = level[u] + 1;
          frontier.push(v);
        } else {
          period = std::gcd(period, std::labs(level[u] + 1 - level[v]));
        }
      }
    }
    out.class_period.push_back(static_cast<int>(period == 0 ? 1 : period));
  }
  return out;
}

StationaryResult stationary_distribution(const RealMatrix& transition) {
  validate_stochastic(transition);
  const ChainStructure s = analyze_chain(transition);
  const Eigen::Index k = transition.rows();
  StationaryResult out;
  out.closed_classes = static_cast<int>(s.class_period.size());
  out.unique = out.closed_classes == 1;
  out.distribution = RealVector::Zero(k);
  for (int cls = 0; cls < out.closed_classes; ++cls) {
    std::vector<Eigen::Index> members;
    for (Eigen::Index x = 0; x < k; ++x)
      if (s.class_of[static_cast<std::size_t>(x)] == cls) members.push_back(x);
    const auto n = static_cast<Eigen::Index>(members.size());
    RealMatrix a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) a(i, j) = transition(members[j], members[i]) - (i == j ? 1.0 : 0.0);
    a.row(n - 1).setOnes();
    RealVector rhs = RealVector::Zero(n);
    rhs(n - 1) = 1.0;
    RealVector pi = a.fullPivLu().solve(rhs);
    for (Eigen::Index i = 0; i < n; ++i) out.distribution(members[i]) += pi(i) / out.closed_classes;
  }
  return out;
}

double marginal_probability(const ClassicalProcess& proc, std::span<const int> word) {
  for (int s : word)
    if (s < 0 || s >= proc.alphabet_size()) throw ShapeError("symbol " + std::to_string(s) + " out of range");
  if (word.empty()) return 1.0;
  double total = 0.0;
  for (const ChainComponent& c : proc.chains()) {
    double p = c.weight * c.initial(word[0]);
    for (std::size_t j = 1; j < word.size() && p != 0.0; ++j) p *= c.transition(word[j - 1], word[j]);
    total += p;
  }
  return total;
}

MeasureTable measure_table(const ClassicalProcess& proc, int length) {
  if (length < 1) throw ShapeError("measure table needs length >= 1");
  MeasureTable t;
  t.alphabet_size = proc.alphabet_size();
  t.length = length;
  const std::size_t n = word_count(t.alphabet_size, length);
  t.probabilities.resize(n);
  for (std::size_t i = 0; i < n; ++i) t.probabilities[i] = marginal_probability(proc, t.word(i));
  return t;
}

ClassicalConsistencyReport check_measure_consistency(const MeasureTable& shorter, const MeasureTable& longer,
                                                     double tol) {
  if (shorter.alphabet_size != longer.alphabet_size || longer.length <= shorter.length) {
    throw ShapeError("consistency check needs a longer table over the same alphabet");
  }
  ClassicalConsistencyReport r;
  r.m = shorter.length;
  r.extension = longer.length - shorter.length;
  const std::size_t suffixes = word_count(shorter.alphabet_size, r.extension);
  for (std::size_t w = 0; w < shorter.probabilities.size(); ++w) {
    double sum = 0.0;
    for (std::size_t s = 0; s < suffixes; ++s) sum += longer.probabilities[w * suffixes + s];
    const double dev = std::abs(sum - shorter.probabilities[w]);
    if (r.worst_word.empty() || dev > r.max_deviation) {
      r.max_deviation = dev;
      r.worst_word = shorter.word(w);
    }
  }
  r.passed = r.max_deviation <= tol;
  return r;
}

ClassicalConsistencyReport check_classical_consistency(const ClassicalProcess& proc, int m, int extension,
                                                       double tol) {
  if (m < 1 || extension < 1) throw ShapeError("consistency check needs m, i >= 1");
  word_count(proc.alphabet_size(), m + extension);
  return check_measure_consistency(measure_table(proc, m), measure_table(proc, m + extension), tol);
}

std::vector<Complex> classical_correlation_sequence(const ClassicalProcess& proc, std::span<const Complex> f,
                                                    std::span<const Complex> g, int m, int max_gap) {
  if (m < 1 || max_gap < 0) throw ShapeError("correlation needs m >= 1 and gap >= 0");
  const std::size_t blocks = word_count(proc.alphabet_size(), m);
  if (f.size() != blocks || g.size() != blocks) {
    throw ShapeError("block functions must have " + std::to_string(blocks) + " entries");
  }
  std::vector<Complex> out(static_cast<std::size_t>(max_gap) + 1, Complex(0.0, 0.0));
  for (const ChainComponent& c : proc.chains()) {
    if (c.weight == 0.0) continue;
    const BlockVectors bv = block_vectors(c, f, g, m);
    const Eigen::MatrixXcd p = c.transition.cast<Complex>();
    // row = head^T P^{gap+1}; the law stays bounded because P is stochastic.
    Eigen::RowVectorXcd row = bv.head.transpose() * p;
    for (int gap = 0; gap <= max_gap; ++gap) {
      out[static_cast<std::size_t>(gap)] += c.weight * (row * bv.tail)(0, 0);
      row = row * p;
    }
  }
  return out;
}

double classical_correlation(const ClassicalProcess& proc, std::span<const double> f, std::span<const double> g,
                             int m, int gap) {
  std::vector<Complex> fc(f.begin(), f.end());
  std::vector<Complex> gc(g.begin(), g.end());
  return classical_correlation_sequence(proc, fc, gc, m, gap).back().real();
}

Classification classify_process(const ClassicalProcess& proc) {
  std::vector<ChainComponent> distinct;
  for (ChainComponent& c : proc.chains()) {
    if (c.weight <= 0.0) continue;
    bool merged = false;
    for (ChainComponent& d : distinct) {
      if ((pair_law(c) - pair_law(d)).cwiseAbs().maxCoeff() <= kStationaryTolerance &&
          (c.initial - d.initial).cwiseAbs().maxCoeff() <= kStationaryTolerance) {
        d.weight += c.weight;
        merged = true;
        break;
      }
    }
    if (!merged) distinct.push_back(std::move(c));
  }
  if (distinct.size() == 1) return classify_chain(distinct.front());

  Classification out;
  out.stationary = true;
  for (const ChainComponent& c : distinct) out.stationary = out.stationary && is_stationary_chain(c);
  out.note = "mixture of " + std::to_string(distinct.size()) + " distinct components";
  if (!out.stationary) out.note += "; some component is not stationary";
  return out;
}

}  // namespace qergo
