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

#include "qergo/sources.hpp"

#include <numeric>
#include <optional>
#include <variant>

#include "qergo/random.hpp"

namespace qergo {

struct QuantumSource::Node {
  struct Iid {
    DensityOperator sigma;
  };
  struct Correlated {
    ClassicalProcess proc;
    AlphabetSpec alphabet;
  };
  struct Transformed {
    QuantumSource base;
    KrausChannel channel;
  };
  struct Explicit {
    std::function<DensityOperator(int)> family;
    std::string label;
  };

  int d;
  int alignment;
  std::variant<Iid, Correlated, Transformed, Explicit> data;
};

namespace {

// Product vector |psi_{u_1}> (x) ... (x) |psi_{u_m}> for block index u.
Vector product_vector(const AlphabetSpec& alphabet, std::size_t index, int m) {
  const auto k = static_cast<std::size_t>(alphabet.size());
  std::vector<int> word(static_cast<std::size_t>(m));
  for (int j = m - 1; j >= 0; --j) {
    word[static_cast<std::size_t>(j)] = static_cast<int>(index % k);
    index /= k;
  }
  Vector v = alphabet[word[0]];
  for (int j = 1; j < m; ++j) {
    const Vector& w = alphabet[word[static_cast<std::size_t>(j)]];
    Vector next(v.size() * w.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) next.segment(i * w.size(), w.size()) = v(i) * w;
    v = std::move(next);
  }
  return v;
}

// g_O(u) = <psi_u| O |psi_u> for every m-block u.
std::vector<Complex> block_expectations(const AlphabetSpec& alphabet, const Operator& o) {
  const int m = o.sites();
  const std::size_t blocks = word_count(alphabet.size(), m);
  std::vector<Complex> out(blocks);
  for (std::size_t u = 0; u < blocks; ++u) {
    const Vector v = product_vector(alphabet, u, m);
    out[u] = v.dot(o.matrix() * v);
  }
  return out;
}

Matrix classically_correlated_density(const ClassicalProcess& proc, const AlphabetSpec& alphabet, int m) {
  const int d = alphabet.d();
  const auto dim = static_cast<Eigen::Index>(dense_dim(d, m));
  const int k = alphabet.size();
  std::vector<Matrix> letters;
  for (int x = 0; x < k; ++x) letters.push_back(alphabet[x] * alphabet[x].adjoint());

  Matrix total = Matrix::Zero(dim, dim);
  for (const ChainComponent& c : proc.chains()) {
    if (c.weight == 0.0) continue;
    // partial[s] = sum over words ending in s of p(word) |psi_word><psi_word|
    std::vector<Matrix> partial;
    for (int s = 0; s < k; ++s) partial.push_back(c.initial(s) * letters[static_cast<std::size_t>(s)]);
    for (int j = 1; j < m; ++j) {
      std::vector<Matrix> next;
      for (int t = 0; t < k; ++t) {
        Matrix acc = Matrix::Zero(partial[0].rows(), partial[0].cols());
        for (int s = 0; s < k; ++s) {
          const double w = c.transition(s, t);
          if (w != 0.0) acc += w * partial[static_cast<std::size_t>(s)];
        }
        next.push_back(tensor_product(Operator(d, j, acc), Operator(d, 1, letters[static_cast<std::size_t>(t)]))
                           .matrix());
      }
      partial = std::move(next);
    }
    for (const Matrix& p : partial) total += c.weight * p;
  }
  return 0.5 * (total + total.adjoint());
}

void check_observables(const QuantumSource& src, const Operator& a, const Operator& b) {
  if (a.d() != src.d() || b.d() != src.d()) throw ShapeError("observable and source have different site dimensions");
  if (a.sites() != b.sites()) throw ShapeError("correlation needs a and b on the same number of sites");
}

int round_up(int n, int unit) { return (n + unit - 1) / unit * unit; }

// tr(rho (a (x) I^gap (x) b (x) I^right)) without forming the padded observable.
Complex pair_separated(const Matrix& rho, const Operator& a, const Operator& b, int gap, int right) {
  const Matrix& am = a.matrix();
  const Matrix& bm = b.matrix();
  const Eigen::Index na = am.rows(), nb = bm.rows();
  const auto ng = static_cast<Eigen::Index>(dense_dim(a.d(), gap));
  const auto nr = static_cast<Eigen::Index>(dense_dim(a.d(), right));
  if (rho.rows() != na * ng * nb * nr) throw ShapeError("density and observable window differ in size");
  const auto index = [&](Eigen::Index x, Eigen::Index y, Eigen::Index z, Eigen::Index w) {
    return ((x * ng + y) * nb + z) * nr + w;
  };
  Complex total(0.0, 0.0);
  for (Eigen::Index xi = 0; xi < na; ++xi) {
    for (Eigen::Index xj = 0; xj < na; ++xj) {
      const Complex av = am(xj, xi);
      if (av == Complex(0.0, 0.0)) continue;
      for (Eigen::Index zi = 0; zi < nb; ++zi) {
        for (Eigen::Index zj = 0; zj < nb; ++zj) {
          const Complex bv = bm(zj, zi);
          if (bv == Complex(0.0, 0.0)) continue;
          Complex reduced(0.0, 0.0);
          for (Eigen::Index y = 0; y < ng; ++y)
            for (Eigen::Index w = 0; w < nr; ++w) reduced += rho(index(xi, y, zi, w), index(xj, y, zj, w));
          total += av * bv * reduced;
        }
      }
    }
  }
  return total;
}

// Dense correlations for several pairs; rho_n is built once per gap.
std::vector<std::vector<Complex>> dense_sequences(const QuantumSource& src, std::span<const ObservablePairRef> pairs,
                                                  int max_gap) {
  std::vector<std::vector<Complex>> out(pairs.size());
  if (pairs.empty()) return out;
  const int m = pairs.front().a.sites();
  for (int gap = 0; gap <= max_gap; ++gap) {
    const int n = 2 * m + gap;
    const int padded = round_up(n, src.alignment());
    const DensityOperator rho = source_density(src, padded);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      out[p].push_back(pair_separated(rho.matrix(), pairs[p].a, pairs[p].b, gap, padded - n));
    }
  }
  return out;
}

std::vector<Complex> transfer_sequence(const QuantumSource& src, const Operator& a, const Operator& b, int max_gap) {
  switch (src.kind()) {
    case SourceKind::iid: {
      const DensityOperator rho = tensor_power(src.iid_state(), a.sites());
      const Complex product = trace_pairing(rho, a) * trace_pairing(rho, b);
      return std::vector<Complex>(static_cast<std::size_t>(max_gap) + 1, product);
    }
    case SourceKind::classically_correlated: {
      const std::vector<Complex> f = block_expectations(src.alphabet(), a);
      const std::vector<Complex> g = block_expectations(src.alphabet(), b);
      return classical_correlation_sequence(src.process(), f, g, a.sites(), max_gap);
    }
    case SourceKind::channel_transformed: {
      const KrausChannel& ch = src.channel();
      if (ch.block_size() != 1) {
        throw AlignmentError("transfer sequence over every gap needs a one-site channel; block size is " +
                             std::to_string(ch.block_size()));
      }
      // tr(E(rho)(a (x) I (x) b)) = tr(rho (a~ (x) I (x) b~)), dual of I is I.
      const Operator a_dual = dual_channel(ch, a, a.sites());
      const Operator b_dual = dual_channel(ch, b, b.sites());
      return transfer_sequence(src.base(), a_dual, b_dual, max_gap);
    }
    case SourceKind::explicit_family:
      throw UnsupportedBackendError("transfer backend cannot evaluate an explicit family");
  }
  throw UnsupportedBackendError("unknown source kind");
}

Complex transfer_single(const QuantumSource& src, const Operator& a, const Operator& b, int gap) {
  if (src.kind() == SourceKind::channel_transformed && src.channel().block_size() != 1) {
    const KrausChannel& ch = src.channel();
    const int k = ch.block_size();
    if (a.sites() % k != 0 || gap % k != 0) {
      throw AlignmentError("block channel of size " + std::to_string(k) + " needs m and gap divisible by it");
    }
    const Operator a_dual = dual_channel(ch, a, a.sites() / k);
    const Operator b_dual = dual_channel(ch, b, b.sites() / k);
    return transfer_single(src.base(), a_dual, b_dual, gap);
  }
  if (src.kind() == SourceKind::channel_transformed) {
    const KrausChannel& ch = src.channel();
    return transfer_single(src.base(), dual_channel(ch, a, a.sites()), dual_channel(ch, b, b.sites()), gap);
  }
  return transfer_sequence(src, a, b, gap).back();
}

Operator random_probe(const QuantumSource& src, int m, int trial, std::uint64_t seed) {
  return random_observable(SiteConfig(src.d()), m, derive_seed(seed, static_cast<std::uint64_t>(trial)));
}

}  // namespace

std::string to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::iid: return "iid";
    case SourceKind::classically_correlated: return "classically_correlated";
    case SourceKind::channel_transformed: return "channel_transformed";
    case SourceKind::explicit_family: return "explicit_family";
  }
  return "unknown";
}

std::string to_string(Backend backend) { return backend == Backend::dense ? "dense" : "transfer"; }

Backend backend_from_string(const std::string& name) {
  if (name == "dense") return Backend::dense;
  if (name == "transfer") return Backend::transfer;
  throw ParameterError("unknown backend '" + name + "' (expected dense or transfer)");
}

QuantumSource::QuantumSource(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

QuantumSource QuantumSource::iid(DensityOperator sigma) {
  if (sigma.sites() != 1) throw ShapeError("iid source needs a one-site state");
  const int d = sigma.d();
  return QuantumSource(std::make_shared<const Node>(Node{d, 1, Node::Iid{std::move(sigma)}}));
}

QuantumSource QuantumSource::classically_correlated(ClassicalProcess proc, AlphabetSpec alphabet) {
  if (proc.alphabet_size() != alphabet.size()) {
    throw ShapeError("process alphabet has " + std::to_string(proc.alphabet_size()) + " symbols but the quantum alphabet has " +
                     std::to_string(alphabet.size()) + " vectors");
  }
  const int d = alphabet.d();
  return QuantumSource(std::make_shared<const Node>(Node{d, 1, Node::Correlated{std::move(proc), std::move(alphabet)}}));
}

QuantumSource QuantumSource::channel_transformed(QuantumSource base, KrausChannel channel) {
  if (channel.d() != base.d()) throw ShapeError("channel and source have different site dimensions");
  const KrausReport r = validate_kraus(channel);
  if (!r.passed) throw ValidationError("channel is not trace preserving");
  const int d = base.d();
  const int alignment = std::lcm(base.alignment(), channel.block_size());
  return QuantumSource(
      std::make_shared<const Node>(Node{d, alignment, Node::Transformed{std::move(base), std::move(channel)}}));
}

QuantumSource QuantumSource::explicit_family(int d, std::function<DensityOperator(int)> family, std::string label) {
  SiteConfig cfg(d);
  return QuantumSource(std::make_shared<const Node>(Node{d, 1, Node::Explicit{std::move(family), std::move(label)}}));
}

SourceKind QuantumSource::kind() const { return static_cast<SourceKind>(node_->data.index()); }
int QuantumSource::d() const { return node_->d; }
int QuantumSource::alignment() const { return node_->alignment; }

std::string QuantumSource::describe() const {
  switch (kind()) {
    case SourceKind::iid: return "iid";
    case SourceKind::classically_correlated:
      return "classically_correlated(" + to_string(process().kind()) + (alphabet().is_orthonormal() ? ", orthonormal)" : ", non-orthogonal)");
    case SourceKind::channel_transformed: return channel().name() + " o " + base().describe();
    case SourceKind::explicit_family: return "explicit(" + std::get<Node::Explicit>(node_->data).label + ")";
  }
  return "unknown";
}

const DensityOperator& QuantumSource::iid_state() const { return std::get<Node::Iid>(node_->data).sigma; }
const ClassicalProcess& QuantumSource::process() const { return std::get<Node::Correlated>(node_->data).proc; }
const AlphabetSpec& QuantumSource::alphabet() const { return std::get<Node::Correlated>(node_->data).alphabet; }
const QuantumSource& QuantumSource::base() const { return std::get<Node::Transformed>(node_->data).base; }
const KrausChannel& QuantumSource::channel() const { return std::get<Node::Transformed>(node_->data).channel; }

QuantumSource construct_classically_correlated(ClassicalProcess proc, AlphabetSpec alphabet) {
  return QuantumSource::classically_correlated(std::move(proc), std::move(alphabet));
}

QuantumSource channel_transform_source(QuantumSource base, KrausChannel channel) {
  return QuantumSource::channel_transformed(std::move(base), std::move(channel));
}

DensityOperator source_density(const QuantumSource& src, int m) {
  if (m < 1) throw ShapeError("source density needs m >= 1");
  dense_dim(src.d(), m);
  switch (src.kind()) {
    case SourceKind::iid:
      return tensor_power(src.iid_state(), m);
    case SourceKind::classically_correlated:
      return DensityOperator::by_construction(
          Operator(src.d(), m, classically_correlated_density(src.process(), src.alphabet(), m)));
    case SourceKind::channel_transformed: {
      const int k = src.channel().block_size();
      if (m % src.alignment() != 0) {
        throw AlignmentError("rho_" + std::to_string(m) + " is undefined for a source aligned to blocks of " +
                             std::to_string(src.alignment()) + " sites");
      }
      return apply_channel(src.channel(), source_density(src.base(), m), m / k);
    }
    case SourceKind::explicit_family: {
      DensityOperator rho = std::get<QuantumSource::Node::Explicit>(src.node_->data).family(m);
      if (rho.sites() != m || rho.d() != src.d()) throw ShapeError("explicit family returned the wrong shape");
      return rho;
    }
  }
  throw ShapeError("unknown source kind");
}

Complex source_correlation(const QuantumSource& src, const Operator& a, const Operator& b, int gap, Backend backend) {
  check_observables(src, a, b);
  if (gap < 0) throw ShapeError("gap must be >= 0");
  if (backend == Backend::dense) {
    const int n = 2 * a.sites() + gap;
    const int padded = round_up(n, src.alignment());
    return pair_separated(source_density(src, padded).matrix(), a, b, gap, padded - n);
  }
  return transfer_single(src, a, b, gap);
}

std::vector<Complex> source_correlation_sequence(const QuantumSource& src, const Operator& a, const Operator& b,
                                                 int max_gap, Backend backend) {
  check_observables(src, a, b);
  if (max_gap < 0) throw ShapeError("gap must be >= 0");
  if (backend == Backend::dense) {
    dense_dim(src.d(), round_up(2 * a.sites() + max_gap, src.alignment()));
    const ObservablePairRef pair{a, b};
    return std::move(dense_sequences(src, std::span(&pair, 1), max_gap).front());
  }
  return transfer_sequence(src, a, b, max_gap);
}

std::vector<std::vector<Complex>> source_correlation_sequences(const QuantumSource& src,
                                                              std::span<const ObservablePairRef> pairs, int max_gap,
                                                              Backend backend) {
  if (max_gap < 0) throw ShapeError("gap must be >= 0");
  for (const ObservablePairRef& p : pairs) {
    check_observables(src, p.a, p.b);
    if (p.a.sites() != pairs.front().a.sites()) throw ShapeError("all pairs must act on the same number of sites");
  }
  if (backend == Backend::dense) {
    if (!pairs.empty()) dense_dim(src.d(), round_up(2 * pairs.front().a.sites() + max_gap, src.alignment()));
    return dense_sequences(src, pairs, max_gap);
  }
  std::vector<std::vector<Complex>> out;
  for (const ObservablePairRef& p : pairs) out.push_back(transfer_sequence(src, p.a, p.b, max_gap));
  return out;
}

namespace {

CheckReport run_padding_check(const QuantumSource& src, int m, int extension, int trials, std::uint64_t seed,
                              int shift_unit, double tol, bool pad_left) {
  if (m < 1 || extension < 1 || trials < 1 || shift_unit < 1) {
    throw ShapeError("checks need m, i, trials and shift unit >= 1");
  }
  const int pad = extension * shift_unit;
  CheckReport r;
  r.check = pad_left ? "stationarity" : "consistency";
  r.m = m;
  r.extension = extension;
  r.shift_unit = shift_unit;
  r.trials = trials;
  r.tolerance = tol;
  const DensityOperator small = source_density(src, m);
  const DensityOperator large = source_density(src, m + pad);
  for (int t = 0; t < trials; ++t) {
    const Operator a = random_probe(src, m, t, seed);
    const Operator padded = pad_left ? embed_observable(a, pad, 0) : embed_observable(a, 0, pad);
    const double dev = std::abs(trace_pairing(small, a) - trace_pairing(large, padded));
    if (r.worst_trial < 0 || dev > r.max_deviation) {
      r.max_deviation = dev;
      r.worst_trial = t;
    }
  }
  r.passed = r.max_deviation <= tol;
  return r;
}

}  // namespace

CheckReport check_consistency(const QuantumSource& src, int m, int extension, int trials, std::uint64_t seed,
                              double tol) {
  return run_padding_check(src, m, extension, trials, seed, 1, tol, false);
}

CheckReport check_stationarity(const QuantumSource& src, int m, int extension, int trials, std::uint64_t seed,
                               int shift_unit, double tol) {
  return run_padding_check(src, m, extension, trials, seed, shift_unit, tol, true);
}

}  // namespace qergo
