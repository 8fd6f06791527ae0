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

#include "qergo/channels.hpp"

#include <cmath>
#include <numbers>

#include "qergo/detail/local.hpp"

namespace qergo {

namespace {

void check_probability(const char* what, double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ParameterError(std::string(what) + " must lie in [0, 1], got " + std::to_string(v));
  }
}

// Zero-weight Kraus terms carry no information; dropping them keeps tuple sums small.
std::vector<Matrix> drop_zero(std::vector<Matrix> ops) {
  std::vector<Matrix> kept;
  for (auto& m : ops)
    if (max_abs_entry(m) > 0.0) kept.push_back(std::move(m));
  if (kept.empty()) kept.push_back(std::move(ops.front()));
  return kept;
}

void check_copies(const KrausChannel& channel, const Operator& x, int copies) {
  if (copies < 1) throw ShapeError("channel needs at least one copy");
  if (x.d() != channel.d()) throw ShapeError("channel and operator have different site dimensions");
  if (x.sites() != copies * channel.block_size()) {
    throw ShapeError("operator has " + std::to_string(x.sites()) + " sites but " + std::to_string(copies) +
                     " copies of a " + std::to_string(channel.block_size()) + "-site channel act on " +
                     std::to_string(copies * channel.block_size()));
  }
}

// sum_j (.. (x) B_j (x) ..) m (.. (x) B_j (x) ..)^dag, one block after another.
Matrix conjugate_blockwise(const std::vector<Matrix>& ops, Eigen::Index q, int copies, const Matrix& start) {
  Matrix current = start;
  Matrix next(current.rows(), current.cols());
  Matrix scratch;
  Eigen::Index left = 1;
  Eigen::Index right = current.rows() / q;
  for (int block = 0; block < copies; ++block) {
    const detail::LocalSlot slot{left, q, right};
    for (std::size_t k = 0; k < ops.size(); ++k) {
      detail::conjugate_accumulate(ops[k], slot, current, scratch, next, k > 0);
    }
    current.swap(next);
    left *= q;
    right /= q;
  }
  return current;
}

}  // namespace

KrausChannel::KrausChannel(int d, std::vector<Matrix> kraus, int block_size, std::string name)
    : d_(d), block_size_(block_size), kraus_(std::move(kraus)), name_(std::move(name)) {
  SiteConfig cfg(d);
  if (block_size < 1) throw ShapeError("block size must be >= 1");
  if (kraus_.empty()) throw ShapeError("Kraus operator list is empty");
  const auto q = static_cast<Eigen::Index>(dense_dim(d, block_size));
  for (std::size_t i = 0; i < kraus_.size(); ++i) {
    if (kraus_[i].rows() != q || kraus_[i].cols() != q) {
      throw ShapeError("Kraus operator " + std::to_string(i) + " is " + std::to_string(kraus_[i].rows()) + "x" +
                       std::to_string(kraus_[i].cols()) + ", expected " + std::to_string(q) + "x" +
                       std::to_string(q));
    }
    if (!kraus_[i].allFinite()) throw ValidationError("Kraus operator " + std::to_string(i) + " is not finite");
  }
}

KrausReport validate_kraus(const KrausChannel& channel, double tol) {
  const Eigen::Index q = channel.local_dim();
  Matrix sum = Matrix::Zero(q, q);
  for (const Matrix& a : channel.kraus()) sum += a.adjoint() * a;
  KrausReport r;
  r.completeness_deviation = max_abs_entry(sum - Matrix::Identity(q, q));
  r.passed = r.completeness_deviation <= tol;
  return r;
}

Operator apply_channel_map(const KrausChannel& channel, const Operator& x, int copies) {
  check_copies(channel, x, copies);
  return Operator(x.d(), x.sites(), conjugate_blockwise(channel.kraus(), channel.local_dim(), copies, x.matrix()));
}

DensityOperator apply_channel(const KrausChannel& channel, const DensityOperator& rho, int copies) {
  const KrausReport r = validate_kraus(channel);
  if (!r.passed) {
    throw ValidationError("channel is not trace preserving (completeness deviation " +
                          std::to_string(r.completeness_deviation) + ")");
  }
  Operator out = apply_channel_map(channel, rho.op(), copies);
  Matrix sym = 0.5 * (out.matrix() + out.matrix().adjoint());
  return DensityOperator::by_construction(Operator(out.d(), out.sites(), std::move(sym)));
}

Operator apply_channel_tuples(const KrausChannel& channel, const Operator& x, int copies) {
  check_copies(channel, x, copies);
  const std::size_t n = channel.size();
  std::size_t tuples = 1;
  for (int c = 0; c < copies; ++c) {
    tuples *= n;
    if (tuples > kMaxKrausOperators) throw ResourceError("too many Kraus tuples", kMaxKrausOperators);
  }
  Matrix out = Matrix::Zero(x.dim(), x.dim());
  std::vector<std::size_t> index(static_cast<std::size_t>(copies), 0);
  for (std::size_t t = 0; t < tuples; ++t) {
    std::size_t rest = t;
    for (int c = copies - 1; c >= 0; --c) {
      index[static_cast<std::size_t>(c)] = rest % n;
      rest /= n;
    }
    Operator k(channel.d(), channel.block_size(), channel.kraus()[index[0]]);
    for (int c = 1; c < copies; ++c) {
      k = tensor_product(k, Operator(channel.d(), channel.block_size(), channel.kraus()[index[static_cast<std::size_t>(c)]]));
    }
    out += k.matrix() * x.matrix() * k.matrix().adjoint();
  }
  return Operator(x.d(), x.sites(), std::move(out));
}

Operator dual_channel(const KrausChannel& channel, const Operator& a, int copies) {
  check_copies(channel, a, copies);
  std::vector<Matrix> adjoints;
  adjoints.reserve(channel.size());
  for (const Matrix& k : channel.kraus()) adjoints.push_back(k.adjoint());
  return Operator(a.d(), a.sites(), conjugate_blockwise(adjoints, channel.local_dim(), copies, a.matrix()));
}

std::string to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::identity: return "identity";
    case ChannelKind::depolarizing: return "depolarizing";
    case ChannelKind::amplitude_damping: return "amplitude_damping";
    case ChannelKind::phase_damping: return "phase_damping";
    case ChannelKind::unitary: return "unitary";
    case ChannelKind::embedding: return "embedding";
  }
  return "unknown";
}

ChannelKind channel_kind_from_string(const std::string& name) {
  for (ChannelKind k : {ChannelKind::identity, ChannelKind::depolarizing, ChannelKind::amplitude_damping,
                        ChannelKind::phase_damping, ChannelKind::unitary, ChannelKind::embedding}) {
    if (to_string(k) == name) return k;
  }
  throw ParameterError("unknown channel kind '" + name + "'");
}

KrausChannel identity_channel(int d) {
  SiteConfig cfg(d);
  return KrausChannel(d, {Matrix::Identity(d, d)}, 1, "identity");
}

KrausChannel depolarizing_channel(int d, double p) {
  SiteConfig cfg(d);
  check_probability("depolarizing p", p);
  std::vector<Matrix> ops;
  const double dd = static_cast<double>(d) * d;
  ops.push_back(std::sqrt(1.0 - p + p / dd) * Matrix::Identity(d, d));
  const double w = std::sqrt(p / dd);
  if (d == 2) {
    ops.push_back(w * ops::pauli_x().matrix());
    ops.push_back(w * ops::pauli_y().matrix());
    ops.push_back(w * ops::pauli_z().matrix());
  } else {
    // Weyl operators X^a Z^b, (a, b) != (0, 0).
    const double two_pi = 2.0 * std::numbers::pi;
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        if (a == 0 && b == 0) continue;
        Matrix m = Matrix::Zero(d, d);
        for (int j = 0; j < d; ++j) {
          m((j + a) % d, j) = std::polar(1.0, two_pi * b * j / d);
        }
        ops.push_back(w * m);
      }
    }
  }
  return KrausChannel(d, drop_zero(std::move(ops)), 1, "depolarizing(" + std::to_string(p) + ")");
}

KrausChannel amplitude_damping_channel(double gamma) {
  check_probability("amplitude damping gamma", gamma);
  Matrix a0(2, 2), a1(2, 2);
  a0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  a1 << 0, std::sqrt(gamma), 0, 0;
  return KrausChannel(2, drop_zero({a0, a1}), 1, "amplitude_damping(" + std::to_string(gamma) + ")");
}

KrausChannel phase_damping_channel(double lambda) {
  check_probability("phase damping lambda", lambda);
  Matrix a0(2, 2), a1(2, 2);
  a0 << 1, 0, 0, std::sqrt(1.0 - lambda);
  a1 << 0, 0, 0, std::sqrt(lambda);
  return KrausChannel(2, drop_zero({a0, a1}), 1, "phase_damping(" + std::to_string(lambda) + ")");
}

KrausChannel unitary_channel(const Matrix& u) {
  if (u.rows() != u.cols()) throw ShapeError("unitary must be square");
  const Eigen::Index d = u.rows();
  if (max_abs_entry(u.adjoint() * u - Matrix::Identity(d, d)) > kKrausTolerance) {
    throw ParameterError("matrix is not unitary");
  }
  return KrausChannel(static_cast<int>(d), {u}, 1, "unitary");
}

KrausChannel embedding_channel(const AlphabetSpec& alphabet, const PinchingBasis& basis) {
  if (alphabet.d() != basis.d()) throw ShapeError("alphabet and basis have different site dimensions");
  const int d = alphabet.d();
  std::vector<Matrix> ops;
  for (int i = 0; i < d; ++i) {
    const Vector e = basis.vector(i);
    const Vector psi = i < alphabet.size() ? alphabet[i] : e;
    ops.push_back(psi * e.adjoint());
  }
  return KrausChannel(d, std::move(ops), 1, "embedding");
}

KrausChannel make_standard_channel(const ChannelSpec& spec) {
  KrausChannel base = [&] {
    switch (spec.kind) {
      case ChannelKind::identity: return identity_channel(spec.d);
      case ChannelKind::depolarizing: return depolarizing_channel(spec.d, spec.parameter);
      case ChannelKind::amplitude_damping:
        if (spec.d != 2) throw ParameterError("amplitude damping is defined for d = 2 only");
        return amplitude_damping_channel(spec.parameter);
      case ChannelKind::phase_damping:
        if (spec.d != 2) throw ParameterError("phase damping is defined for d = 2 only");
        return phase_damping_channel(spec.parameter);
      case ChannelKind::unitary:
        if (spec.unitary.rows() != spec.d) throw ShapeError("unitary does not match site dimension");
        return unitary_channel(spec.unitary);
      case ChannelKind::embedding: {
        if (!spec.alphabet) throw InvalidAlphabetError("embedding channel needs an alphabet");
        const PinchingBasis basis = spec.basis ? *spec.basis : PinchingBasis::computational(spec.d);
        return embedding_channel(*spec.alphabet, basis);
      }
    }
    throw ParameterError("unknown channel kind");
  }();
  return spec.block_size == 1 ? base : block_channel(base, spec.block_size);
}

KrausChannel block_channel(const KrausChannel& channel, int k) {
  if (k < 1) throw ShapeError("block size must be >= 1");
  if (k == 1) return channel;
  std::size_t count = 1;
  for (int c = 0; c < k; ++c) {
    count *= channel.size();
    if (count > kMaxKrausOperators) throw ResourceError("block channel Kraus set too large", kMaxKrausOperators);
  }
  dense_dim(channel.d(), channel.block_size() * k);
  std::vector<Operator> current;
  for (const Matrix& a : channel.kraus()) current.emplace_back(channel.d(), channel.block_size(), a);
  std::vector<Operator> layer = current;
  for (int c = 1; c < k; ++c) {
    std::vector<Operator> next;
    next.reserve(layer.size() * current.size());
    for (const Operator& left : layer)
      for (const Operator& right : current) next.push_back(tensor_product(left, right));
    layer = std::move(next);
  }
  std::vector<Matrix> ops;
  ops.reserve(layer.size());
  for (const Operator& o : layer) ops.push_back(o.matrix());
  return KrausChannel(channel.d(), std::move(ops), channel.block_size() * k,
                      channel.name() + "^" + std::to_string(k));
}

}  // namespace qergo
