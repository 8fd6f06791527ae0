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

// Acceptance suite. With no argument every criterion runs and one line is
// printed per criterion; with an argument ("1", ..., "6a", "6b", ..., "9") only
// that criterion runs. Exit status is 0 iff every selected criterion passed.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qergo/ergodicity.hpp"
#include "qergo/expectation.hpp"
#include "qergo/experiment.hpp"
#include "qergo/random.hpp"

using namespace qergo;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

RealMatrix mat2(double a, double b, double c, double d) {
  RealMatrix p(2, 2);
  p << a, b, c, d;
  return p;
}

RealVector vec2(double a, double b) {
  RealVector v(2);
  v << a, b;
  return v;
}

Vector plus_state() {
  Vector v(2);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return v;
}

AlphabetSpec zero_plus() { return AlphabetSpec(2, {Vector::Unit(2, 0), plus_state()}); }

struct NamedChannel {
  std::string name;
  KrausChannel channel;
  bool replacement = false;  // output independent of input
};

std::vector<NamedChannel> library_channels() {
  return {
      {"identity", identity_channel(2)},
      {"depolarizing(0)", depolarizing_channel(2, 0.0)},
      {"depolarizing(0.3)", depolarizing_channel(2, 0.3)},
      {"depolarizing(0.5)", depolarizing_channel(2, 0.5)},
      {"depolarizing(1)", depolarizing_channel(2, 1.0), true},
      {"amplitude_damping(0)", amplitude_damping_channel(0.0)},
      {"amplitude_damping(0.5)", amplitude_damping_channel(0.5)},
      {"amplitude_damping(1)", amplitude_damping_channel(1.0), true},
      {"phase_damping(0.5)", phase_damping_channel(0.5)},
      {"random_unitary", unitary_channel(random_unitary(2, 2026))},
      {"embedding{|0>,|+>}", embedding_channel(zero_plus(), PinchingBasis::computational(2))},
  };
}

struct FleetProcess {
  std::string name;
  ClassicalProcess proc;
  VerdictTriple expected;
};

const VerdictTriple kAllPass{Verdict::pass, Verdict::pass, Verdict::pass};

std::vector<FleetProcess> fleet_processes() {
  return {
      {"iid", ClassicalProcess::iid(vec2(0.7, 0.3)), kAllPass},
      {"aperiodic markov", ClassicalProcess::markov(mat2(0.9, 0.1, 0.2, 0.8)), kAllPass},
      {"period-2 markov", ClassicalProcess::markov(mat2(0, 1, 1, 0)), {Verdict::pass, Verdict::fail, Verdict::fail}},
      {"mixture of iid",
       ClassicalProcess::mixture({ClassicalProcess::iid(vec2(0.9, 0.1)), ClassicalProcess::iid(vec2(0.1, 0.9))},
                                 vec2(0.5, 0.5)),
       {Verdict::fail, Verdict::fail, Verdict::fail}},
  };
}

struct FleetSource {
  std::string name;
  QuantumSource src;
  VerdictTriple expected;
};

std::vector<FleetSource> fleet_sources() {
  std::vector<FleetSource> out;
  out.push_back({"iid", QuantumSource::iid(random_density(SiteConfig(2), 1, 11)), kAllPass});
  for (const FleetProcess& p : fleet_processes()) {
    if (p.proc.kind() == ProcessKind::iid) continue;
    out.push_back({p.name, construct_classically_correlated(p.proc, AlphabetSpec::computational(2)), p.expected});
  }
  return out;
}

VerdictTriple oracle_triple(const Classification& c) {
  auto v = [](bool b) { return b ? Verdict::pass : Verdict::fail; };
  return {v(c.ergodic), v(c.weakly_mixing), v(c.strongly_mixing)};
}

constexpr int kHorizon = 2000;
constexpr int kPairs = 10;

SweepReport sweep(const QuantumSource& src, std::uint64_t seed) {
  return sweep_report(src, 1, kPairs, seed, kHorizon, Backend::transfer, VerdictPolicy::for_backend(Backend::transfer), 4);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// 1. Every library channel is trace preserving.
Outcome channel_validity() {
  double worst = 0.0;
  std::string worst_name;
  for (const NamedChannel& c : library_channels()) {
    const KrausReport r = validate_kraus(c.channel);
    if (r.completeness_deviation >= worst) {
      worst = r.completeness_deviation;
      worst_name = c.name;
    }
    if (!r.passed) return {false, c.name + " deviation " + fmt(r.completeness_deviation)};
  }
  return {worst <= 1e-10, "11 channels, worst completeness deviation " + fmt(worst) + " (" + worst_name + ")"};
}

// 2. Schrodinger and Heisenberg pictures agree on separated observables.
Outcome duality_pairing() {
  const SiteConfig cfg(2);
  double worst = 0.0;
  int evaluations = 0;
  for (const NamedChannel& c : library_channels()) {
    for (std::uint64_t t = 0; t < 50; ++t) {
      const int m = 1 + static_cast<int>(t % 2);
      const int gap = static_cast<int>((t / 2) % 5);
      const int n = 2 * m + gap;
      const DensityOperator rho = random_density(cfg, n, derive_seed(t, 1));
      const Operator a = random_observable(cfg, m, derive_seed(t, 2));
      const Operator b = random_observable(cfg, m, derive_seed(t, 3));
      const Operator window = tensor_product(embed_observable(a, 0, gap), b);
      const Complex lhs = trace_pairing(apply_channel(c.channel, rho, n), window);
      const Operator dual_window =
          tensor_product(embed_observable(dual_channel(c.channel, a, m), 0, gap), dual_channel(c.channel, b, m));
      worst = std::max(worst, std::abs(lhs - trace_pairing(rho, dual_window)));
      ++evaluations;
    }
  }
  return {worst <= 1e-9, std::to_string(evaluations) + " (channel, rho, a, b) draws, worst |difference| " + fmt(worst)};
}

// 3. Consistency and stationarity over the fleet; the broken families fail.
Outcome padding_suites() {
  std::vector<std::pair<std::string, QuantumSource>> sources;
  sources.emplace_back("iid", QuantumSource::iid(random_density(SiteConfig(2), 1, 3)));
  for (const FleetProcess& p : fleet_processes()) {
    if (p.proc.kind() == ProcessKind::iid) continue;
    sources.emplace_back(p.name, construct_classically_correlated(p.proc, zero_plus()));
  }
  const std::size_t base_count = sources.size();
  for (std::size_t k = 0; k < base_count; ++k) {
    sources.emplace_back(sources[k].first + " + depolarizing(0.3)",
                         channel_transform_source(sources[k].second, depolarizing_channel(2, 0.3)));
  }
  double worst = 0.0;
  int checks = 0;
  for (const auto& [name, src] : sources) {
    for (int m = 1; m < 8; ++m) {
      for (int i = 1; m + i <= 8; ++i) {
        const auto seed = derive_seed(static_cast<std::uint64_t>(100 * m + i), 3);
        const CheckReport c = check_consistency(src, m, i, 20, seed);
        const CheckReport s = check_stationarity(src, m, i, 20, seed);
        worst = std::max({worst, c.max_deviation, s.max_deviation});
        checks += 2;
        if (!c.passed || !s.passed) {
          return {false, name + " failed at m=" + std::to_string(m) + " i=" + std::to_string(i)};
        }
      }
    }
  }

  const QuantumSource corr = construct_classically_correlated(ClassicalProcess::markov(mat2(0.9, 0.1, 0.2, 0.8)), zero_plus());
  const DensityOperator rho1 = source_density(corr, 1);
  const DensityOperator rho2 = source_density(corr, 2);
  const QuantumSource broken = QuantumSource::explicit_family(
      2,
      [rho1, rho2](int m) {
        if (m == 1) return rho1;
        if (m == 2) return tensor_product(rho1, rho1);
        return tensor_product(rho2, tensor_power(rho1, m - 2));
      },
      "rho_2 := rho_1 x rho_1");
  const CheckReport b = check_consistency(broken, 2, 1, 20, 1);
  const QuantumSource offstart = construct_classically_correlated(
      ClassicalProcess::markov(mat2(0.9, 0.1, 0.2, 0.8), vec2(1.0, 0.0)), AlphabetSpec::computational(2));
  const CheckReport o = check_stationarity(offstart, 1, 1, 20, 1);
  const bool negatives = !b.passed && !o.passed;
  return {negatives, std::to_string(sources.size()) + " sources, " + std::to_string(checks) +
                         " checks passed (worst deviation " + fmt(worst) + "); broken family deviation " +
                         fmt(b.max_deviation) + ", off-stationary start deviation " + fmt(o.max_deviation) +
                         (negatives ? " (both fail as required)" : " (a negative case did not fail)")};
}

// 4. Embedding channel applied to the orthonormal source equals the direct construction.
Outcome embedding_reproduction() {
  double worst = 0.0;
  for (const FleetProcess& p : fleet_processes()) {
    const QuantumSource ortho = construct_classically_correlated(p.proc, AlphabetSpec::computational(2));
    const QuantumSource embedded =
        channel_transform_source(ortho, embedding_channel(zero_plus(), PinchingBasis::computational(2)));
    const QuantumSource direct = construct_classically_correlated(p.proc, zero_plus());
    for (int m = 1; m <= 4; ++m) {
      worst = std::max(worst, max_abs_entry(source_density(embedded, m).matrix() - source_density(direct, m).matrix()));
    }
  }
  return {worst <= 1e-12, "4 processes, m <= 4, worst entry deviation " + fmt(worst)};
}

// 5. Empirical verdict triples match the classical classifier and the expected matrix.
Outcome discrimination_matrix() {
  std::string detail;
  bool ok = true;
  for (const FleetProcess& p : fleet_processes()) {
    const QuantumSource src = construct_classically_correlated(p.proc, AlphabetSpec::computational(2));
    const SweepReport s = sweep(src, 5);
    const VerdictTriple oracle = oracle_triple(classify_process(p.proc));
    const bool match = s.aggregate == p.expected && oracle == p.expected && s.implications_consistent;
    ok = ok && match;
    if (!detail.empty()) detail += "; ";
    detail += p.name + " " + s.aggregate.str() + (match ? "" : " expected " + p.expected.str());
  }
  return {ok, detail};
}

// 6. Verdict triples under every library channel.
struct ChannelMatrix {
  int cells = 0;
  int forward_violations = 0;      // a pass of the source lost after the channel
  int equal_nonreplacement = 0;
  int nonreplacement_cells = 0;
  int equal_all = 0;
  std::vector<std::string> changed;
};

const ChannelMatrix& channel_matrix() {
  static const ChannelMatrix out = [] {
    ChannelMatrix r;
    for (const FleetSource& f : fleet_sources()) {
      for (const NamedChannel& c : library_channels()) {
        const VerdictTriple t = sweep(channel_transform_source(f.src, c.channel), 9).aggregate;
        ++r.cells;
        const Verdict before[3] = {f.expected.ergodic, f.expected.weak, f.expected.strong};
        const Verdict after[3] = {t.ergodic, t.weak, t.strong};
        for (int k = 0; k < 3; ++k)
          if (before[k] == Verdict::pass && after[k] != Verdict::pass) ++r.forward_violations;
        const bool same = t == f.expected;
        r.equal_all += same;
        if (!c.replacement) {
          ++r.nonreplacement_cells;
          r.equal_nonreplacement += same;
        }
        if (!same) r.changed.push_back(c.name + " on " + f.name + " -> " + t.str());
      }
    }
    return r;
  }();
  return out;
}

Outcome channel_preservation_forward() {
  const ChannelMatrix& r = channel_matrix();
  const bool ok = r.forward_violations == 0 && r.equal_nonreplacement == r.nonreplacement_cells;
  return {ok, std::to_string(r.cells) + " (source, channel) cells: no pass lost (" + std::to_string(r.forward_violations) +
                  " violations); triples unchanged in " + std::to_string(r.equal_nonreplacement) + "/" +
                  std::to_string(r.nonreplacement_cells) + " cells with non-replacement channels"};
}

Outcome channel_preservation_exact() {
  const ChannelMatrix& r = channel_matrix();
  std::string detail = "triples unchanged in " + std::to_string(r.equal_all) + "/" + std::to_string(r.cells) + " cells";
  for (const std::string& c : r.changed) detail += "; changed: " + c;
  return {r.equal_all == r.cells, detail};
}

// 7. Fitted decay rate of the aperiodic chain.
Outcome decay_rate() {
  const QuantumSource base =
      construct_classically_correlated(ClassicalProcess::markov(mat2(0.9, 0.1, 0.2, 0.8)), AlphabetSpec::computational(2));
  const QuantumSource dep = channel_transform_source(base, depolarizing_channel(2, 0.3));
  const Operator ind = ops::basis_projector(2, 1);
  const ErgodicityReport before = strong_mixing_test(base, ind, ind, kHorizon, Backend::transfer);
  const ErgodicityReport after = strong_mixing_test(dep, ind, ind, kHorizon, Backend::transfer);
  if (!before.fitted_decay_rate || !after.fitted_decay_rate) return {false, "no decay fit available"};
  const double eb = std::abs(*before.fitted_decay_rate - 0.7) / 0.7;
  const double ea = std::abs(*after.fitted_decay_rate - 0.7) / 0.7;
  return {eb <= 0.05 && ea <= 0.05 && before.verdict == Verdict::pass && after.verdict == Verdict::pass,
          "rate " + fmt(*before.fitted_decay_rate) + " before, " + fmt(*after.fitted_decay_rate) +
              " after depolarizing(0.3); relative errors " + fmt(eb) + ", " + fmt(ea)};
}

// 8. Conditional expectation properties and the state/measure correspondence.
Outcome conditional_expectation_suite() {
  const PinchingBasis basis = PinchingBasis::computational(2);
  const ExpectationPropertyReport r = verify_expectation_properties(basis, 50, 8, 3, 1e-10);

  bool idempotent = true;
  bool round_trip = true;
  for (std::uint64_t t = 0; t < 50; ++t) {
    const int m = 1 + static_cast<int>(t % 3);
    const Operator a = random_observable(SiteConfig(2), m, derive_seed(t, 80));
    const Operator e = conditional_expectation(a, basis);
    idempotent = idempotent && conditional_expectation(e, basis).matrix() == e.matrix();
    const DensityOperator diag = measure_to_state(state_to_measure(random_density(SiteConfig(2), m, t), basis), basis);
    round_trip = round_trip && measure_to_state(state_to_measure(diag, basis), basis).matrix() == diag.matrix();
  }

  bool prop1 = true;
  double worst_measure = 0.0;
  for (const FleetProcess& p : fleet_processes()) {
    const QuantumSource src = construct_classically_correlated(p.proc, AlphabetSpec::computational(2));
    prop1 = prop1 && sweep(src, 13).aggregate == oracle_triple(classify_process(p.proc));
    for (int m = 1; m <= 6; ++m) {
      const MeasureTable mu = state_to_measure(source_density(src, m), basis);
      const MeasureTable direct = measure_table(p.proc, m);
      for (std::size_t k = 0; k < mu.probabilities.size(); ++k)
        worst_measure = std::max(worst_measure, std::abs(mu.probabilities[k] - direct.probabilities[k]));
    }
  }
  prop1 = prop1 && worst_measure <= 1e-12;
  const bool ok = r.passed() && idempotent && round_trip && prop1;
  return {ok, "properties (a)-(d) worst " + fmt(std::max({r.positivity, r.fixed_points, r.module_property, r.trace})) +
                  ", idempotence " + (idempotent ? "exact" : "broken") + ", round trip " +
                  (round_trip ? "exact" : "broken") + ", classifier agreement " + (prop1 ? "holds" : "fails") +
                  " (measure deviation " + fmt(worst_measure) + ")"};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 9. Two CLI runs with identical config give byte-identical reports.
Outcome determinism() {
  const std::filesystem::path config = std::filesystem::path(QERGO_CONFIG_DIR) / "markov_depolarized.json";
  const auto work = std::filesystem::temp_directory_path() / "qergo_acceptance_determinism";
  std::filesystem::remove_all(work);
#ifdef QERGO_CLI_PATH
  const std::string cli = QERGO_CLI_PATH;
  for (const auto& [dir, threads] : {std::pair{"a", 1}, std::pair{"b", 6}}) {
    const std::string cmd = "\"" + cli + "\" run --config \"" + config.string() + "\" --out \"" + (work / dir).string() +
                            "\" --threads " + std::to_string(threads) + " > /dev/null";
    if (std::system(cmd.c_str()) != 0) return {false, "CLI run failed: " + cmd};
  }
  const std::string mode = "CLI";
#else
  ExperimentConfig c = load_config(config);
  emit_report(run_experiment(c), ReportFormat::structured, work / "a" / "report.json");
  emit_report(run_experiment(c), ReportFormat::csv_decay, work / "a" / "decay.csv");
  c.threads = 6;
  const RunReport r = run_experiment(c);
  emit_report(r, ReportFormat::structured, work / "b" / "report.json");
  emit_report(r, ReportFormat::csv_decay, work / "b" / "decay.csv");
  const std::string mode = "library";
#endif
  const std::string ra = slurp(work / "a" / "report.json");
  const bool same_report = !ra.empty() && ra == slurp(work / "b" / "report.json");
  const bool same_csv = slurp(work / "a" / "decay.csv") == slurp(work / "b" / "decay.csv");
  std::filesystem::remove_all(work);
  return {same_report && same_csv, mode + " runs with 1 and 6 threads: report " +
                                       (same_report ? "identical" : "differs") + " (" + std::to_string(ra.size()) +
                                       " bytes), csv " + (same_csv ? "identical" : "differs")};
}

struct Check {
  std::string id;
  std::string title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Check> all{
      {"1", "channel validity", channel_validity},
      {"2", "duality pairing", duality_pairing},
      {"3", "consistency and stationarity suites", padding_suites},
      {"4", "embedding reproduction", embedding_reproduction},
      {"5", "discrimination matrix", discrimination_matrix},
      {"6a", "channels preserve verdicts (passes kept; non-replacement channels exact)", channel_preservation_forward},
      {"6b", "channels preserve verdicts (every library channel, exact triples)", channel_preservation_exact},
      {"7", "decay rate", decay_rate},
      {"8", "conditional expectation and measures", conditional_expectation_suite},
      {"9", "determinism", determinism},
  };
  std::vector<const Check*> selected;
  for (const Check& c : all)
    if (argc < 2 || c.id == argv[1]) selected.push_back(&c);
  if (selected.empty()) {
    std::cerr << "unknown criterion '" << argv[1] << "'\n";
    return 2;
  }
  bool ok = true;
  for (const Check* c : selected) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c->run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ok = ok && o.passed;
    std::printf("criterion %-2s %s  %s: %s [%.2f s]\n", c->id.c_str(), o.passed ? "PASS" : "FAIL", c->title.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return ok ? 0 : 1;
}
