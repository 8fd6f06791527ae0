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

#include "qergo/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qergo/random.hpp"

#ifndef QERGO_VERSION
#define QERGO_VERSION "0.0.0"
#endif

namespace qergo {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kReportSchema = "qergo.run_report";

[[noreturn]] void config_fail(const std::string& path, const std::string& message) {
  throw ConfigError((path.empty() ? std::string("config") : path) + ": " + message);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) config_fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) config_fail(path.empty() ? key : path + "." + key, "missing required field");
  return *it;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at_index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) config_fail(join(path, it.key()), "unknown field");
  }
}

double get_real(const json& v, const std::string& path) {
  if (!v.is_number()) config_fail(path, "expected a number");
  return v.get<double>();
}

int get_int(const json& v, const std::string& path, int min_value) {
  if (!v.is_number_integer()) config_fail(path, "expected an integer");
  const auto x = v.get<long long>();
  if (x < min_value || x > 1'000'000'000LL) config_fail(path, "must be an integer >= " + std::to_string(min_value));
  return static_cast<int>(x);
}

Complex get_complex(const json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  config_fail(path, "expected a number or a [re, im] pair");
}

RealVector get_real_vector(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) config_fail(path, "expected a nonempty array of numbers");
  RealVector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = get_real(v[i], at_index(path, i));
  return out;
}

RealMatrix get_real_matrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) config_fail(path, "expected a nonempty array of rows");
  const std::size_t cols = v[0].is_array() ? v[0].size() : 0;
  RealMatrix out(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < v.size(); ++r) {
    if (!v[r].is_array() || v[r].size() != cols || cols == 0) config_fail(at_index(path, r), "rows must have equal nonzero length");
    for (std::size_t c = 0; c < cols; ++c)
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = get_real(v[r][c], at_index(at_index(path, r), c));
  }
  return out;
}

Vector get_complex_vector(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) config_fail(path, "expected a nonempty array");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = get_complex(v[i], at_index(path, i));
  return out;
}

Matrix get_complex_matrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) config_fail(path, "expected a nonempty array of rows");
  const std::size_t cols = v[0].is_array() ? v[0].size() : 0;
  Matrix out(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < v.size(); ++r) {
    if (!v[r].is_array() || v[r].size() != cols) config_fail(at_index(path, r), "rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c)
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = get_complex(v[r][c], at_index(at_index(path, r), c));
  }
  return out;
}

// Runs `build`, re-labelling library validation errors with the config path.
template <typename F>
auto with_path(const std::string& path, F&& build) -> decltype(build()) {
  try {
    return build();
  } catch (const ConfigError&) {
    throw;
  } catch (const ResourceError&) {
    throw;
  } catch (const Error& e) {
    config_fail(path, e.what());
  }
}

ClassicalProcess build_process(const json& j, const std::string& path) {
  const std::string kind = require(j, "kind", path).get<std::string>();
  if (kind == "iid") {
    reject_unknown(j, {"kind", "weights"}, path);
    const RealVector w = get_real_vector(require(j, "weights", path), join(path, "weights"));
    return with_path(path, [&] { return ClassicalProcess::iid(w); });
  }
  if (kind == "markov") {
    reject_unknown(j, {"kind", "transition", "initial"}, path);
    const RealMatrix p = get_real_matrix(require(j, "transition", path), join(path, "transition"));
    std::optional<RealVector> initial;
    if (auto it = j.find("initial"); it != j.end() && !(it->is_string() && it->get<std::string>() == "stationary")) {
      initial = get_real_vector(*it, join(path, "initial"));
    }
    return with_path(path, [&] { return ClassicalProcess::markov(p, initial); });
  }
  if (kind == "mixture") {
    reject_unknown(j, {"kind", "components", "weights"}, path);
    const json& comps = require(j, "components", path);
    if (!comps.is_array() || comps.empty()) config_fail(join(path, "components"), "expected a nonempty array");
    std::vector<ClassicalProcess> parts;
    for (std::size_t i = 0; i < comps.size(); ++i) parts.push_back(build_process(comps[i], at_index(join(path, "components"), i)));
    const RealVector w = get_real_vector(require(j, "weights", path), join(path, "weights"));
    return with_path(path, [&] { return ClassicalProcess::mixture(parts, w); });
  }
  config_fail(join(path, "kind"), "unknown process kind '" + kind + "' (expected iid, markov or mixture)");
}

AlphabetSpec build_alphabet(const json& j, int d, const std::string& path) {
  if (j.is_string()) {
    if (j.get<std::string>() != "computational") config_fail(path, "expected \"computational\" or {\"vectors\": ...}");
    return AlphabetSpec::computational(d);
  }
  reject_unknown(j, {"vectors"}, path);
  const json& vs = require(j, "vectors", path);
  if (!vs.is_array() || vs.empty()) config_fail(join(path, "vectors"), "expected a nonempty array");
  std::vector<Vector> vectors;
  for (std::size_t i = 0; i < vs.size(); ++i) vectors.push_back(get_complex_vector(vs[i], at_index(join(path, "vectors"), i)));
  return with_path(path, [&] { return AlphabetSpec(d, vectors); });
}

KrausChannel build_channel(const json& j, int d, const std::string& path) {
  const std::string kind = require(j, "kind", path).get<std::string>();
  ChannelSpec spec;
  spec.d = d;
  spec.kind = with_path(join(path, "kind"), [&] { return channel_kind_from_string(kind); });
  if (auto it = j.find("block_size"); it != j.end()) spec.block_size = get_int(*it, join(path, "block_size"), 1);
  switch (spec.kind) {
    case ChannelKind::identity:
      reject_unknown(j, {"kind", "block_size"}, path);
      break;
    case ChannelKind::depolarizing:
      reject_unknown(j, {"kind", "block_size", "p"}, path);
      spec.parameter = get_real(require(j, "p", path), join(path, "p"));
      break;
    case ChannelKind::amplitude_damping:
      reject_unknown(j, {"kind", "block_size", "gamma"}, path);
      spec.parameter = get_real(require(j, "gamma", path), join(path, "gamma"));
      break;
    case ChannelKind::phase_damping:
      reject_unknown(j, {"kind", "block_size", "lambda"}, path);
      spec.parameter = get_real(require(j, "lambda", path), join(path, "lambda"));
      break;
    case ChannelKind::unitary:
      reject_unknown(j, {"kind", "block_size", "matrix", "random_seed"}, path);
      if (auto it = j.find("matrix"); it != j.end()) {
        spec.unitary = get_complex_matrix(*it, join(path, "matrix"));
      } else {
        const json& s = require(j, "random_seed", path);
        if (!s.is_number_unsigned()) config_fail(join(path, "random_seed"), "expected a nonnegative integer");
        spec.unitary = random_unitary(d, s.get<std::uint64_t>());
      }
      break;
    case ChannelKind::embedding:
      reject_unknown(j, {"kind", "block_size", "alphabet", "basis"}, path);
      spec.alphabet = build_alphabet(require(j, "alphabet", path), d, join(path, "alphabet"));
      if (auto it = j.find("basis"); it != j.end() && !(it->is_string() && it->get<std::string>() == "computational")) {
        const Matrix cols = get_complex_matrix(*it, join(path, "basis"));
        spec.basis = with_path(join(path, "basis"), [&] { return PinchingBasis(cols); });
      }
      break;
  }
  KrausChannel ch = with_path(path, [&] { return make_standard_channel(spec); });
  const KrausReport r = validate_kraus(ch);
  if (!r.passed) config_fail(path, "channel is not trace preserving");
  return ch;
}

QuantumSource build_source_json(const json& j, int d, const std::string& path) {
  const std::string kind = require(j, "kind", path).get<std::string>();
  if (kind == "iid") {
    reject_unknown(j, {"kind", "state"}, path);
    const json& state = require(j, "state", path);
    const std::string spath = join(path, "state");
    Matrix m;
    if (state.is_object() && state.contains("diagonal")) {
      reject_unknown(state, {"diagonal"}, spath);
      m = get_complex_vector(state["diagonal"], join(spath, "diagonal")).asDiagonal();
    } else if (state.is_object() && state.contains("matrix")) {
      reject_unknown(state, {"matrix"}, spath);
      m = get_complex_matrix(state["matrix"], join(spath, "matrix"));
    } else {
      config_fail(spath, "expected {\"diagonal\": [...]} or {\"matrix\": [[...]]}");
    }
    return with_path(spath, [&] { return QuantumSource::iid(DensityOperator(Operator(d, 1, m))); });
  }
  if (kind == "classically_correlated") {
    reject_unknown(j, {"kind", "process", "alphabet"}, path);
    ClassicalProcess proc = build_process(require(j, "process", path), join(path, "process"));
    AlphabetSpec alphabet = j.contains("alphabet") ? build_alphabet(j["alphabet"], d, join(path, "alphabet"))
                                                   : AlphabetSpec::computational(d);
    return with_path(path, [&] { return construct_classically_correlated(proc, alphabet); });
  }
  if (kind == "channel_transformed") {
    reject_unknown(j, {"kind", "base", "channel"}, path);
    QuantumSource base = build_source_json(require(j, "base", path), d, join(path, "base"));
    KrausChannel ch = build_channel(require(j, "channel", path), d, join(path, "channel"));
    return with_path(path, [&] { return channel_transform_source(base, ch); });
  }
  config_fail(join(path, "kind"), "unknown source kind '" + kind +
                                      "' (expected iid, classically_correlated or channel_transformed)");
}

TestKind test_from_string(const std::string& s, const std::string& path) {
  for (TestKind t : {TestKind::consistency, TestKind::stationarity, TestKind::ergodic, TestKind::weak, TestKind::strong}) {
    if (to_string(t) == s) return t;
  }
  config_fail(path, "unknown test '" + s + "' (expected consistency, stationarity, ergodic, weak, strong or all)");
}

std::string position_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

ordered_json complex_json(Complex c) { return ordered_json::array({c.real(), c.imag()}); }

ordered_json report_json(const ErgodicityReport& r) {
  ordered_json j;
  j["verdict"] = to_string(r.verdict);
  j["final_statistic"] = r.final_statistic;
  j["window"] = r.window;
  j["window_max"] = r.window_max;
  j["fitted_decay_rate"] = r.fitted_decay_rate ? ordered_json(*r.fitted_decay_rate) : ordered_json(nullptr);
  return j;
}

ordered_json triple_json(const VerdictTriple& t) {
  ordered_json j;
  j["ergodic"] = to_string(t.ergodic);
  j["weak_mixing"] = to_string(t.weak);
  j["strong_mixing"] = to_string(t.strong);
  return j;
}

}  // namespace

std::string toolkit_version() { return QERGO_VERSION; }

std::string to_string(TestKind t) {
  switch (t) {
    case TestKind::consistency: return "consistency";
    case TestKind::stationarity: return "stationarity";
    case TestKind::ergodic: return "ergodic";
    case TestKind::weak: return "weak";
    case TestKind::strong: return "strong";
  }
  return "unknown";
}

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: syntax error at " + position_of(text, e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) config_fail("", "top level must be an object");
  if (doc.contains("schema") && doc["schema"] == kReportSchema) {
    if (!doc.contains("config")) config_fail("config", "run report has no config echo");
    doc = doc["config"];
  }
  reject_unknown(doc, {"schema_version", "site_dimension", "source", "channel", "tests", "m", "n_max",
                       "observable_count", "seed", "backend", "tolerances", "checks", "output"},
                 "");
  if (auto it = doc.find("schema_version"); it != doc.end() && get_int(*it, "schema_version", 1) != kConfigSchemaVersion) {
    config_fail("schema_version", "unsupported version (expected " + std::to_string(kConfigSchemaVersion) + ")");
  }

  ExperimentConfig c;
  if (auto it = doc.find("site_dimension"); it != doc.end()) c.d = get_int(*it, "site_dimension", 2);
  const json& seed = require(doc, "seed", "");
  if (!seed.is_number_unsigned()) config_fail("seed", "expected a nonnegative integer");
  c.seed = seed.get<std::uint64_t>();

  const json& source = require(doc, "source", "");
  if (!source.is_object()) config_fail("source", "expected an object");
  c.source_json = source.dump();
  if (auto it = doc.find("channel"); it != doc.end() && !it->is_null()) {
    if (!it->is_object()) config_fail("channel", "expected an object");
    c.channel_json = it->dump();
  }

  if (auto it = doc.find("tests"); it != doc.end()) {
    std::vector<std::string> names;
    if (it->is_string()) {
      names.push_back(it->get<std::string>());
    } else if (it->is_array() && !it->empty()) {
      for (std::size_t i = 0; i < it->size(); ++i) {
        if (!(*it)[i].is_string()) config_fail(at_index("tests", i), "expected a string");
        names.push_back((*it)[i].get<std::string>());
      }
    } else {
      config_fail("tests", "expected a test name or a nonempty array of names");
    }
    std::set<TestKind> chosen;
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == "all") {
        chosen.insert({TestKind::consistency, TestKind::stationarity, TestKind::ergodic, TestKind::weak, TestKind::strong});
      } else {
        chosen.insert(test_from_string(names[i], at_index("tests", i)));
      }
    }
    c.tests.assign(chosen.begin(), chosen.end());
  } else {
    c.tests = {TestKind::consistency, TestKind::stationarity, TestKind::ergodic, TestKind::weak, TestKind::strong};
  }

  if (auto it = doc.find("m"); it != doc.end()) c.m = get_int(*it, "m", 1);
  if (auto it = doc.find("n_max"); it != doc.end()) c.n_max = get_int(*it, "n_max", 1);
  if (c.n_max < c.m) config_fail("n_max", "must be >= m");
  if (auto it = doc.find("observable_count"); it != doc.end()) c.observable_count = get_int(*it, "observable_count", 1);
  if (auto it = doc.find("backend"); it != doc.end()) {
    if (!it->is_string()) config_fail("backend", "expected \"dense\" or \"transfer\"");
    c.backend = with_path("backend", [&] { return backend_from_string(it->get<std::string>()); });
  }
  if (auto it = doc.find("tolerances"); it != doc.end()) {
    reject_unknown(*it, {"verdict", "check", "window_fraction"}, "tolerances");
    if (auto v = it->find("verdict"); v != it->end()) c.verdict_epsilon = get_real(*v, "tolerances.verdict");
    if (auto v = it->find("check"); v != it->end()) c.check_tolerance = get_real(*v, "tolerances.check");
    if (auto v = it->find("window_fraction"); v != it->end()) c.window_fraction = get_real(*v, "tolerances.window_fraction");
    if (c.verdict_epsilon && !(*c.verdict_epsilon > 0.0)) config_fail("tolerances.verdict", "must be positive");
    if (!(c.check_tolerance > 0.0)) config_fail("tolerances.check", "must be positive");
    if (!(c.window_fraction > 0.0 && c.window_fraction <= 1.0)) config_fail("tolerances.window_fraction", "must lie in (0, 1]");
  }
  if (auto it = doc.find("checks"); it != doc.end()) {
    reject_unknown(*it, {"max_sites", "trials", "shift_units"}, "checks");
    if (auto v = it->find("max_sites"); v != it->end()) c.check_max_sites = get_int(*v, "checks.max_sites", 2);
    if (auto v = it->find("trials"); v != it->end()) c.check_trials = get_int(*v, "checks.trials", 1);
    if (auto v = it->find("shift_units"); v != it->end()) {
      if (!v->is_array() || v->empty()) config_fail("checks.shift_units", "expected a nonempty array");
      c.shift_units.clear();
      for (std::size_t i = 0; i < v->size(); ++i) c.shift_units.push_back(get_int((*v)[i], at_index("checks.shift_units", i), 1));
    }
  }
  if (auto it = doc.find("output"); it != doc.end()) {
    reject_unknown(*it, {"report", "csv"}, "output");
    if (auto v = it->find("report"); v != it->end()) {
      if (!v->is_string()) config_fail("output.report", "expected a path string");
      c.report_path = v->get<std::string>();
    }
    if (auto v = it->find("csv"); v != it->end()) {
      if (!v->is_string()) config_fail("output.csv", "expected a path string");
      c.csv_path = v->get<std::string>();
    }
  }
  // Surface source and channel errors at parse time.
  build_source(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

VerdictPolicy resolved_policy(const ExperimentConfig& config) {
  VerdictPolicy p = VerdictPolicy::for_backend(config.backend);
  if (config.verdict_epsilon) p.epsilon = *config.verdict_epsilon;
  p.window_fraction = config.window_fraction;
  return p;
}

std::string config_to_json(const ExperimentConfig& c) {
  ordered_json j;
  j["schema_version"] = kConfigSchemaVersion;
  j["site_dimension"] = c.d;
  j["source"] = ordered_json::parse(c.source_json);
  if (!c.channel_json.empty()) j["channel"] = ordered_json::parse(c.channel_json);
  ordered_json tests = ordered_json::array();
  for (TestKind t : c.tests) tests.push_back(to_string(t));
  j["tests"] = tests;
  j["m"] = c.m;
  j["n_max"] = c.n_max;
  j["observable_count"] = c.observable_count;
  j["seed"] = c.seed;
  j["backend"] = to_string(c.backend);
  j["tolerances"] = {{"verdict", resolved_policy(c).epsilon},
                     {"check", c.check_tolerance},
                     {"window_fraction", c.window_fraction}};
  j["checks"] = {{"max_sites", c.check_max_sites}, {"trials", c.check_trials}, {"shift_units", c.shift_units}};
  j["output"] = {{"report", c.report_path}, {"csv", c.csv_path}};
  return j.dump(2);
}

QuantumSource build_source(const ExperimentConfig& config) {
  SiteConfig cfg(config.d);
  QuantumSource src = build_source_json(json::parse(config.source_json), config.d, "source");
  if (!config.channel_json.empty()) {
    KrausChannel ch = build_channel(json::parse(config.channel_json), config.d, "channel");
    src = with_path("channel", [&] { return channel_transform_source(src, ch); });
  }
  return src;
}

RunReport run_experiment(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.config = config;
  const QuantumSource src = build_source(config);
  report.source_description = src.describe();
  const auto selected = [&](TestKind t) { return std::find(config.tests.begin(), config.tests.end(), t) != config.tests.end(); };
  const int align = src.alignment();

  if (selected(TestKind::consistency)) {
    Verdict v = Verdict::pass;
    for (int m = 1; m < config.check_max_sites; ++m) {
      for (int i = 1; m + i <= config.check_max_sites; ++i) {
        if (m % align != 0 || (m + i) % align != 0) continue;
        const auto stream = static_cast<std::uint64_t>(1000 * m + i);
        CheckReport r = check_consistency(src, m, i, config.check_trials, derive_seed(config.seed, stream), config.check_tolerance);
        if (!r.passed) {
          v = Verdict::fail;
          report.failures.push_back({"consistency",
                                     "m=" + std::to_string(m) + " i=" + std::to_string(i) + " max deviation " +
                                         fmt_double(r.max_deviation) + " at trial " + std::to_string(r.worst_trial),
                                     std::nullopt, {}});
        }
        report.checks.push_back(std::move(r));
      }
    }
    report.verdicts.emplace_back(TestKind::consistency, v);
  }
  if (selected(TestKind::stationarity)) {
    Verdict v = Verdict::pass;
    for (int unit : config.shift_units) {
      for (int m = 1; m < config.check_max_sites; ++m) {
        for (int i = 1; m + i * unit <= config.check_max_sites; ++i) {
          if (m % align != 0 || (i * unit) % align != 0) continue;
          const auto stream = static_cast<std::uint64_t>(1'000'000 + 10'000 * unit + 1000 * m + i);
          CheckReport r = check_stationarity(src, m, i, config.check_trials, derive_seed(config.seed, stream), unit,
                                             config.check_tolerance);
          if (!r.passed) {
            v = Verdict::fail;
            report.failures.push_back({"stationarity",
                                       "m=" + std::to_string(m) + " i=" + std::to_string(i) + " N=" + std::to_string(unit) +
                                           " max deviation " + fmt_double(r.max_deviation) + " at trial " +
                                           std::to_string(r.worst_trial),
                                       std::nullopt, {}});
          }
          report.checks.push_back(std::move(r));
        }
      }
    }
    report.verdicts.emplace_back(TestKind::stationarity, v);
  }

  const bool any_ergodicity = selected(TestKind::ergodic) || selected(TestKind::weak) || selected(TestKind::strong);
  if (any_ergodicity) {
    report.sweep = sweep_report(src, config.m, config.observable_count, derive_seed(config.seed, 0xE460D1C),
                                config.n_max, config.backend, resolved_policy(config), config.threads);
    const std::pair<TestKind, Criterion> map[] = {{TestKind::ergodic, Criterion::ergodic_mean},
                                                  {TestKind::weak, Criterion::weak_mixing},
                                                  {TestKind::strong, Criterion::strong_mixing}};
    for (const auto& [test, criterion] : map) {
      if (!selected(test)) continue;
      Verdict v = Verdict::pass;
      for (const PairResult& p : report.sweep->pairs) {
        const ErgodicityReport& r = p.analysis.report(criterion);
        v = worst(v, r.verdict);
        if (r.verdict != Verdict::pass) {
          report.failures.push_back({to_string(criterion),
                                     to_string(r.verdict) + ", final statistic " + fmt_double(r.final_statistic),
                                     p.index, p.label});
        }
      }
      report.verdicts.emplace_back(test, v);
    }
  }
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string render_report(const RunReport& report, ReportFormat format) {
  if (format == ReportFormat::csv_decay) {
    std::string out = "pair,i,corr_real,corr_imag,target,abs_deviation,cesaro_mean\n";
    if (!report.sweep) return out;
    for (const PairResult& p : report.sweep->pairs) {
      const PairAnalysis& a = p.analysis;
      for (std::size_t k = 0; k < a.correlations.size(); ++k) {
        const Complex c = a.correlations[k];
        out += std::to_string(p.index) + ',' + std::to_string(a.m + static_cast<int>(k)) + ',' + fmt_double(c.real()) +
               ',' + fmt_double(c.imag()) + ',' + fmt_double(a.target.real()) + ',' +
               fmt_double(std::abs(c - a.target)) + ',' + fmt_double(a.cesaro_means[k].real()) + '\n';
      }
    }
    return out;
  }

  ordered_json j;
  j["schema"] = kReportSchema;
  j["schema_version"] = kConfigSchemaVersion;
  j["toolkit_version"] = toolkit_version();
  j["config"] = ordered_json::parse(config_to_json(report.config));
  j["source"] = report.source_description;
  j["passed"] = report.passed();
  ordered_json verdicts = ordered_json::object();
  for (const auto& [test, v] : report.verdicts) verdicts[to_string(test)] = to_string(v);
  j["verdicts"] = verdicts;

  ordered_json checks = ordered_json::array();
  for (const CheckReport& r : report.checks) {
    checks.push_back({{"check", r.check},
                      {"m", r.m},
                      {"extension", r.extension},
                      {"shift_unit", r.shift_unit},
                      {"trials", r.trials},
                      {"max_deviation", r.max_deviation},
                      {"worst_trial", r.worst_trial},
                      {"tolerance", r.tolerance},
                      {"passed", r.passed}});
  }
  j["checks"] = checks;

  if (report.sweep) {
    const SweepReport& s = *report.sweep;
    ordered_json sweep;
    sweep["m"] = s.m;
    sweep["n_max"] = s.n_max;
    sweep["backend"] = to_string(s.backend);
    sweep["scope_note"] = s.scope_note;
    sweep["aggregate"] = triple_json(s.aggregate);
    sweep["implications_consistent"] = s.implications_consistent;
    ordered_json pairs = ordered_json::array();
    for (const PairResult& p : s.pairs) {
      ordered_json pj;
      pj["index"] = p.index;
      pj["label"] = p.label;
      pj["target"] = complex_json(p.analysis.target);
      pj["verdicts"] = triple_json(p.verdicts);
      pj["ergodic"] = report_json(p.analysis.report(Criterion::ergodic_mean));
      pj["weak_mixing"] = report_json(p.analysis.report(Criterion::weak_mixing));
      pj["strong_mixing"] = report_json(p.analysis.report(Criterion::strong_mixing));
      pairs.push_back(std::move(pj));
    }
    sweep["pairs"] = pairs;
    j["ergodicity"] = sweep;
  }

  ordered_json failures = ordered_json::array();
  for (const RunFailure& f : report.failures) {
    ordered_json fj;
    fj["test"] = f.test;
    fj["detail"] = f.detail;
    if (f.pair_index) {
      fj["pair_index"] = *f.pair_index;
      fj["pair"] = f.pair_label;
    }
    failures.push_back(std::move(fj));
  }
  j["failures"] = failures;
  return j.dump(2) + "\n";
}

void emit_report(const RunReport& report, ReportFormat format, const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  const std::string text = render_report(report, format);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace qergo
