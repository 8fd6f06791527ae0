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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qergo/experiment.hpp"

using namespace qergo;

namespace {

const char* kIid = R"({"seed": 3, "source": {"kind": "iid", "state": {"diagonal": [0.6, 0.4]}}, "n_max": 200})";

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("defaults and round trip of the resolved config") {
  const ExperimentConfig c = parse_config(kIid);
  CHECK(c.d == 2);
  CHECK(c.tests.size() == 5);
  CHECK(c.m == 1);
  CHECK(c.n_max == 200);
  CHECK(c.backend == Backend::transfer);
  CHECK(resolved_policy(c).epsilon == 1e-2);
  const std::string echo = config_to_json(c);
  CHECK(config_to_json(parse_config(echo)) == echo);
  ExperimentConfig dense = parse_config(R"({"seed": 1, "backend": "dense", "source": {"kind": "iid", "state": {"diagonal": [1, 0]}}})");
  CHECK(resolved_policy(dense).epsilon == 5e-2);
}

TEST_CASE("config diagnostics name the field") {
  CHECK(config_error(R"({"source": {"kind": "iid", "state": {"diagonal": [0.5, 0.5]}}})").find("seed") != std::string::npos);
  CHECK(config_error(R"({"seed": 1, "source": {"kind": "iid", "state": {"diagonal": [0.5, 0.5]}}, "extra": 2})")
            .find("extra") != std::string::npos);
  CHECK(config_error(R"({"seed": 1, "source": {"kind": "iid", "state": {"diagonal": [0.7, 0.5]}}})").find("source.state") !=
        std::string::npos);
  CHECK(config_error(R"({"seed": 1, "source": {"kind": "iid", "state": {"diagonal": [0.5, 0.5]}},
                        "channel": {"kind": "depolarizing", "p": 3}})")
            .find("channel") != std::string::npos);
  CHECK(config_error(R"({"seed": 1, "source": {"kind": "ghz"}})").find("source.kind") != std::string::npos);
  CHECK(config_error(R"({"seed": 1, "source": {"kind": "classically_correlated",
                        "process": {"kind": "markov", "transition": [[1, 0], [0, 1]]}}})")
            .find("source.process") != std::string::npos);
  CHECK(config_error(R"({"seed": 1, "source": {"kind": "classically_correlated",
                        "process": {"kind": "iid", "weights": [0.5, 0.5]},
                        "alphabet": {"vectors": [[1, 0], [1, 0]]}}})")
            .find("source.alphabet") != std::string::npos);
  CHECK(config_error(R"({"seed": 1, "tests": ["ergodic", "mixing"], "source": {"kind": "iid", "state": {"diagonal": [1, 0]}}})")
            .find("tests[1]") != std::string::npos);
  CHECK(config_error(R"({"seed": 1, "m": 3, "n_max": 2, "source": {"kind": "iid", "state": {"diagonal": [1, 0]}}})")
            .find("n_max") != std::string::npos);
  CHECK(config_error("{\n  \"seed\": 1,\n  \"source\" {}\n}").find("line 3") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), IoError);
}

TEST_CASE("iid run passes everything") {
  const RunReport r = run_experiment(parse_config(kIid));
  CHECK(r.passed());
  CHECK(r.verdicts.size() == 5);
  for (const auto& [test, v] : r.verdicts) CHECK(v == Verdict::pass);
  REQUIRE(r.sweep.has_value());
  CHECK(r.sweep->pairs.size() == 14);
}

TEST_CASE("period two source fails weak mixing and cites the pair") {
  const ExperimentConfig c = load_config(std::filesystem::path(QERGO_CONFIG_DIR) / "period2_weak.json");
  const RunReport r = run_experiment(c);
  CHECK_FALSE(r.passed());
  REQUIRE(r.verdicts.size() == 1);
  CHECK(r.verdicts[0].second == Verdict::fail);
  REQUIRE_FALSE(r.failures.empty());
  CHECK(r.failures[0].pair_index.has_value());
  CHECK(r.failures[0].pair_label.rfind("canonical:", 0) == 0);
  const std::string json = render_report(r, ReportFormat::structured);
  CHECK(json.find("\"pair\": \"canonical:P0@1|P0@1\"") != std::string::npos);
}

TEST_CASE("report rendering is deterministic and plottable") {
  const auto dir = std::filesystem::temp_directory_path() / "qergo_experiment_test";
  std::filesystem::remove_all(dir);
  const ExperimentConfig c = parse_config(kIid);
  const RunReport r = run_experiment(c);
  emit_report(r, ReportFormat::structured, dir / "a" / "report.json");
  emit_report(r, ReportFormat::structured, dir / "b" / "report.json");
  emit_report(r, ReportFormat::csv_decay, dir / "a" / "decay.csv");
  CHECK(read_file(dir / "a" / "report.json") == read_file(dir / "b" / "report.json"));
  CHECK(render_report(run_experiment(parse_config(read_file(dir / "a" / "report.json"))), ReportFormat::structured) ==
        read_file(dir / "a" / "report.json"));

  const std::string csv = read_file(dir / "a" / "decay.csv");
  CHECK(csv.rfind("pair,i,corr_real,corr_imag,target,abs_deviation,cesaro_mean\n", 0) == 0);
  CHECK(count_lines(csv) == 1 + static_cast<std::size_t>(c.n_max - c.m + 1) * r.sweep->pairs.size());
  std::istringstream rows(csv);
  std::string line;
  std::getline(rows, line);
  while (std::getline(rows, line)) {
    std::vector<std::string> cols;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cols.push_back(cell);
    REQUIRE(cols.size() == 7);
    CHECK(std::stod(cols[5]) <= 1e-15);
  }
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(emit_report(r, ReportFormat::structured, "/proc/qergo/forbidden/report.json"), IoError);
}

TEST_CASE("thread count does not change the report") {
  ExperimentConfig c = load_config(std::filesystem::path(QERGO_CONFIG_DIR) / "markov_depolarized.json");
  c.n_max = 300;
  c.check_max_sites = 4;
  const std::string one = render_report(run_experiment(c), ReportFormat::structured);
  c.threads = 4;
  CHECK(render_report(run_experiment(c), ReportFormat::structured) == one);
}

TEST_CASE("shipped configs parse") {
  for (const auto& entry : std::filesystem::directory_iterator(QERGO_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(load_config(entry.path()));
  }
}

}  // TEST_SUITE
