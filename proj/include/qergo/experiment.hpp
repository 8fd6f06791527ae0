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

#ifndef QERGO_EXPERIMENT_HPP
#define QERGO_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qergo/ergodicity.hpp"
#include "qergo/sources.hpp"

namespace qergo {

/// Malformed or out-of-range experiment configuration. The message names the
/// offending field path, or the line and column for syntax errors.
class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Filesystem failure while reading a config or writing a report.
class IoError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kConfigSchemaVersion = 1;
std::string toolkit_version();

enum class TestKind { consistency, stationarity, ergodic, weak, strong };
std::string to_string(TestKind t);

struct ExperimentConfig {
  int d = 2;
  std::string source_json;   // normalized JSON object describing the source
  std::string channel_json;  // empty when no channel is applied
  std::vector<TestKind> tests;
  int m = 1;
  int n_max = 2000;
  int observable_count = 10;
  std::uint64_t seed = 0;
  Backend backend = Backend::transfer;
  std::optional<double> verdict_epsilon;  // backend default when absent
  double check_tolerance = kCheckTolerance;
  double window_fraction = 0.1;
  int check_max_sites = 6;
  int check_trials = 20;
  std::vector<int> shift_units{1};
  std::string report_path = "report.json";
  std::string csv_path = "decay.csv";
  int threads = 1;  // execution detail, not echoed
};

/// Parses a config document. A run report is also accepted, in which case its
/// "config" echo is used.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Verdict policy with backend defaults filled in.
VerdictPolicy resolved_policy(const ExperimentConfig& config);

/// Fully resolved config, defaults included; parse_config(config_to_json(c)) == c.
std::string config_to_json(const ExperimentConfig& config);

QuantumSource build_source(const ExperimentConfig& config);

struct RunFailure {
  std::string test;
  std::string detail;
  std::optional<std::size_t> pair_index;
  std::string pair_label;
};

struct RunReport {
  ExperimentConfig config;
  std::string source_description;
  std::vector<CheckReport> checks;
  std::optional<SweepReport> sweep;
  std::vector<std::pair<TestKind, Verdict>> verdicts;
  std::vector<RunFailure> failures;
  double wall_time_seconds = 0.0;

  bool passed() const { return failures.empty(); }
};

RunReport run_experiment(const ExperimentConfig& config);

enum class ReportFormat { structured, csv_decay };

/// Deterministic rendering; wall time is left out of the structured form.
std::string render_report(const RunReport& report, ReportFormat format);

/// Writes the rendering to `path`, creating parent directories.
void emit_report(const RunReport& report, ReportFormat format, const std::filesystem::path& path);

}  // namespace qergo

#endif  // QERGO_EXPERIMENT_HPP
