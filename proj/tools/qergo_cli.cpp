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

// qergo run --config FILE --out DIR [--seed N] [--n-max N] [--backend dense|transfer]
//           [--threads N] [-v]
//
// Exit codes: 0 every selected test passed, 1 a verdict failed or was
// inconclusive, 2 bad config or usage, 3 resource cap or I/O failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "qergo/experiment.hpp"

namespace {

enum Exit { kOk = 0, kVerdict = 1, kUsage = 2, kRuntime = 3 };

int run(const std::string& config_path, const std::filesystem::path& out_dir, std::optional<std::uint64_t> seed,
        std::optional<int> n_max, std::optional<std::string> backend, int threads, int verbosity) {
  using namespace qergo;
  ExperimentConfig config;
  try {
    config = load_config(config_path);
    if (seed) config.seed = *seed;
    if (n_max) {
      if (*n_max < config.m) throw ConfigError("--n-max: must be >= m");
      config.n_max = *n_max;
    }
    if (backend) config.backend = backend_from_string(*backend);
    config.threads = threads;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  if (verbosity > 0) std::cerr << "qergo " << toolkit_version() << ": running " << config_path << "\n";
  RunReport report;
  try {
    report = run_experiment(config);
    emit_report(report, ReportFormat::structured, out_dir / config.report_path);
    emit_report(report, ReportFormat::csv_decay, out_dir / config.csv_path);
    nlohmann::ordered_json timing;
    timing["wall_time_seconds"] = report.wall_time_seconds;
    timing["threads"] = config.threads;
    std::ofstream(out_dir / "timing.json") << timing.dump(2) << "\n";
  } catch (const ResourceError& e) {
    std::cerr << "error: resource cap hit: " << e.what() << "\n";
    return kRuntime;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }

  for (const auto& [test, verdict] : report.verdicts) {
    std::cout << to_string(test) << ": " << to_string(verdict) << "\n";
  }
  if (verbosity > 0) {
    for (const RunFailure& f : report.failures) {
      std::cerr << "  " << f.test << ": " << f.detail;
      if (f.pair_index) std::cerr << " [pair " << *f.pair_index << " " << f.pair_label << "]";
      std::cerr << "\n";
    }
    std::cerr << "wall time " << report.wall_time_seconds << " s\n";
  }
  return report.passed() ? kOk : kVerdict;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qergo: consistency, stationarity and ergodicity checks for quantum spin-chain sources"};
  app.set_version_flag("--version", qergo::toolkit_version());
  app.require_subcommand(1);

  CLI::App* run_cmd = app.add_subcommand("run", "run an experiment described by a JSON config");
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> n_max;
  std::optional<std::string> backend;
  int threads = 1;
  int verbosity = 0;
  run_cmd->add_option("-c,--config", config_path, "experiment config file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("-o,--out", out_dir, "output directory");
  run_cmd->add_option("--seed", seed, "override the config seed");
  run_cmd->add_option("--n-max", n_max, "override the horizon n_max")->check(CLI::PositiveNumber);
  run_cmd->add_option("--backend", backend, "override the backend")->check(CLI::IsMember({"dense", "transfer"}));
  run_cmd->add_option("-j,--threads", threads, "worker threads for the observable sweep")->check(CLI::Range(1, 1024));
  run_cmd->add_flag("-v,--verbose", verbosity, "print failures and timing to stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }
  return run(config_path, out_dir, seed, n_max, backend, threads, verbosity);
}
