// Copyright 2026 The qnd-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qnd: scenario runner on top of the libqnd C interface.
//
//   qnd run <scenario> [--out-dir DIR] [--seed N]
//   qnd validate <scenario>
//   qnd sweep <scenario-glob>... --param key=v1,v2,... [--out-dir DIR] [--seed N] [--jobs N]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical-invariant violation.

#include <glob.h>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "qnd/qnd.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int exit_code_for(qnd_status status) {
  switch (status) {
    case QND_OK: return kExitOk;
    case QND_ERR_NUMERICAL: return kExitNumerical;
    case QND_ERR_CONFIG: return kExitConfig;
    default: return kExitConfig;
  }
}

struct RunOutcome {
  int exit_code = kExitOk;
  std::string stdout_text;
  std::string stderr_text;
};

RunOutcome run_loaded(const qnd_scenario* scenario, const std::string& out_dir, std::optional<std::uint64_t> seed) {
  RunOutcome result;
  qnd_report* report = nullptr;
  const qnd_status status = qnd_scenario_run(scenario, out_dir.c_str(), seed ? 1 : 0, seed.value_or(0), &report);
  if (status != QND_OK) {
    result.exit_code = exit_code_for(status);
    result.stderr_text = std::string("error: ") + qnd_last_error() + "\n";
    return result;
  }
  std::ostringstream err;
  for (size_t i = 0; i < qnd_report_warning_count(report); ++i) {
    err << "warning: " << qnd_report_warning(report, i) << '\n';
  }
  for (size_t i = 0; i < qnd_report_violation_count(report); ++i) {
    err << "violation: " << qnd_report_violation(report, i) << '\n';
  }
  result.stdout_text = qnd_report_footer(report);
  result.stderr_text = err.str();
  result.exit_code = qnd_report_ok(report) ? kExitOk : kExitNumerical;
  qnd_report_free(report);
  return result;
}

int cmd_run(const std::string& path, const std::string& out_dir, std::optional<std::uint64_t> seed) {
  qnd_scenario* scenario = nullptr;
  if (qnd_scenario_load(path.c_str(), &scenario) != QND_OK) {
    std::cerr << "error: " << qnd_last_error() << '\n';
    return kExitConfig;
  }
  const RunOutcome outcome = run_loaded(scenario, out_dir, seed);
  qnd_scenario_free(scenario);
  std::cout << outcome.stdout_text;
  std::cerr << outcome.stderr_text;
  return outcome.exit_code;
}

int cmd_validate(const std::string& path) {
  qnd_scenario* scenario = nullptr;
  if (qnd_scenario_load(path.c_str(), &scenario) != QND_OK) {
    std::cerr << "error: " << qnd_last_error() << '\n';
    return kExitConfig;
  }
  std::cout << path << ": ok (scheme " << qnd_scenario_scheme(scenario) << ")\n";
  qnd_scenario_free(scenario);
  return kExitOk;
}

std::vector<std::string> expand_globs(const std::vector<std::string>& patterns) {
  std::vector<std::string> files;
  for (const auto& pattern : patterns) {
    glob_t g{};
    if (::glob(pattern.c_str(), 0, nullptr, &g) == 0) {
      for (size_t i = 0; i < g.gl_pathc; ++i) files.emplace_back(g.gl_pathv[i]);
    }
    ::globfree(&g);
  }
  std::sort(files.begin(), files.end());
  files.erase(std::unique(files.begin(), files.end()), files.end());
  return files;
}

struct SweepJob {
  std::string path;
  std::string value;
  std::string out_dir;
  RunOutcome outcome;
};

int cmd_sweep(const std::vector<std::string>& patterns, const std::string& param, const std::string& out_dir,
              std::optional<std::uint64_t> seed, unsigned jobs) {
  const auto eq = param.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == param.size()) {
    std::cerr << "error: --param expects key=v1,v2,...\n";
    return kExitConfig;
  }
  const std::string key = param.substr(0, eq);
  std::vector<std::string> values;
  std::stringstream list(param.substr(eq + 1));
  for (std::string v; std::getline(list, v, ',');) {
    if (!v.empty()) values.push_back(v);
  }
  const auto files = expand_globs(patterns);
  if (files.empty() || values.empty()) {
    std::cerr << "error: sweep needs at least one scenario file and one parameter value\n";
    return kExitConfig;
  }

  std::vector<SweepJob> work;
  for (const auto& file : files) {
    for (const auto& value : values) {
      const auto stem = std::filesystem::path(file).stem().string();
      work.push_back({file, value, (std::filesystem::path(out_dir) / stem / (key + "=" + value)).string(), {}});
    }
  }

  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < work.size(); i = next++) {
      SweepJob& job = work[i];
      qnd_scenario* scenario = nullptr;
      if (qnd_scenario_load(job.path.c_str(), &scenario) != QND_OK ||
          qnd_scenario_set(scenario, key.c_str(), job.value.c_str()) != QND_OK) {
        job.outcome.exit_code = kExitConfig;
        job.outcome.stderr_text = std::string("error: ") + qnd_last_error() + "\n";
      } else {
        job.outcome = run_loaded(scenario, job.out_dir, seed);
      }
      qnd_scenario_free(scenario);
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(work.size())));
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < count; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  int code = kExitOk;
  for (const auto& job : work) {
    std::cout << "[run] scenario=" << job.path << ' ' << key << '=' << job.value << " out_dir=" << job.out_dir
              << '\n'
              << job.outcome.stdout_text;
    std::cerr << job.outcome.stderr_text;
    if (job.outcome.exit_code == kExitConfig) code = kExitConfig;
    else if (job.outcome.exit_code != kExitOk && code == kExitOk) code = job.outcome.exit_code;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous QND measurement simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "Run one scenario and print the validation footer");
  run->add_option("scenario", scenario_path, "Scenario file")->required();
  run->add_option("--out-dir", out_dir, "Directory for output files")->capture_default_str();
  run->add_option("--seed", seed, "Seed for selective-mode outcome sampling");

  auto* validate = app.add_subcommand("validate", "Parse and validate a scenario file");
  validate->add_option("scenario", scenario_path, "Scenario file")->required();

  std::vector<std::string> patterns;
  std::string param;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* sweep = app.add_subcommand("sweep", "Run scenarios over a list of parameter values");
  sweep->add_option("scenarios", patterns, "Scenario files or glob patterns")->required();
  sweep->add_option("--param", param, "key=v1,v2,... (e.g. kappa=0.1,1,10)")->required();
  sweep->add_option("--out-dir", out_dir, "Root directory for per-run outputs")->capture_default_str();
  sweep->add_option("--seed", seed, "Seed for selective-mode outcome sampling");
  sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  if (*run) return cmd_run(scenario_path, out_dir, seed);
  if (*validate) return cmd_validate(scenario_path);
  return cmd_sweep(patterns, param, out_dir, seed, jobs);
}
