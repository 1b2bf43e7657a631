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

#pragma once

// Scenario files: flat `key = value` lines, `#` starts a comment.
//
//   scheme                      closed | dipole | momentum | collapse
//   physics.omega               cavity angular frequency [1/time], default 0
//   physics.omega_ef            atomic angular frequency [1/time], default 0
//   physics.gamma               QND coupling [1/time]
//   physics.kappa               measurement coupling [1/time]
//   state.alpha, state.phi      coherent field amplitude and phase [rad]
//   state.cutoff                highest photon number kept, default 20
//   state.atom.{e,f}.{re,im}    atomic amplitudes (im defaults to 0)
//   time.end_periods | time.end           run length in T_m or absolute time
//   time.samples_per_period | time.samples  grid density
//   integrator.steps_per_period (default 2000), integrator.rehermitize_every (100)
//   collapse.mode               selective | semiselective | nonselective
//   collapse.epsilon, collapse.v0, collapse.velocity_ratio, collapse.temperature,
//   collapse.interrogations, collapse.seed, collapse.quadrature_points
//   outputs.timeseries, outputs.phase_snapshots, outputs.phase_stride,
//   outputs.phase_grid, outputs.density_dump, outputs.outcome_log

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qnd/collapse.hpp"
#include "qnd/lindblad.hpp"

namespace qnd {

enum class Scheme { Closed, Dipole, Momentum, Collapse };

const char* scheme_name(Scheme s);

struct ScenarioOutputs {
  std::optional<std::string> timeseries;
  std::optional<std::string> phase_snapshots;  // directory for phase_t{index}.csv
  int phase_stride = 1;
  int phase_grid = kDefaultPhaseGrid;
  std::optional<std::string> density_dump;
  std::optional<std::string> outcome_log;
};

struct ScenarioFile {
  Scheme scheme = Scheme::Closed;
  SimulationConfig physics;
  CoherentStateSpec field;
  AtomStateSpec atom;
  int cutoff = kDefaultCutoff;
  int steps_per_period = 2000;
  int rehermitize_every = 100;
  CollapseMode collapse_mode = CollapseMode::Nonselective;
  CollapseConfig collapse;
  std::uint64_t seed = 0;
  ScenarioOutputs outputs;

  /// Raw key/value pairs, kept so parameters can be overridden and re-validated.
  std::map<std::string, std::string> entries;
};

/// Parses and validates; throws Config listing every violation found.
ScenarioFile parse_scenario_text(const std::string& text);
ScenarioFile parse_scenario(const std::filesystem::path& path);

/// Validates the raw entries into a typed scenario.
ScenarioFile build_scenario(const std::map<std::string, std::string>& entries);

/// Overrides one key and re-validates. A bare name such as `kappa` resolves
/// to the unique full key ending in `.kappa`.
void set_scenario_param(ScenarioFile& scenario, const std::string& key, const std::string& value);

struct RunReport {
  std::vector<std::pair<std::string, std::string>> footer;
  std::vector<std::string> violations;
  std::vector<std::string> warnings;

  bool ok() const { return violations.empty(); }
  /// `[footer]` followed by one key=value per line.
  std::string footer_text() const;
};

/// Runs the scenario and writes every declared output below out_dir.
RunReport run_scenario(const ScenarioFile& scenario, const std::filesystem::path& out_dir,
                       std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace qnd
