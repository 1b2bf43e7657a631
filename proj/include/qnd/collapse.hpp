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

// Discrete interrogation model: a beam of probe atoms crosses the cavity and
// each one either gets read (selective update) or not (velocity- and
// outcome-averaged updates). The Ramsey amplitudes used here are
//   b_f(n, v) = sin(pi v0 / 4v),  b_e(n, v) = cos(pi v0 / 4v) exp(-i eps n v0 / v),
// a model choice whose outcome sum reproduces the averaged multiplier
//   sin^2(pi v0/4v) + cos^2(pi v0/4v) exp(-i eps (n-m) v0/v).

#include <cstdint>
#include <vector>

#include "qnd/phase.hpp"

namespace qnd {

struct VelocityGrid {
  std::vector<double> velocities;
  std::vector<double> weights;
};

inline constexpr int kThermalQuadraturePoints = 64;

/// P(v) ~ v^3 exp(-v^2 / 2T), mid-point rule on [0.01 sqrt(T), 6 sqrt(T)],
/// weights normalized to 1.
VelocityGrid thermal_velocity_grid(double temperature, int points = kThermalQuadraturePoints);

/// Single-velocity grid with unit weight.
VelocityGrid monokinetic_grid(double velocity);

double mean_velocity(const VelocityGrid& grid);

struct CollapseConfig {
  double epsilon = 0.0;  // phase shift per photon
  double v0 = 1.0;       // pi/2-pulse velocity
  VelocityGrid velocity_grid;
  double temperature = 0.0;  // informational for monokinetic grids
  int n_interrogations = 0;

  /// Weights >= 0 summing to 1 within 1e-12, velocities > 0, v0 > 0.
  void validate() const;
};

struct StarkParameters {
  double omega_rabi_rms = 0.0;  // sqrt(<Omega^2(r)>)
  double delta = 0.0;           // detuning omega - |omega_ie|

  /// |delta| < 10 Omega_rms: the dispersive approximation is doubtful.
  bool dispersive_warning() const;
};

/// gamma = <Omega^2> / (2 delta). Throws InvalidArgument for delta == 0.
double gamma_from_stark(const StarkParameters& p);

/// delta/2 (sqrt(1 + 4 Omega^2 N / delta^2) - 1).
double stark_shift_exact(const StarkParameters& p, double photons);

/// Omega^2 N / delta = 2 gamma N.
double stark_shift_linear(const StarkParameters& p, double photons);

Complex ramsey_amplitude(AtomLevel outcome, int n, double v, const CollapseConfig& cfg);

/// sum_n |b_a(n, v)|^2 rho_nn.
double outcome_probability(const FieldDensityMatrix& field, AtomLevel outcome, double v, const CollapseConfig& cfg);

/// Conditioned update after reading `outcome`. Throws InvalidArgument when
/// the outcome probability is below 1e-14.
FieldDensityMatrix selective_update(const FieldDensityMatrix& field, AtomLevel outcome, double v,
                                    const CollapseConfig& cfg);

/// Outcome-averaged multiplier; exactly 1 on the diagonal.
Complex semiselective_multiplier(int n, int m, double v, const CollapseConfig& cfg);
FieldDensityMatrix semiselective_update(const FieldDensityMatrix& field, double v, const CollapseConfig& cfg);

/// Velocity-averaged multiplier matrix over cfg.velocity_grid.
Matrix nonselective_multiplier_matrix(const CollapseConfig& cfg, int dim);
FieldDensityMatrix nonselective_update(const FieldDensityMatrix& field, const CollapseConfig& cfg);

enum class CollapseMode { Selective, Semiselective, Nonselective };

struct InterrogationRecord {
  int index = 0;
  AtomLevel outcome = AtomLevel::f;
  double probability = 0.0;
  double velocity = 0.0;
};

struct InterrogationSequence {
  std::vector<FieldDensityMatrix> states;       // states[0] is the input
  std::vector<PhaseDistribution> snapshots;     // one per state
  std::vector<InterrogationRecord> outcomes;    // selective mode only
};

/// Runs cfg.n_interrogations updates. Selective and semiselective modes use
/// the first velocity of cfg.velocity_grid; selective outcomes are drawn from
/// a mt19937_64 seeded with `seed`. Every state is validated (trace and
/// Hermiticity within 1e-10) or a Numerical error is thrown.
InterrogationSequence run_interrogation_sequence(const FieldDensityMatrix& field0, const CollapseConfig& cfg,
                                                 CollapseMode mode, std::uint64_t seed = 0,
                                                 int phase_grid = kDefaultPhaseGrid);

}  // namespace qnd
