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

#include <vector>

#include "qnd/hilbert.hpp"

namespace qnd {

/// Physical parameters of a run, hbar = 1, angular frequencies.
///
/// H = omega a^dag a + omega_ef |e><e| + 2 gamma a^dag a |e><e|; the
/// measurement term is -(kappa/2)[A, [A, rho]] for the chosen probe A.
struct SimulationConfig {
  double omega = 0.0;
  double omega_ef = 0.0;
  double gamma = 1.0;
  double kappa = 0.0;
  std::vector<double> t_grid;

  /// T_m = pi / gamma. Requires gamma > 0.
  double measurement_period() const;

  /// Checks gamma > 0, kappa >= 0 and that t_grid starts at 0 and increases.
  void validate() const;
};

/// Unperturbed energy of |a n>.
double level_energy(const SimulationConfig& cfg, AtomLevel a, int n);

/// n_periods * T_m sampled with samples_per_period points per period (end included).
std::vector<double> periodic_grid(const SimulationConfig& cfg, double n_periods, int samples_per_period);

/// kappa = 0 evolution: every element rotates by exp(-i (E_an - E_bm) t).
JointDensityMatrix evolve_closed(const JointDensityMatrix& rho0, const SimulationConfig& cfg, double t);

/// Atomic coherence <e|rho_atom(t)|f> for an equal superposition with real
/// amplitudes and a coherent field of amplitude alpha, closed product form:
/// 1/2 exp(alpha^2 (cos 2 gamma t - 1)) exp(-i (omega_ef t + alpha^2 sin 2 gamma t)).
Complex coherence_closed_form(double alpha, const SimulationConfig& cfg, double t);

/// Same quantity as the truncated sum over n <= s with unnormalized Poisson weights.
Complex coherence_partial_sum(double alpha, const SimulationConfig& cfg, double t, FockCutoff cutoff);

/// <a^dag a> of the joint state.
double mean_photon_number(const JointDensityMatrix& rho);

}  // namespace qnd
