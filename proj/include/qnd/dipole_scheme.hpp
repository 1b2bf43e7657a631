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

// Exact propagator for continuous measurement of the atomic dipole
// quadrature A = (sigma_+ - sigma_-)/2i. Each photon pair (n, m) evolves as
// two independent 2x2 linear systems: (rho_fn,fm, rho_en,em) and
// (rho_fn,em, rho_en,fm).

#include "qnd/closed_dynamics.hpp"

namespace qnd {

/// Squared pseudofrequencies of the (n, m) pair. Negative values select the
/// overdamped branch; the sign is kept explicit instead of taking a complex root.
struct Pseudofrequencies {
  int n = 0;
  int m = 0;
  double u_sq = 0.0;  // gamma^2 (n-m)^2 - kappa^2/16
  double w_sq = 0.0;  // (omega_ef + gamma (n+m))^2 - kappa^2/16
};

Pseudofrequencies pseudofrequencies(const SimulationConfig& cfg, int n, int m);

struct TrigPair {
  double c = 1.0;  // cos(x t), cosh(|x| t) or 1
  double s = 0.0;  // sin(x t)/x, sinh(|x| t)/|x| or t
};

/// Branch-aware (cos ut, sin(ut)/u) for u^2 = x_sq. Uses a series in x_sq
/// for |x_sq| < 1e-12.
TrigPair trig_pair(double x_sq, double t);

/// exp(-damping t) * trig_pair(x_sq, t), evaluated without overflow on the
/// overdamped branch.
TrigPair damped_trig_pair(double x_sq, double damping, double t);

JointDensityMatrix evolve_dipole_exact(const JointDensityMatrix& rho0, const SimulationConfig& cfg, double t);

/// Reduced field matrix at time t for an initially uncorrelated state.
FieldDensityMatrix reduced_field_exact(const AtomDensityMatrix& atom0, const FieldDensityMatrix& field0,
                                       const SimulationConfig& cfg, double t);

/// Same, starting from a joint state. Throws InvalidArgument when rho0 is
/// not a product of its marginals (max entry deviation > 1e-12).
FieldDensityMatrix reduced_field_exact(const JointDensityMatrix& rho0, const SimulationConfig& cfg, double t);

}  // namespace qnd
