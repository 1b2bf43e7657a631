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

// Fixed-step RK4 integration of
//   d rho/dt = -i [H, rho] - (kappa/2) [A, [A, rho]]
// on the truncated joint space, for either measurement probe.

#include <Eigen/Sparse>

#include <cstddef>
#include <vector>

#include "qnd/closed_dynamics.hpp"

namespace qnd {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

enum class ProbeKind {
  AtomDipole,      // (sigma_+ - sigma_-)/2i (x) 1_field
  PhotonMomentum,  // 1_atom (x) (a^dag - a)/2i
};

struct LindbladProbe {
  ProbeKind kind;
  SparseMatrix matrix;
};

/// Probe operator on the joint space. The ladder operators are truncated
/// matrices, so creation out of |s> is dropped.
LindbladProbe make_probe(ProbeKind kind, FockCutoff cutoff);

/// Diagonal joint Hamiltonian, same energies as evolve_closed.
SparseMatrix joint_hamiltonian(const SimulationConfig& cfg, FockCutoff cutoff);

/// Right-hand side of the master equation. Throws InvalidArgument on
/// dimension mismatch.
Matrix lindblad_rhs(const Matrix& rho, const SparseMatrix& hamiltonian, const LindbladProbe& probe,
                    double kappa);

struct IntegratorSettings {
  double step = 0.0;
  int rehermitize_every = 100;

  /// step = T_m / steps_per_period.
  static IntegratorSettings per_period(const SimulationConfig& cfg, int steps_per_period);
};

inline constexpr int kMinStepsPerPeriod = 200;
inline constexpr double kTraceAbortThreshold = 1e-6;
inline constexpr double kBoundaryOccupancyGuard = 1e-6;

struct IntegrationDiagnostics {
  long steps = 0;
  double max_trace_deviation = 0.0;
  double max_hermiticity_violation = 0.0;
  /// Largest single-step increase of Tr(rho^2); <= 0 for a proper dissipator.
  double max_purity_increase = 0.0;
  /// Largest rho_{as,as} seen; above kBoundaryOccupancyGuard the run is flagged.
  double max_boundary_occupancy = 0.0;
  bool truncation_flag = false;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<JointDensityMatrix> states;
  IntegrationDiagnostics diagnostics;
};

/// One classical RK4 step of size h.
Matrix rk4_step(const Matrix& rho, const SparseMatrix& hamiltonian, const LindbladProbe& probe,
                double kappa, double h);

/// Integrates rho0 and records a snapshot at every cfg.t_grid time. Each
/// grid interval is split into ceil(dt / step) equal sub-steps. Throws
/// InvalidArgument when step > T_m/200 and Numerical when the trace drifts
/// by more than 1e-6.
Trajectory integrate(const JointDensityMatrix& rho0, const SimulationConfig& cfg, const LindbladProbe& probe,
                     const IntegratorSettings& settings);

struct CoherencePoint {
  double t;
  Complex rho_ef;
  double modulus_sq;
};

std::vector<CoherencePoint> coherence_series(const Trajectory& trajectory);

struct EnvelopeFit {
  double rate = 0.0;       // decay rate of |rho_ef|^2
  double intercept = 0.0;  // log |rho_ef(0)|^2 of the fitted line
  std::size_t points = 0;
  /// True when fewer than two interior maxima exist and every sample above
  /// the floor was fitted instead.
  bool monotone_fallback = false;
};

inline constexpr double kEnvelopeFloor = 1e-12;

/// Log-linear least-squares fit through t = 0 and the interior local maxima
/// of |rho_ef|^2 that lie above `floor`.
EnvelopeFit fit_envelope_rate(const std::vector<CoherencePoint>& series, double floor = kEnvelopeFloor);

}  // namespace qnd
