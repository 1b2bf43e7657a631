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

#include "qnd/closed_dynamics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qnd {

double SimulationConfig::measurement_period() const {
  if (!(gamma > 0.0)) fail(ErrorKind::InvalidArgument, "measurement period needs gamma > 0");
  return std::numbers::pi / gamma;
}

void SimulationConfig::validate() const {
  if (!std::isfinite(omega) || !std::isfinite(omega_ef)) {
    fail(ErrorKind::InvalidArgument, "omega and omega_ef must be finite");
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) fail(ErrorKind::InvalidArgument, "gamma must be > 0");
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) fail(ErrorKind::InvalidArgument, "kappa must be >= 0");
  if (t_grid.empty() || t_grid.front() != 0.0) {
    fail(ErrorKind::InvalidArgument, "time grid must start at 0");
  }
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) {
      std::ostringstream os;
      os << "time grid must be strictly increasing (index " << i << ")";
      fail(ErrorKind::InvalidArgument, os.str());
    }
  }
}

double level_energy(const SimulationConfig& cfg, AtomLevel a, int n) {
  const double photons = static_cast<double>(n);
  if (a == AtomLevel::f) return cfg.omega * photons;
  return cfg.omega * photons + cfg.omega_ef + 2.0 * cfg.gamma * photons;
}

std::vector<double> periodic_grid(const SimulationConfig& cfg, double n_periods, int samples_per_period) {
  if (samples_per_period < 1 || !(n_periods >= 0.0)) {
    fail(ErrorKind::InvalidArgument, "periodic grid needs samples_per_period >= 1 and n_periods >= 0");
  }
  const double period = cfg.measurement_period();
  const auto count = static_cast<long>(std::llround(n_periods * samples_per_period));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count) + 1);
  for (long k = 0; k <= count; ++k) {
    grid.push_back(period * static_cast<double>(k) / samples_per_period);
  }
  return grid;
}

JointDensityMatrix evolve_closed(const JointDensityMatrix& rho0, const SimulationConfig& cfg, double t) {
  const FockCutoff cutoff = rho0.cutoff();
  const int dim = cutoff.field_dim();
  const int joint = cutoff.joint_dim();

  std::vector<double> energy(static_cast<std::size_t>(joint));
  for (int a = 0; a < 2; ++a) {
    for (int n = 0; n < dim; ++n) {
      energy[static_cast<std::size_t>(a * dim + n)] = level_energy(cfg, static_cast<AtomLevel>(a), n);
    }
  }

  const Matrix& in = rho0.matrix();
  Matrix out(joint, joint);
  for (int i = 0; i < joint; ++i) {
    out(i, i) = in(i, i);
    for (int j = i + 1; j < joint; ++j) {
      const double phase = -(energy[static_cast<std::size_t>(i)] - energy[static_cast<std::size_t>(j)]) * t;
      const Complex v = std::polar(1.0, phase) * in(i, j);
      out(i, j) = v;
      out(j, i) = std::conj(v);
    }
  }
  return JointDensityMatrix(cutoff, std::move(out));
}

Complex coherence_closed_form(double alpha, const SimulationConfig& cfg, double t) {
  const double a2 = alpha * alpha;
  const double x = 2.0 * cfg.gamma * t;
  return 0.5 * std::exp(a2 * (std::cos(x) - 1.0)) *
         std::polar(1.0, -(cfg.omega_ef * t + a2 * std::sin(x)));
}

Complex coherence_partial_sum(double alpha, const SimulationConfig& cfg, double t, FockCutoff cutoff) {
  const double a2 = alpha * alpha;
  double weight = std::exp(-a2);
  Complex sum = 0.0;
  for (int n = 0; n <= cutoff.max_photons(); ++n) {
    if (n > 0) weight *= a2 / n;
    sum += weight * std::polar(1.0, -2.0 * cfg.gamma * n * t);
  }
  return 0.5 * std::polar(1.0, -cfg.omega_ef * t) * sum;
}

double mean_photon_number(const JointDensityMatrix& rho) {
  const int dim = rho.cutoff().field_dim();
  double total = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int n = 0; n < dim; ++n) {
      const auto level = static_cast<AtomLevel>(a);
      total += n * rho(level, n, level, n).real();
    }
  }
  return total;
}

}  // namespace qnd
