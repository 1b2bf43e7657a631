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

#include "qnd/collapse.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace qnd {

namespace {

constexpr double kMinOutcomeProbability = 1e-14;

double pulse_angle(double v, const CollapseConfig& cfg) { return std::numbers::pi * cfg.v0 / (4.0 * v); }

void require_velocity(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorKind::InvalidArgument, "atomic velocity must be > 0");
}

FieldDensityMatrix apply_multiplier(const FieldDensityMatrix& field, const Matrix& multiplier) {
  const Matrix& rho = field.matrix();
  Matrix out(rho.rows(), rho.cols());
  for (Eigen::Index n = 0; n < rho.rows(); ++n) {
    out(n, n) = rho(n, n);
    for (Eigen::Index m = n + 1; m < rho.cols(); ++m) {
      out(n, m) = multiplier(n, m) * rho(n, m);
      out(m, n) = std::conj(out(n, m));
    }
  }
  return FieldDensityMatrix(std::move(out));
}

void check_state(const FieldDensityMatrix& field, int index) {
  const StateDiagnostics d = validate(field, 1e-10);
  if (d.flagged) {
    std::ostringstream os;
    os << "interrogation " << index << " produced an invalid field state (trace deviation "
       << d.trace_deviation << ", hermiticity " << d.hermiticity_violation << ", min diagonal "
       << d.min_diagonal << ")";
    fail(ErrorKind::Numerical, os.str());
  }
}

}  // namespace

VelocityGrid thermal_velocity_grid(double temperature, int points) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    fail(ErrorKind::InvalidArgument, "beam temperature must be > 0");
  }
  if (points < 1) fail(ErrorKind::InvalidArgument, "velocity quadrature needs at least one point");
  const double scale = std::sqrt(temperature);
  const double lo = 0.01 * scale;
  const double hi = 6.0 * scale;
  const double h = (hi - lo) / points;
  VelocityGrid grid;
  double total = 0.0;
  for (int i = 0; i < points; ++i) {
    const double v = lo + h * (i + 0.5);
    const double w = v * v * v * std::exp(-v * v / (2.0 * temperature));
    grid.velocities.push_back(v);
    grid.weights.push_back(w);
    total += w;
  }
  for (double& w : grid.weights) w /= total;
  return grid;
}

VelocityGrid monokinetic_grid(double velocity) {
  require_velocity(velocity);
  return {{velocity}, {1.0}};
}

double mean_velocity(const VelocityGrid& grid) {
  double mean = 0.0;
  for (std::size_t i = 0; i < grid.velocities.size(); ++i) mean += grid.weights[i] * grid.velocities[i];
  return mean;
}

void CollapseConfig::validate() const {
  if (!std::isfinite(epsilon)) fail(ErrorKind::InvalidArgument, "epsilon must be finite");
  if (!(v0 > 0.0) || !std::isfinite(v0)) fail(ErrorKind::InvalidArgument, "v0 must be > 0");
  if (n_interrogations < 0) fail(ErrorKind::InvalidArgument, "interrogation count must be >= 0");
  if (velocity_grid.velocities.empty() || velocity_grid.velocities.size() != velocity_grid.weights.size()) {
    fail(ErrorKind::InvalidArgument, "velocity grid must be non-empty with one weight per velocity");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < velocity_grid.velocities.size(); ++i) {
    require_velocity(velocity_grid.velocities[i]);
    if (!(velocity_grid.weights[i] >= 0.0)) fail(ErrorKind::InvalidArgument, "velocity weights must be >= 0");
    total += velocity_grid.weights[i];
  }
  if (std::abs(total - 1.0) > 1e-12) fail(ErrorKind::InvalidArgument, "velocity weights must sum to 1");
}

bool StarkParameters::dispersive_warning() const { return std::abs(delta) < 10.0 * std::abs(omega_rabi_rms); }

double gamma_from_stark(const StarkParameters& p) {
  if (p.delta == 0.0) fail(ErrorKind::InvalidArgument, "Stark identification needs nonzero detuning");
  return p.omega_rabi_rms * p.omega_rabi_rms / (2.0 * p.delta);
}

double stark_shift_exact(const StarkParameters& p, double photons) {
  if (p.delta == 0.0) fail(ErrorKind::InvalidArgument, "Stark shift needs nonzero detuning");
  const double x = 4.0 * p.omega_rabi_rms * p.omega_rabi_rms * photons / (p.delta * p.delta);
  // sqrt(1 + x) - 1 written to avoid cancellation for small x.
  return 0.5 * p.delta * x / (std::sqrt(1.0 + x) + 1.0);
}

double stark_shift_linear(const StarkParameters& p, double photons) {
  return 2.0 * gamma_from_stark(p) * photons;
}

Complex ramsey_amplitude(AtomLevel outcome, int n, double v, const CollapseConfig& cfg) {
  require_velocity(v);
  const double angle = pulse_angle(v, cfg);
  if (outcome == AtomLevel::f) return {std::sin(angle), 0.0};
  return std::cos(angle) * std::polar(1.0, -cfg.epsilon * n * cfg.v0 / v);
}

double outcome_probability(const FieldDensityMatrix& field, AtomLevel outcome, double v, const CollapseConfig& cfg) {
  double p = 0.0;
  for (int n = 0; n <= field.max_photons(); ++n) {
    p += std::norm(ramsey_amplitude(outcome, n, v, cfg)) * field(n, n).real();
  }
  return p;
}

FieldDensityMatrix selective_update(const FieldDensityMatrix& field, AtomLevel outcome, double v,
                                    const CollapseConfig& cfg) {
  const double p = outcome_probability(field, outcome, v, cfg);
  if (!(p > kMinOutcomeProbability)) {
    std::ostringstream os;
    os << "outcome " << level_label(outcome) << " has probability " << p << " at v=" << v;
    fail(ErrorKind::InvalidArgument, os.str());
  }
  const int dim = field.max_photons() + 1;
  std::vector<Complex> amp(static_cast<std::size_t>(dim));
  for (int n = 0; n < dim; ++n) amp[static_cast<std::size_t>(n)] = ramsey_amplitude(outcome, n, v, cfg);
  Matrix out(dim, dim);
  for (int n = 0; n < dim; ++n) {
    out(n, n) = std::norm(amp[static_cast<std::size_t>(n)]) * field(n, n).real() / p;
    for (int m = n + 1; m < dim; ++m) {
      out(n, m) = amp[static_cast<std::size_t>(n)] * std::conj(amp[static_cast<std::size_t>(m)]) * field(n, m) / p;
      out(m, n) = std::conj(out(n, m));
    }
  }
  return FieldDensityMatrix(std::move(out));
}

Complex semiselective_multiplier(int n, int m, double v, const CollapseConfig& cfg) {
  require_velocity(v);
  if (n == m) return {1.0, 0.0};
  const double angle = pulse_angle(v, cfg);
  const double s = std::sin(angle);
  const double c = std::cos(angle);
  return s * s + c * c * std::polar(1.0, -cfg.epsilon * (n - m) * cfg.v0 / v);
}

FieldDensityMatrix semiselective_update(const FieldDensityMatrix& field, double v, const CollapseConfig& cfg) {
  const int dim = field.max_photons() + 1;
  Matrix multiplier(dim, dim);
  for (int n = 0; n < dim; ++n) {
    for (int m = 0; m < dim; ++m) multiplier(n, m) = semiselective_multiplier(n, m, v, cfg);
  }
  return apply_multiplier(field, multiplier);
}

Matrix nonselective_multiplier_matrix(const CollapseConfig& cfg, int dim) {
  Matrix multiplier = Matrix::Zero(dim, dim);
  const VelocityGrid& grid = cfg.velocity_grid;
  for (std::size_t i = 0; i < grid.velocities.size(); ++i) {
    for (int n = 0; n < dim; ++n) {
      for (int m = 0; m < dim; ++m) {
        multiplier(n, m) += grid.weights[i] * semiselective_multiplier(n, m, grid.velocities[i], cfg);
      }
    }
  }
  for (int n = 0; n < dim; ++n) multiplier(n, n) = 1.0;
  return multiplier;
}

FieldDensityMatrix nonselective_update(const FieldDensityMatrix& field, const CollapseConfig& cfg) {
  return apply_multiplier(field, nonselective_multiplier_matrix(cfg, field.max_photons() + 1));
}

InterrogationSequence run_interrogation_sequence(const FieldDensityMatrix& field0, const CollapseConfig& cfg,
                                                 CollapseMode mode, std::uint64_t seed, int phase_grid) {
  cfg.validate();
  const int dim = field0.max_photons() + 1;
  const double v = cfg.velocity_grid.velocities.front();

  Matrix multiplier;
  if (mode == CollapseMode::Nonselective) {
    multiplier = nonselective_multiplier_matrix(cfg, dim);
  } else if (mode == CollapseMode::Semiselective) {
    multiplier.resize(dim, dim);
    for (int n = 0; n < dim; ++n) {
      for (int m = 0; m < dim; ++m) multiplier(n, m) = semiselective_multiplier(n, m, v, cfg);
    }
  }

  std::mt19937_64 rng(seed);
  InterrogationSequence seq;
  seq.states.push_back(field0);
  seq.snapshots.push_back(pegg_barnett(field0, phase_grid));
  for (int k = 1; k <= cfg.n_interrogations; ++k) {
    const FieldDensityMatrix& prev = seq.states.back();
    if (mode == CollapseMode::Selective) {
      const double p_e = outcome_probability(prev, AtomLevel::e, v, cfg);
      // 53-bit uniform in [0, 1).
      const double draw = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      const AtomLevel outcome = draw < p_e ? AtomLevel::e : AtomLevel::f;
      const double p = outcome == AtomLevel::e ? p_e : outcome_probability(prev, AtomLevel::f, v, cfg);
      seq.outcomes.push_back({k, outcome, p, v});
      seq.states.push_back(selective_update(prev, outcome, v, cfg));
    } else {
      seq.states.push_back(apply_multiplier(prev, multiplier));
    }
    check_state(seq.states.back(), k);
    seq.snapshots.push_back(pegg_barnett(seq.states.back(), phase_grid));
  }
  return seq;
}

}  // namespace qnd
