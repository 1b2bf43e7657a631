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

#include "qnd/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qnd {

LindbladProbe make_probe(ProbeKind kind, FockCutoff cutoff) {
  const int dim = cutoff.field_dim();
  std::vector<Eigen::Triplet<Complex>> entries;
  const auto F = AtomLevel::f;
  const auto E = AtomLevel::e;
  if (kind == ProbeKind::AtomDipole) {
    for (int n = 0; n < dim; ++n) {
      entries.emplace_back(cutoff.index(E, n), cutoff.index(F, n), Complex(0.0, -0.5));
      entries.emplace_back(cutoff.index(F, n), cutoff.index(E, n), Complex(0.0, 0.5));
    }
  } else {
    for (int a = 0; a < 2; ++a) {
      const auto level = static_cast<AtomLevel>(a);
      for (int n = 1; n < dim; ++n) {
        const double amp = 0.5 * std::sqrt(static_cast<double>(n));
        entries.emplace_back(cutoff.index(level, n), cutoff.index(level, n - 1), Complex(0.0, -amp));
        entries.emplace_back(cutoff.index(level, n - 1), cutoff.index(level, n), Complex(0.0, amp));
      }
    }
  }
  SparseMatrix a(cutoff.joint_dim(), cutoff.joint_dim());
  a.setFromTriplets(entries.begin(), entries.end());
  a.makeCompressed();
  return {kind, std::move(a)};
}

SparseMatrix joint_hamiltonian(const SimulationConfig& cfg, FockCutoff cutoff) {
  std::vector<Eigen::Triplet<Complex>> entries;
  for (int a = 0; a < 2; ++a) {
    const auto level = static_cast<AtomLevel>(a);
    for (int n = 0; n < cutoff.field_dim(); ++n) {
      const double energy = level_energy(cfg, level, n);
      if (energy != 0.0) entries.emplace_back(cutoff.index(level, n), cutoff.index(level, n), energy);
    }
  }
  SparseMatrix h(cutoff.joint_dim(), cutoff.joint_dim());
  h.setFromTriplets(entries.begin(), entries.end());
  h.makeCompressed();
  return h;
}

namespace {

// out = [op, x], looping over the stored entries of op only.
void sparse_commutator(const SparseMatrix& op, const Matrix& x, Matrix& out) {
  out.setZero(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < op.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(op, j); it; ++it) {
      const Eigen::Index i = it.row();
      const Complex v = it.value();
      out.row(i) += v * x.row(j);
      out.col(j) -= v * x.col(i);
    }
  }
}

}  // namespace

Matrix lindblad_rhs(const Matrix& rho, const SparseMatrix& hamiltonian, const LindbladProbe& probe,
                    double kappa) {
  const Eigen::Index dim = rho.rows();
  if (rho.cols() != dim || hamiltonian.rows() != dim || hamiltonian.cols() != dim ||
      probe.matrix.rows() != dim || probe.matrix.cols() != dim) {
    fail(ErrorKind::InvalidArgument, "lindblad_rhs: operator dimensions do not match the state");
  }
  Matrix out;
  sparse_commutator(hamiltonian, rho, out);
  out *= Complex(0.0, -1.0);
  if (kappa != 0.0) {
    Matrix inner;
    Matrix outer;
    sparse_commutator(probe.matrix, rho, inner);
    sparse_commutator(probe.matrix, inner, outer);
    out.noalias() -= (0.5 * kappa) * outer;
  }
  return out;
}

IntegratorSettings IntegratorSettings::per_period(const SimulationConfig& cfg, int steps_per_period) {
  if (steps_per_period < 1) fail(ErrorKind::InvalidArgument, "steps per period must be >= 1");
  IntegratorSettings s;
  s.step = cfg.measurement_period() / steps_per_period;
  return s;
}

Matrix rk4_step(const Matrix& rho, const SparseMatrix& hamiltonian, const LindbladProbe& probe,
                double kappa, double h) {
  const Matrix k1 = lindblad_rhs(rho, hamiltonian, probe, kappa);
  const Matrix k2 = lindblad_rhs(rho + (0.5 * h) * k1, hamiltonian, probe, kappa);
  const Matrix k3 = lindblad_rhs(rho + (0.5 * h) * k2, hamiltonian, probe, kappa);
  const Matrix k4 = lindblad_rhs(rho + h * k3, hamiltonian, probe, kappa);
  return rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Trajectory integrate(const JointDensityMatrix& rho0, const SimulationConfig& cfg, const LindbladProbe& probe,
                     const IntegratorSettings& settings) {
  cfg.validate();
  const FockCutoff cutoff = rho0.cutoff();
  if (probe.matrix.rows() != cutoff.joint_dim()) {
    fail(ErrorKind::InvalidArgument, "probe and state use different cutoffs");
  }
  const double max_step = cfg.measurement_period() / kMinStepsPerPeriod;
  if (!(settings.step > 0.0) || settings.step > max_step * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "integrator step " << settings.step << " must be in (0, T_m/" << kMinStepsPerPeriod
       << "] = (0, " << max_step << "]";
    fail(ErrorKind::InvalidArgument, os.str());
  }
  if (settings.rehermitize_every < 1) {
    fail(ErrorKind::InvalidArgument, "rehermitize_every must be >= 1");
  }

  const SparseMatrix hamiltonian = joint_hamiltonian(cfg, cutoff);
  const int s = cutoff.max_photons();
  const Eigen::Index top_f = cutoff.index(AtomLevel::f, s);
  const Eigen::Index top_e = cutoff.index(AtomLevel::e, s);

  Trajectory out;
  IntegrationDiagnostics& diag = out.diagnostics;
  Matrix rho = rho0.matrix();

  auto record = [&](double t) {
    const StateDiagnostics d = validate(rho, 0.0);
    diag.max_trace_deviation = std::max(diag.max_trace_deviation, d.trace_deviation);
    diag.max_hermiticity_violation = std::max(diag.max_hermiticity_violation, d.hermiticity_violation);
    out.times.push_back(t);
    out.states.emplace_back(cutoff, rho);
  };
  auto boundary = [&] {
    diag.max_boundary_occupancy =
        std::max({diag.max_boundary_occupancy, rho(top_f, top_f).real(), rho(top_e, top_e).real()});
  };

  boundary();
  record(cfg.t_grid.front());
  double purity = rho.squaredNorm();
  const double trace0 = rho.trace().real();

  for (std::size_t i = 1; i < cfg.t_grid.size(); ++i) {
    const double span = cfg.t_grid[i] - cfg.t_grid[i - 1];
    const auto substeps = static_cast<long>(std::max(1.0, std::ceil(span / settings.step - 1e-9)));
    const double h = span / static_cast<double>(substeps);
    for (long k = 0; k < substeps; ++k) {
      rho = rk4_step(rho, hamiltonian, probe, cfg.kappa, h);
      ++diag.steps;
      if (diag.steps % settings.rehermitize_every == 0) hermitize(rho);

      const double drift = std::abs(rho.trace().real() - trace0);
      if (!(drift <= kTraceAbortThreshold)) {
        std::ostringstream os;
        os << "trace drifted by " << drift << " after " << diag.steps << " steps (step " << h
           << "); reduce the integrator step";
        fail(ErrorKind::Numerical, os.str());
      }
      const double next_purity = rho.squaredNorm();
      diag.max_purity_increase = std::max(diag.max_purity_increase, next_purity - purity);
      purity = next_purity;
      boundary();
    }
    record(cfg.t_grid[i]);
  }
  diag.truncation_flag = diag.max_boundary_occupancy >= kBoundaryOccupancyGuard;
  return out;
}

std::vector<CoherencePoint> coherence_series(const Trajectory& trajectory) {
  std::vector<CoherencePoint> series;
  series.reserve(trajectory.states.size());
  for (std::size_t i = 0; i < trajectory.states.size(); ++i) {
    const Complex ef = reduce_to_atom(trajectory.states[i])(AtomLevel::e, AtomLevel::f);
    series.push_back({trajectory.times[i], ef, std::norm(ef)});
  }
  return series;
}

EnvelopeFit fit_envelope_rate(const std::vector<CoherencePoint>& series, double floor) {
  EnvelopeFit fit;
  if (series.empty()) return fit;

  std::vector<std::size_t> picked;
  for (std::size_t i = 1; i + 1 < series.size(); ++i) {
    const double y = series[i].modulus_sq;
    if (y > series[i - 1].modulus_sq && y >= series[i + 1].modulus_sq && y > floor) picked.push_back(i);
  }
  if (picked.size() < 2) {
    fit.monotone_fallback = true;
    picked.clear();
    for (std::size_t i = 1; i < series.size(); ++i) {
      if (series[i].modulus_sq > floor) picked.push_back(i);
    }
  }
  if (series.front().modulus_sq > floor) picked.insert(picked.begin(), 0);
  fit.points = picked.size();
  if (picked.size() < 2) return fit;

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i : picked) {
    const double x = series[i].t;
    const double y = std::log(series[i].modulus_sq);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const auto count = static_cast<double>(picked.size());
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  fit.rate = -slope;
  fit.intercept = (sy - slope * sx) / count;
  return fit;
}

}  // namespace qnd
