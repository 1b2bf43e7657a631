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

#include "qnd/dipole_scheme.hpp"

#include <cmath>

namespace qnd {

namespace {

constexpr double kSeriesThreshold = 1e-12;

}  // namespace

Pseudofrequencies pseudofrequencies(const SimulationConfig& cfg, int n, int m) {
  const double k2 = cfg.kappa * cfg.kappa / 16.0;
  const double diff = cfg.gamma * (n - m);
  const double sum = cfg.omega_ef + cfg.gamma * (n + m);
  return {n, m, diff * diff - k2, sum * sum - k2};
}

TrigPair trig_pair(double x_sq, double t) {
  if (std::abs(x_sq) < kSeriesThreshold) {
    const double t2 = t * t;
    return {1.0 - 0.5 * x_sq * t2, t - x_sq * t2 * t / 6.0};
  }
  if (x_sq > 0.0) {
    const double x = std::sqrt(x_sq);
    return {std::cos(x * t), std::sin(x * t) / x};
  }
  const double x = std::sqrt(-x_sq);
  return {std::cosh(x * t), std::sinh(x * t) / x};
}

TrigPair damped_trig_pair(double x_sq, double damping, double t) {
  if (x_sq >= 0.0 || std::abs(x_sq) < kSeriesThreshold) {
    const TrigPair p = trig_pair(x_sq, t);
    const double decay = std::exp(-damping * t);
    return {p.c * decay, p.s * decay};
  }
  // cosh(xt) e^{-dt} = (e^{(x-d)t} + e^{-(x+d)t}) / 2, likewise for sinh.
  const double x = std::sqrt(-x_sq);
  const double grow = std::exp((x - damping) * t);
  const double shrink = std::exp(-(x + damping) * t);
  return {0.5 * (grow + shrink), 0.5 * (grow - shrink) / x};
}

JointDensityMatrix evolve_dipole_exact(const JointDensityMatrix& rho0, const SimulationConfig& cfg, double t) {
  if (!(cfg.kappa >= 0.0)) fail(ErrorKind::InvalidArgument, "kappa must be >= 0");
  const FockCutoff cutoff = rho0.cutoff();
  const int dim = cutoff.field_dim();
  const double k = 0.25 * cfg.kappa;
  const Matrix& in = rho0.matrix();
  Matrix out(cutoff.joint_dim(), cutoff.joint_dim());

  const auto F = AtomLevel::f;
  const auto E = AtomLevel::e;

  for (int n = 0; n < dim; ++n) {
    for (int m = 0; m < dim; ++m) {
      const Pseudofrequencies pf = pseudofrequencies(cfg, n, m);
      const Complex phase = std::polar(1.0, -(n - m) * (cfg.omega + cfg.gamma) * t);

      // Atomic-diagonal pair, filled on n <= m and mirrored.
      if (n <= m) {
        const TrigPair u = damped_trig_pair(pf.u_sq, k, t);
        const Complex i_delta(0.0, cfg.gamma * (n - m));
        const Complex ff0 = in(cutoff.index(F, n), cutoff.index(F, m));
        const Complex ee0 = in(cutoff.index(E, n), cutoff.index(E, m));
        const Complex ff = phase * ((u.c + i_delta * u.s) * ff0 + k * u.s * ee0);
        const Complex ee = phase * ((u.c - i_delta * u.s) * ee0 + k * u.s * ff0);
        out(cutoff.index(F, n), cutoff.index(F, m)) = ff;
        out(cutoff.index(F, m), cutoff.index(F, n)) = std::conj(ff);
        out(cutoff.index(E, n), cutoff.index(E, m)) = ee;
        out(cutoff.index(E, m), cutoff.index(E, n)) = std::conj(ee);
      }

      // rho_fn,em couples to rho_en,fm; the e-f block is the adjoint of this one.
      const TrigPair w = damped_trig_pair(pf.w_sq, k, t);
      const Complex i_sum(0.0, cfg.omega_ef + cfg.gamma * (n + m));
      const Complex fe0 = in(cutoff.index(F, n), cutoff.index(E, m));
      const Complex ef0 = in(cutoff.index(E, n), cutoff.index(F, m));
      const Complex fe = phase * ((w.c + i_sum * w.s) * fe0 - k * w.s * ef0);
      out(cutoff.index(F, n), cutoff.index(E, m)) = fe;
      out(cutoff.index(E, m), cutoff.index(F, n)) = std::conj(fe);
    }
  }
  for (int i = 0; i < cutoff.joint_dim(); ++i) out(i, i) = Complex(out(i, i).real(), 0.0);
  return JointDensityMatrix(cutoff, std::move(out));
}

FieldDensityMatrix reduced_field_exact(const AtomDensityMatrix& atom0, const FieldDensityMatrix& field0,
                                       const SimulationConfig& cfg, double t) {
  if (!(cfg.kappa >= 0.0)) fail(ErrorKind::InvalidArgument, "kappa must be >= 0");
  const int dim = field0.max_photons() + 1;
  const double k = 0.25 * cfg.kappa;
  const Complex p_ff = atom0(AtomLevel::f, AtomLevel::f);
  const Complex p_ee = atom0(AtomLevel::e, AtomLevel::e);
  Matrix out(dim, dim);
  for (int n = 0; n < dim; ++n) {
    out(n, n) = field0(n, n);
    for (int m = n + 1; m < dim; ++m) {
      const TrigPair u = damped_trig_pair(pseudofrequencies(cfg, n, m).u_sq, k, t);
      const Complex i_delta(0.0, cfg.gamma * (n - m));
      const Complex phase = std::polar(1.0, -(n - m) * (cfg.omega + cfg.gamma) * t);
      const Complex multiplier =
          phase * ((u.c + (i_delta + k) * u.s) * p_ff + (u.c + (-i_delta + k) * u.s) * p_ee);
      out(n, m) = multiplier * field0(n, m);
      out(m, n) = std::conj(out(n, m));
    }
  }
  return FieldDensityMatrix(std::move(out));
}

FieldDensityMatrix reduced_field_exact(const JointDensityMatrix& rho0, const SimulationConfig& cfg, double t) {
  const AtomDensityMatrix atom = reduce_to_atom(rho0);
  const FieldDensityMatrix field = reduce_to_field(rho0);
  const JointDensityMatrix product = build_joint_state(atom, field);
  const double deviation = (product.matrix() - rho0.matrix()).cwiseAbs().maxCoeff();
  if (deviation > 1e-12) {
    fail(ErrorKind::InvalidArgument,
         "reduced_field_exact requires an uncorrelated initial state (deviation from product " +
             std::to_string(deviation) + ")");
  }
  return reduced_field_exact(atom, field, cfg, t);
}

}  // namespace qnd
