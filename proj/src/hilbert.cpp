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

#include "qnd/hilbert.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qnd {

FockCutoff::FockCutoff(int max_photons) : s_(max_photons) {
  if (max_photons < 1) {
    fail(ErrorKind::InvalidArgument,
         "Fock cutoff must be >= 1, got " + std::to_string(max_photons));
  }
}

CoherentStateSpec CoherentStateSpec::make(double alpha, double phi) {
  if (!std::isfinite(alpha) || alpha < 0.0) {
    fail(ErrorKind::InvalidArgument, "coherent amplitude alpha must be finite and >= 0");
  }
  if (!std::isfinite(phi)) {
    fail(ErrorKind::InvalidArgument, "coherent phase phi must be finite");
  }
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double folded = std::fmod(phi, two_pi);
  if (folded < 0.0) folded += two_pi;
  if (folded >= two_pi) folded = 0.0;
  return {alpha, folded};
}

AtomStateSpec AtomStateSpec::make(Complex amp_e, Complex amp_f) {
  const double norm = std::norm(amp_e) + std::norm(amp_f);
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "atomic amplitudes must satisfy |amp_e|^2 + |amp_f|^2 = 1, got " << norm;
    fail(ErrorKind::InvalidArgument, os.str());
  }
  return {amp_e, amp_f};
}

AtomStateSpec AtomStateSpec::equal_superposition() {
  const double h = std::numbers::sqrt2 / 2.0;
  return {Complex(h, 0.0), Complex(h, 0.0)};
}

AtomDensityMatrix AtomDensityMatrix::from_pure(const AtomStateSpec& spec) {
  AtomMatrix m;
  const Complex amp[2] = {spec.amp_f, spec.amp_e};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) m(a, b) = amp[a] * std::conj(amp[b]);
  }
  return AtomDensityMatrix(m);
}

FieldDensityMatrix::FieldDensityMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() < 2) {
    fail(ErrorKind::InvalidArgument, "field density matrix must be square with dimension >= 2");
  }
}

JointDensityMatrix::JointDensityMatrix(FockCutoff cutoff, Matrix m)
    : cutoff_(cutoff), m_(std::move(m)) {
  if (m_.rows() != cutoff_.joint_dim() || m_.cols() != cutoff_.joint_dim()) {
    std::ostringstream os;
    os << "joint density matrix must be " << cutoff_.joint_dim() << "x" << cutoff_.joint_dim()
       << ", got " << m_.rows() << "x" << m_.cols();
    fail(ErrorKind::InvalidArgument, os.str());
  }
}

CoherentField build_coherent_field(const CoherentStateSpec& spec, FockCutoff cutoff) {
  const CoherentStateSpec checked = CoherentStateSpec::make(spec.alpha, spec.phi);
  const int dim = cutoff.field_dim();
  const Complex z = std::polar(checked.alpha, checked.phi);

  Eigen::VectorXcd c(dim);
  c(0) = Complex(std::exp(-0.5 * checked.alpha * checked.alpha), 0.0);
  for (int n = 1; n < dim; ++n) c(n) = c(n - 1) * z / std::sqrt(static_cast<double>(n));

  const double kept = c.squaredNorm();
  const double deficit = std::max(0.0, 1.0 - kept);
  if (deficit > kMaxTruncationDeficit) {
    std::ostringstream os;
    os << "cutoff too small: s=" << cutoff.max_photons() << " discards " << deficit
       << " of the photon-number distribution for alpha=" << checked.alpha;
    fail(ErrorKind::Config, os.str());
  }

  Matrix rho(dim, dim);
  for (int n = 0; n < dim; ++n) {
    for (int m = 0; m < dim; ++m) rho(n, m) = c(n) * std::conj(c(m)) / kept;
  }
  return {FieldDensityMatrix(std::move(rho)), deficit};
}

JointDensityMatrix build_joint_state(const AtomDensityMatrix& atom, const FieldDensityMatrix& field) {
  const FockCutoff cutoff = field.cutoff();
  const int dim = cutoff.field_dim();
  Matrix rho(cutoff.joint_dim(), cutoff.joint_dim());
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      rho.block(a * dim, b * dim, dim, dim) = atom.matrix()(a, b) * field.matrix();
    }
  }
  return JointDensityMatrix(cutoff, std::move(rho));
}

JointDensityMatrix build_joint_state(const AtomStateSpec& atom, const FieldDensityMatrix& field) {
  return build_joint_state(AtomDensityMatrix::from_pure(AtomStateSpec::make(atom.amp_e, atom.amp_f)),
                           field);
}

FieldDensityMatrix reduce_to_field(const JointDensityMatrix& rho) {
  const int dim = rho.cutoff().field_dim();
  const Matrix& m = rho.matrix();
  return FieldDensityMatrix(m.block(0, 0, dim, dim) + m.block(dim, dim, dim, dim));
}

AtomDensityMatrix reduce_to_atom(const JointDensityMatrix& rho) {
  const int dim = rho.cutoff().field_dim();
  const Matrix& m = rho.matrix();
  AtomMatrix out;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) out(a, b) = m.block(a * dim, b * dim, dim, dim).trace();
  }
  return AtomDensityMatrix(out);
}

StateDiagnostics validate(const Matrix& rho, double tol) {
  StateDiagnostics d;
  if (rho.rows() != rho.cols() || rho.rows() == 0) {
    d.flagged = true;
    d.trace_deviation = std::numeric_limits<double>::infinity();
    return d;
  }
  d.trace_deviation = std::abs(rho.trace().real() - 1.0);
  d.min_diagonal = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    d.min_diagonal = std::min(d.min_diagonal, rho(i, i).real());
    for (Eigen::Index j = i; j < rho.cols(); ++j) {
      d.hermiticity_violation =
          std::max(d.hermiticity_violation, std::abs(rho(i, j) - std::conj(rho(j, i))));
    }
  }
  d.flagged = !(d.trace_deviation <= tol) || !(d.hermiticity_violation <= tol) ||
              !(d.min_diagonal >= -tol);
  return d;
}

void hermitize(Matrix& m) {
  const Eigen::Index dim = m.rows();
  for (Eigen::Index i = 0; i < dim; ++i) {
    m(i, i) = Complex(m(i, i).real(), 0.0);
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      const Complex avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m(i, j) = avg;
      m(j, i) = std::conj(avg);
    }
  }
}

}  // namespace qnd
