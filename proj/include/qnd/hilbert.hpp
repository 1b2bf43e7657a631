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

// States on the truncated atom (x) Fock product space.
//
// Joint indexing: flat = atom_index * (s + 1) + n with f -> 0 and e -> 1.
// The zero of energy sits on |f>, so H_atom = omega_ef |e><e|.

#include <Eigen/Dense>

#include <complex>
#include <string>

#include "qnd/error.hpp"

namespace qnd {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using AtomMatrix = Eigen::Matrix2cd;

inline constexpr int kDefaultCutoff = 20;

enum class AtomLevel : int { f = 0, e = 1 };

inline char level_label(AtomLevel a) { return a == AtomLevel::e ? 'e' : 'f'; }

/// Highest retained photon number s; the field basis is |0>..|s>.
class FockCutoff {
 public:
  explicit FockCutoff(int max_photons = kDefaultCutoff);

  int max_photons() const noexcept { return s_; }
  int field_dim() const noexcept { return s_ + 1; }
  int joint_dim() const noexcept { return 2 * (s_ + 1); }

  Eigen::Index index(AtomLevel a, int n) const noexcept {
    return static_cast<Eigen::Index>(static_cast<int>(a) * (s_ + 1) + n);
  }

  friend bool operator==(FockCutoff, FockCutoff) = default;

 private:
  int s_;
};

/// Coherent field |alpha e^{i phi}>; mean photon number alpha^2.
struct CoherentStateSpec {
  double alpha = 0.0;
  double phi = 0.0;

  /// Validates alpha >= 0 and folds phi into [0, 2pi).
  static CoherentStateSpec make(double alpha, double phi);
};

/// Pure atomic state amp_e |e> + amp_f |f>.
struct AtomStateSpec {
  Complex amp_e{0.0, 0.0};
  Complex amp_f{1.0, 0.0};

  static AtomStateSpec make(Complex amp_e, Complex amp_f);
  static AtomStateSpec equal_superposition();
};

/// 2x2 atomic density matrix, indexed by AtomLevel.
class AtomDensityMatrix {
 public:
  AtomDensityMatrix() : m_(AtomMatrix::Zero()) {}
  explicit AtomDensityMatrix(const AtomMatrix& m) : m_(m) {}

  static AtomDensityMatrix from_pure(const AtomStateSpec& spec);

  Complex operator()(AtomLevel a, AtomLevel b) const {
    return m_(static_cast<int>(a), static_cast<int>(b));
  }
  const AtomMatrix& matrix() const noexcept { return m_; }

 private:
  AtomMatrix m_;
};

/// (s+1)x(s+1) density matrix of the cavity mode.
class FieldDensityMatrix {
 public:
  explicit FieldDensityMatrix(Matrix m);

  Complex operator()(int n, int m) const { return m_(n, m); }
  const Matrix& matrix() const noexcept { return m_; }
  int max_photons() const noexcept { return static_cast<int>(m_.rows()) - 1; }
  FockCutoff cutoff() const { return FockCutoff(max_photons()); }
  double trace() const { return m_.trace().real(); }

 private:
  Matrix m_;
};

/// Density matrix rho_{an,bm} on the joint space.
class JointDensityMatrix {
 public:
  JointDensityMatrix(FockCutoff cutoff, Matrix m);

  Complex operator()(AtomLevel a, int n, AtomLevel b, int m) const {
    return m_(cutoff_.index(a, n), cutoff_.index(b, m));
  }
  const Matrix& matrix() const noexcept { return m_; }
  FockCutoff cutoff() const noexcept { return cutoff_; }
  double trace() const { return m_.trace().real(); }
  double purity() const { return m_.squaredNorm(); }

 private:
  FockCutoff cutoff_;
  Matrix m_;
};

struct CoherentField {
  FieldDensityMatrix field;
  /// 1 - sum_{n<=s} Poisson(n; alpha^2), before renormalization.
  double truncation_deficit;
};

inline constexpr double kMaxTruncationDeficit = 0.05;

/// Truncated, renormalized coherent state. Throws Config if the cutoff
/// discards more than 5% of the Poisson weight.
CoherentField build_coherent_field(const CoherentStateSpec& spec, FockCutoff cutoff);

JointDensityMatrix build_joint_state(const AtomDensityMatrix& atom, const FieldDensityMatrix& field);
JointDensityMatrix build_joint_state(const AtomStateSpec& atom, const FieldDensityMatrix& field);

FieldDensityMatrix reduce_to_field(const JointDensityMatrix& rho);
AtomDensityMatrix reduce_to_atom(const JointDensityMatrix& rho);

struct StateDiagnostics {
  double trace_deviation = 0.0;        // |Tr rho - 1|
  double hermiticity_violation = 0.0;  // max |rho_ij - conj(rho_ji)|, includes Im(diag)
  double min_diagonal = 0.0;           // min Re(rho_ii)
  bool flagged = false;
};

StateDiagnostics validate(const Matrix& rho, double tol);
inline StateDiagnostics validate(const JointDensityMatrix& rho, double tol) {
  return validate(rho.matrix(), tol);
}
inline StateDiagnostics validate(const FieldDensityMatrix& rho, double tol) {
  return validate(rho.matrix(), tol);
}

/// Replaces m by (m + m^dagger)/2.
void hermitize(Matrix& m);

}  // namespace qnd
