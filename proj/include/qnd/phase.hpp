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

inline constexpr int kDefaultPhaseGrid = 720;

/// Pegg-Barnett density sampled on theta_k = 2 pi k / G.
struct PhaseDistribution {
  std::vector<double> theta;
  std::vector<double> values;
  /// Largest imaginary residual of the Hermitian sum over the grid.
  double max_imaginary = 0.0;
  /// Most negative sample (truncation can produce tiny negatives; not clipped).
  double min_value = 0.0;

  /// Periodic trapezoid rule over [0, 2 pi).
  double integral() const;
};

/// Pi(theta) = (1/2pi) sum_{n,m<=s} rho_nm exp(-i (n-m) theta).
PhaseDistribution pegg_barnett(const FieldDensityMatrix& field, int grid_size = kDefaultPhaseGrid);

/// max_k |Pi(theta_k) - 1/2pi|.
double flatness(const PhaseDistribution& dist);

}  // namespace qnd
