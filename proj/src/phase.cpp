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

#include "qnd/phase.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>

namespace qnd {

double PhaseDistribution::integral() const {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum * 2.0 * std::numbers::pi / static_cast<double>(values.size());
}

PhaseDistribution pegg_barnett(const FieldDensityMatrix& field, int grid_size) {
  if (grid_size < 1) fail(ErrorKind::InvalidArgument, "phase grid needs at least one point");
  const Matrix& rho = field.matrix();
  const auto dim = static_cast<int>(rho.rows());

  // Sums along each sub/super-diagonal: lower[d] = sum_n rho_{n+d,n}, upper[d] = sum_n rho_{n,n+d}.
  std::vector<Complex> lower(static_cast<std::size_t>(dim)), upper(static_cast<std::size_t>(dim));
  for (int d = 0; d < dim; ++d) {
    for (int n = 0; n + d < dim; ++n) {
      lower[static_cast<std::size_t>(d)] += rho(n + d, n);
      upper[static_cast<std::size_t>(d)] += rho(n, n + d);
    }
  }

  const double inv_two_pi = 0.5 / std::numbers::pi;
  PhaseDistribution out;
  out.theta.resize(static_cast<std::size_t>(grid_size));
  out.values.resize(static_cast<std::size_t>(grid_size));
  out.min_value = std::numeric_limits<double>::infinity();
  for (int k = 0; k < grid_size; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / grid_size;
    Complex total = lower[0];
    for (int d = 1; d < dim; ++d) {
      const Complex rot = std::polar(1.0, -d * theta);
      total += lower[static_cast<std::size_t>(d)] * rot + upper[static_cast<std::size_t>(d)] * std::conj(rot);
    }
    const auto idx = static_cast<std::size_t>(k);
    out.theta[idx] = theta;
    out.values[idx] = inv_two_pi * total.real();
    out.max_imaginary = std::max(out.max_imaginary, inv_two_pi * std::abs(total.imag()));
    out.min_value = std::min(out.min_value, out.values[idx]);
  }
  return out;
}

double flatness(const PhaseDistribution& dist) {
  const double level = 0.5 / std::numbers::pi;
  double worst = 0.0;
  for (double v : dist.values) worst = std::max(worst, std::abs(v - level));
  return worst;
}

}  // namespace qnd
