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

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "qnd/dipole_scheme.hpp"
#include "qnd/phase.hpp"
#include "test_support.hpp"

using namespace qnd;

namespace {

constexpr double kFlat = 1.0 / (2.0 * std::numbers::pi);

// Direct double sum, no shortcuts.
double pegg_barnett_oracle(const FieldDensityMatrix& field, double theta) {
  Complex sum = 0.0;
  const int dim = field.max_photons() + 1;
  for (int n = 0; n < dim; ++n) {
    for (int m = 0; m < dim; ++m) sum += field(n, m) * std::polar(1.0, -(n - m) * theta);
  }
  return sum.real() * kFlat;
}

FieldDensityMatrix coherent(double alpha, double phi, int s = 20) {
  return build_coherent_field(CoherentStateSpec::make(alpha, phi), FockCutoff(s)).field;
}

}  // namespace

TEST_CASE("diagonal field is flat") {
  Matrix m = Matrix::Zero(21, 21);
  for (int n = 0; n <= 20; ++n) m(n, n) = 1.0 / 21.0;
  const auto dist = pegg_barnett(FieldDensityMatrix(m));
  for (double v : dist.values) CHECK(std::abs(v - kFlat) < 1e-15);
  CHECK(flatness(dist) < 1e-15);

  const auto vac = pegg_barnett(coherent(0.0, 0.0));
  CHECK(flatness(vac) < 1e-15);
}

TEST_CASE("coherent state against the direct sum") {
  const auto field = coherent(2.0, 0.0);
  const auto dist = pegg_barnett(field, 720);
  REQUIRE(dist.values.size() == 720);
  double worst = 0.0;
  for (std::size_t k = 0; k < dist.values.size(); ++k) {
    worst = std::max(worst, std::abs(dist.values[k] - pegg_barnett_oracle(field, dist.theta[k])));
  }
  CHECK(worst < 1e-13);
  const auto peak = std::max_element(dist.values.begin(), dist.values.end()) - dist.values.begin();
  CHECK(peak == 0);
  CHECK(dist.values[0] == doctest::Approx(pegg_barnett_oracle(field, 0.0)).epsilon(1e-14));
  CHECK(dist.integral() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dist.max_imaginary < 1e-12);
  CHECK(flatness(dist) > 0.0);
}

TEST_CASE("phase rotation shifts the distribution") {
  const int grid = 720;
  const int shift = 90;
  const double phi = 2.0 * std::numbers::pi * shift / grid;
  const auto base = pegg_barnett(coherent(1.5, 0.0), grid);
  const auto rotated = pegg_barnett(coherent(1.5, phi), grid);
  for (int k = 0; k < grid; ++k) {
    CHECK(std::abs(rotated.values[(k + shift) % grid] - base.values[k]) < 1e-13);
  }
}

TEST_CASE("strong dipole measurement flattens the phase") {
  SimulationConfig cfg;
  cfg.gamma = 1.0;
  cfg.kappa = 10.0;
  const auto atom = AtomDensityMatrix::from_pure(AtomStateSpec::equal_superposition());
  const auto field0 = coherent(2.0, 0.0);
  double previous = flatness(pegg_barnett(field0));
  for (int k = 1; k <= 5; ++k) {
    const double f = flatness(pegg_barnett(reduced_field_exact(atom, field0, cfg, k * cfg.measurement_period())));
    CHECK(f < previous);
    previous = f;
  }
}

TEST_CASE("random fields integrate to one") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const FieldDensityMatrix field(test::random_density(21, rng));
    const auto dist = pegg_barnett(field, 360);
    CHECK(dist.integral() == doctest::Approx(1.0).epsilon(1e-12));
  }
}
