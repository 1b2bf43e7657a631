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

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "qnd/collapse.hpp"
#include "qnd/error.hpp"
#include "qnd/phase.hpp"
#include "test_support.hpp"

using namespace qnd;

namespace {

FieldDensityMatrix coherent(double alpha, int s = 20) {
  return build_coherent_field(CoherentStateSpec::make(alpha, 0.0), FockCutoff(s)).field;
}

CollapseConfig monokinetic(double epsilon, double v0, double v) {
  CollapseConfig cfg;
  cfg.epsilon = epsilon;
  cfg.v0 = v0;
  cfg.velocity_grid = monokinetic_grid(v);
  return cfg;
}

}  // namespace

TEST_CASE("Stark shifts") {
  CHECK(gamma_from_stark({0.0, 3.0}) == 0.0);
  CHECK(gamma_from_stark({1.0, 2.0}) == doctest::Approx(0.25));
  CHECK(StarkParameters{1.0, 5.0}.dispersive_warning());
  CHECK_FALSE(StarkParameters{1.0, 50.0}.dispersive_warning());
  CHECK_THROWS_AS(gamma_from_stark({1.0, 0.0}), Error);

  // First-order expansion: exact/linear = 1 - Omega^2 N / delta^2 + O(Omega^4).
  for (double omega : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const StarkParameters p{omega, 1.0};
    const double n = 3.0;
    const double ratio = stark_shift_exact(p, n) / stark_shift_linear(p, n);
    CAPTURE(omega);
    CHECK(std::abs(ratio - (1.0 - omega * omega * n)) < 3.0 * std::pow(omega * omega * n, 2));
  }
  CHECK(stark_shift_exact({2.0, 3.0}, 5.0) == doctest::Approx(1.5 * (std::sqrt(1.0 + 80.0 / 9.0) - 1.0)));
}

TEST_CASE("velocity grids") {
  const auto grid = thermal_velocity_grid(2.0);
  CHECK(grid.velocities.size() == 64);
  double total = 0.0;
  for (double w : grid.weights) total += w;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  // <v> for P(v) ~ v^3 exp(-v^2/2T): sqrt(2T) Gamma(5/2) / Gamma(2).
  const double exact = std::sqrt(4.0) * std::tgamma(2.5);
  CHECK(mean_velocity(grid) == doctest::Approx(exact).epsilon(1e-3));
  CHECK(mean_velocity(thermal_velocity_grid(10.0)) / mean_velocity(thermal_velocity_grid(0.1)) ==
        doctest::Approx(10.0).epsilon(1e-12));
  CHECK_THROWS_AS(thermal_velocity_grid(0.0), Error);
  CHECK_THROWS_AS(monokinetic_grid(-1.0), Error);
}

TEST_CASE("selective update") {
  const auto field = coherent(2.0);
  SUBCASE("photon-independent amplitudes leave the field unchanged") {
    const auto cfg = monokinetic(0.0, 1.0, 0.8);
    for (auto outcome : {AtomLevel::e, AtomLevel::f}) {
      CHECK(test::max_abs(selective_update(field, outcome, 0.8, cfg).matrix() - field.matrix()) < 1e-14);
    }
  }
  SUBCASE("outcome probabilities sum to one") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
      const auto cfg = monokinetic(u(rng), u(rng), 1.0);
      const double v = u(rng);
      CHECK(outcome_probability(field, AtomLevel::e, v, cfg) + outcome_probability(field, AtomLevel::f, v, cfg) ==
            doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  SUBCASE("post-selection on e") {
    const double eps = std::numbers::pi / 10.0;
    const auto cfg = monokinetic(eps, 1.0, 1.0);
    const auto post = selective_update(field, AtomLevel::e, 1.0, cfg);
    const double c = std::cos(std::numbers::pi / 4.0);
    double norm = 0.0;
    for (int n = 0; n <= 20; ++n) norm += c * c * field(n, n).real();
    for (int n = 0; n <= 20; ++n) {
      for (int m = 0; m <= 20; ++m) {
        const Complex expected = c * std::polar(1.0, -eps * n) * field(n, m) * c * std::polar(1.0, eps * m) / norm;
        CHECK(std::abs(post(n, m) - expected) < 1e-14);
      }
    }
    CHECK(post.trace() == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("impossible outcome") {
    const auto cfg = monokinetic(0.3, 1.0, 0.5);  // pi/2 pulse angle: cos = 0
    CHECK_THROWS_AS(selective_update(field, AtomLevel::e, 0.5, cfg), Error);
  }
}

TEST_CASE("semiselective multiplier") {
  const auto cfg = monokinetic(0.4, 1.0, 1.0);
  CHECK(semiselective_multiplier(3, 3, 0.7, cfg) == Complex(1.0, 0.0));
  for (int n = 0; n < 5; ++n) {
    for (int m = 0; m < 5; ++m) CHECK(std::abs(semiselective_multiplier(n, m, 0.5, cfg) - 1.0) < 1e-15);
  }
  // v = v0: sin^2 = cos^2 = 1/2; choose epsilon so that eps (n-m) = pi.
  const auto half = monokinetic(std::numbers::pi, 1.0, 1.0);
  CHECK(std::abs(semiselective_multiplier(1, 0, 1.0, half)) < 1e-15);
  CHECK(semiselective_multiplier(2, 5, 0.9, cfg) == std::conj(semiselective_multiplier(5, 2, 0.9, cfg)));
}

TEST_CASE("collapse structure on random samples") {
  std::mt19937_64 rng(2026);
  std::uniform_int_distribution<int> photon(0, 30);
  std::uniform_real_distribution<double> pos(0.05, 5.0);
  std::uniform_real_distribution<double> eps(-3.0, 3.0);
  double worst_modulus = 0.0;
  double worst_diag = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto cfg = monokinetic(eps(rng), pos(rng), 1.0);
    const int n = photon(rng);
    const int m = photon(rng);
    const double v = pos(rng);
    worst_modulus = std::max(worst_modulus, std::abs(semiselective_multiplier(n, m, v, cfg)));
    worst_diag = std::max(worst_diag, std::abs(semiselective_multiplier(n, n, v, cfg) - 1.0));
  }
  CHECK(worst_modulus <= 1.0 + 1e-15);
  CHECK(worst_diag == 0.0);
}

TEST_CASE("outcome average equals the semiselective map") {
  const auto field = coherent(2.0);
  for (double v : {0.3, 0.6, 1.0, 2.5}) {
    const auto cfg = monokinetic(0.4, 1.0, v);
    const double pe = outcome_probability(field, AtomLevel::e, v, cfg);
    const double pf = outcome_probability(field, AtomLevel::f, v, cfg);
    const Matrix averaged = pe * selective_update(field, AtomLevel::e, v, cfg).matrix() +
                            pf * selective_update(field, AtomLevel::f, v, cfg).matrix();
    CHECK(test::max_abs(averaged - semiselective_update(field, v, cfg).matrix()) < 1e-12);
  }
}

TEST_CASE("nonselective multiplier") {
  CollapseConfig cfg;
  cfg.epsilon = 0.4;
  cfg.velocity_grid = thermal_velocity_grid(1.0);
  cfg.v0 = mean_velocity(cfg.velocity_grid);
  const Matrix mult = nonselective_multiplier_matrix(cfg, 21);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(mult);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
  for (int n = 0; n < 21; ++n) {
    CHECK(mult(n, n) == Complex(1.0, 0.0));
    for (int m = 0; m < 21; ++m) {
      double bound = 0.0;
      for (double v : cfg.velocity_grid.velocities) {
        bound = std::max(bound, std::abs(semiselective_multiplier(n, m, v, cfg)));
      }
      CHECK(std::abs(mult(n, m)) <= bound + 1e-14);
    }
  }
  SUBCASE("single velocity equals the semiselective update") {
    const auto field = coherent(2.0);
    const auto mono = monokinetic(0.4, 1.0, 0.6);
    CHECK(test::max_abs(nonselective_update(field, mono).matrix() - semiselective_update(field, 0.6, mono).matrix()) <
          1e-15);
  }
}

TEST_CASE("interrogation sequences") {
  const auto field = coherent(2.0);
  SUBCASE("zero interrogations") {
    auto cfg = monokinetic(0.4, 1.0, 0.6);
    const auto seq = run_interrogation_sequence(field, cfg, CollapseMode::Semiselective);
    REQUIRE(seq.states.size() == 1);
    CHECK(test::max_abs(seq.states[0].matrix() - field.matrix()) == 0.0);
  }
  SUBCASE("monokinetic broadening") {
    for (double ratio : {0.3, 0.6}) {
      auto cfg = monokinetic(0.4, 1.0, ratio);
      cfg.n_interrogations = 20;
      const auto seq = run_interrogation_sequence(field, cfg, CollapseMode::Semiselective);
      CHECK(flatness(seq.snapshots.back()) < flatness(seq.snapshots.front()));
      for (std::size_t k = 1; k < seq.snapshots.size(); ++k) {
        CHECK(flatness(seq.snapshots[k]) <= flatness(seq.snapshots[k - 1]) + 1e-12);
        CHECK(test::max_abs(seq.states[k].matrix().diagonal() - field.matrix().diagonal()) < 1e-14);
      }
    }
  }
  SUBCASE("selective runs are reproducible from the seed") {
    auto cfg = monokinetic(0.4, 1.0, 0.8);
    cfg.n_interrogations = 15;
    const auto a = run_interrogation_sequence(field, cfg, CollapseMode::Selective, 42);
    const auto b = run_interrogation_sequence(field, cfg, CollapseMode::Selective, 42);
    REQUIRE(a.outcomes.size() == 15);
    for (std::size_t k = 0; k < a.outcomes.size(); ++k) {
      CHECK(a.outcomes[k].outcome == b.outcomes[k].outcome);
      CHECK(a.outcomes[k].probability > 0.0);
    }
    CHECK(test::max_abs(a.states.back().matrix() - b.states.back().matrix()) == 0.0);
    CHECK(a.states.back().trace() == doctest::Approx(1.0).epsilon(1e-12));
  }
}
