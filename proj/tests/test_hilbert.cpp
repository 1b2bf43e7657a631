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
#include <random>

#include "doctest.h"
#include "qnd/error.hpp"
#include "qnd/hilbert.hpp"
#include "test_support.hpp"

using namespace qnd;

namespace {

// Independent oracle: Poisson tail via log-space terms, summed far past the cutoff.
double poisson_tail(double mean, int s) {
  double tail = 0.0;
  for (int n = s + 1; n < 400; ++n) {
    tail += std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0));
  }
  return tail;
}

}  // namespace

TEST_CASE("FockCutoff indexing") {
  const FockCutoff c(20);
  CHECK(c.field_dim() == 21);
  CHECK(c.joint_dim() == 42);
  CHECK(c.index(AtomLevel::f, 0) == 0);
  CHECK(c.index(AtomLevel::f, 20) == 20);
  CHECK(c.index(AtomLevel::e, 0) == 21);
  CHECK(c.index(AtomLevel::e, 20) == 41);
  CHECK_THROWS_AS(FockCutoff(0), Error);
}

TEST_CASE("coherent state construction") {
  SUBCASE("vacuum for alpha = 0") {
    const auto cf = build_coherent_field(CoherentStateSpec::make(0.0, 1.3), FockCutoff(20));
    CHECK(cf.truncation_deficit == 0.0);
    CHECK(cf.field(0, 0).real() == doctest::Approx(1.0).epsilon(1e-15));
    Matrix rest = cf.field.matrix();
    rest(0, 0) = 0.0;
    CHECK(test::max_abs(rest) == 0.0);
  }
  SUBCASE("alpha = 2 deficit is the Poisson tail") {
    const auto cf = build_coherent_field(CoherentStateSpec::make(2.0, 0.0), FockCutoff(20));
    const double oracle = poisson_tail(4.0, 20);
    CHECK(oracle > 1e-9);
    CHECK(cf.truncation_deficit == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(std::abs(cf.field.trace() - 1.0) < 1e-14);
  }
  SUBCASE("amplitudes carry the phase") {
    const double phi = 0.7;
    const auto cf = build_coherent_field(CoherentStateSpec::make(1.5, phi), FockCutoff(20));
    const Complex ratio = cf.field(1, 0) / cf.field(0, 0);
    CHECK(std::arg(ratio) == doctest::Approx(phi).epsilon(1e-12));
    CHECK(std::abs(ratio) == doctest::Approx(1.5).epsilon(1e-12));
  }
  SUBCASE("phase folded into [0, 2 pi)") {
    const auto spec = CoherentStateSpec::make(1.0, -0.5);
    CHECK(spec.phi == doctest::Approx(2.0 * M_PI - 0.5));
  }
  SUBCASE("invalid inputs") {
    CHECK_THROWS_AS(CoherentStateSpec::make(-1.0, 0.0), Error);
    CHECK_THROWS_AS(build_coherent_field(CoherentStateSpec::make(6.0, 0.0), FockCutoff(20)), Error);
    CHECK_THROWS_AS(AtomStateSpec::make({1.0, 0.0}, {1.0, 0.0}), Error);
  }
}

TEST_CASE("product state") {
  const FockCutoff c(20);
  SUBCASE("ground atom and vacuum") {
    const auto vac = build_coherent_field(CoherentStateSpec::make(0.0, 0.0), c).field;
    const auto rho = build_joint_state(AtomStateSpec::make({0.0, 0.0}, {1.0, 0.0}), vac);
    CHECK(rho(AtomLevel::f, 0, AtomLevel::f, 0) == Complex(1.0, 0.0));
    CHECK(rho.matrix().cwiseAbs().sum() == doctest::Approx(1.0));
  }
  SUBCASE("equal superposition with alpha = 2") {
    const auto field = build_coherent_field(CoherentStateSpec::make(2.0, 0.4), c).field;
    const auto rho = build_joint_state(test::equal_superposition(), field);
    for (int n = 0; n <= 20; ++n) {
      for (int m = 0; m <= 20; ++m) {
        CHECK(std::abs(rho(AtomLevel::e, n, AtomLevel::f, m) - 0.5 * field(n, m)) < 1e-15);
      }
    }
    CHECK(std::abs(rho.trace() - 1.0) < 1e-14);
    const auto d = validate(rho, 1e-12);
    CHECK_FALSE(d.flagged);
    CHECK(d.hermiticity_violation == 0.0);
  }
}

TEST_CASE("partial traces") {
  const FockCutoff c(20);
  const auto field = build_coherent_field(CoherentStateSpec::make(2.0, 0.0), c).field;
  const auto atom = AtomDensityMatrix::from_pure(test::equal_superposition());
  const auto rho = build_joint_state(atom, field);

  CHECK(test::max_abs(reduce_to_field(rho).matrix() - field.matrix()) < 1e-15);
  CHECK((reduce_to_atom(rho).matrix() - atom.matrix()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(std::abs(reduce_to_atom(rho)(AtomLevel::e, AtomLevel::f) - 0.5) < 1e-14);

  SUBCASE("entangled two-branch state") {
    Matrix m = Matrix::Zero(c.joint_dim(), c.joint_dim());
    const auto e0 = c.index(AtomLevel::e, 0);
    const auto f1 = c.index(AtomLevel::f, 1);
    m(e0, e0) = m(f1, f1) = m(e0, f1) = m(f1, e0) = 0.5;
    const JointDensityMatrix ent(c, m);
    const auto fr = reduce_to_field(ent);
    CHECK(fr(0, 0).real() == doctest::Approx(0.5));
    CHECK(fr(1, 1).real() == doctest::Approx(0.5));
    CHECK(std::abs(fr(0, 1)) == 0.0);
    const auto ar = reduce_to_atom(ent);
    CHECK(ar(AtomLevel::e, AtomLevel::e).real() == doctest::Approx(0.5));
    CHECK(std::abs(ar(AtomLevel::e, AtomLevel::f)) == 0.0);
  }
  SUBCASE("random joint states keep unit trace") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
      const JointDensityMatrix r(c, test::random_density(c.joint_dim(), rng));
      CHECK(std::abs(reduce_to_field(r).trace() - 1.0) < 1e-12);
      CHECK(std::abs(reduce_to_atom(r).matrix().trace().real() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("validate and hermitize") {
  const FockCutoff c(5);
  const auto field = build_coherent_field(CoherentStateSpec::make(1.0, 0.0), c).field;
  Matrix m = build_joint_state(test::equal_superposition(), field).matrix();
  CHECK_FALSE(validate(m, 1e-12).flagged);

  Matrix bad = m;
  bad(0, 3) += Complex(1e-6, 0.0);
  const auto d = validate(bad, 1e-8);
  CHECK(d.flagged);
  CHECK(d.hermiticity_violation == doctest::Approx(1e-6).epsilon(1e-6));
  hermitize(bad);
  CHECK(validate(bad, 1e-12).hermiticity_violation == 0.0);

  Matrix neg = m;
  neg(2, 2) = -0.1;
  CHECK(validate(neg, 1e-8).flagged);
  CHECK_THROWS_AS(JointDensityMatrix(c, Matrix::Identity(3, 3)), Error);
}
