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
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "qnd/csv_io.hpp"
#include "qnd/error.hpp"
#include "qnd/scenario.hpp"
#include "test_support.hpp"

using namespace qnd;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qnd_test_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string footer_value(const RunReport& r, const std::string& key) {
  for (const auto& [k, v] : r.footer) {
    if (k == key) return v;
  }
  return {};
}

std::vector<double> split_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string cell; std::getline(ss, cell, ';');) out.push_back(std::stod(cell));
  return out;
}

std::string message_of(const std::string& text) {
  try {
    parse_scenario_text(text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
    return e.what();
  }
  return {};
}

const std::string kDipole = R"(
scheme = dipole
physics.gamma = 1
physics.kappa = 0.1
state.alpha = 2
state.phi = 0
state.atom.e.re = 0.70710678118654752
state.atom.f.re = 0.70710678118654752
time.end_periods = 1
time.samples_per_period = 4
outputs.timeseries = ts.csv
)";

}  // namespace

TEST_CASE("number formatting round-trips") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(u(rng) * 30));
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("density CSV round trip") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const int s = 1 + trial;
    const FockCutoff c(s);
    Matrix joint = test::random_density(c.joint_dim(), rng);
    hermitize(joint);
    const JointDensityMatrix rho(c, joint);
    std::stringstream js;
    write_density_csv(js, rho);
    const DensityCsv back = read_density_csv(js);
    CHECK(back.joint);
    CHECK(back.matrix == rho.matrix());

    Matrix fm = test::random_density(c.field_dim(), rng);
    hermitize(fm);
    const FieldDensityMatrix field(fm);
    std::stringstream fs_;
    write_density_csv(fs_, field);
    const DensityCsv fback = read_density_csv(fs_);
    CHECK_FALSE(fback.joint);
    CHECK(fback.matrix == field.matrix());
  }
  std::stringstream bad("x,y\n");
  CHECK_THROWS_AS(read_density_csv(bad), Error);
}

TEST_CASE("scenario parsing") {
  SUBCASE("shipped scenarios") {
    for (const char* name : {"fig1_weak", "fig2_momentum", "fig3_monokinetic", "fig4_thermal"}) {
      const auto sc = parse_scenario(fs::path(QND_SCENARIO_DIR) / (std::string(name) + ".scenario"));
      CAPTURE(name);
      CHECK(sc.cutoff == 20);
    }
    const auto fig1 = parse_scenario(fs::path(QND_SCENARIO_DIR) / "fig1_weak.scenario");
    CHECK(fig1.scheme == Scheme::Dipole);
    CHECK(fig1.physics.kappa == doctest::Approx(0.1));
    CHECK(fig1.physics.t_grid.size() == 151);
    CHECK(fig1.outputs.phase_stride == 50);
  }
  SUBCASE("empty file lists every missing key") {
    const std::string msg = message_of("");
    CHECK(msg.find("scheme") != std::string::npos);
    CHECK(msg.find("state.alpha") != std::string::npos);
    CHECK(msg.find("state.phi") != std::string::npos);
  }
  SUBCASE("rejections") {
    CHECK(message_of(kDipole + "physics.kappa = -1\n").find("kappa") != std::string::npos);
    CHECK(message_of(kDipole + "physics.kapa = 1\n").find("physics.kapa") != std::string::npos);
    CHECK(message_of(kDipole + "collapse.epsilon = 1\n").find("collapse.epsilon") != std::string::npos);
    CHECK(message_of(kDipole + "integrator.steps_per_period = 100\n").find("steps_per_period") !=
          std::string::npos);
    CHECK(message_of(kDipole + "state.alpha = abc\n").find("state.alpha") != std::string::npos);
    CHECK_FALSE(message_of(kDipole + "physics.gamma = 0\n").empty());
  }
  SUBCASE("parameter override") {
    auto sc = parse_scenario_text(kDipole);
    set_scenario_param(sc, "kappa", "10");
    CHECK(sc.physics.kappa == 10.0);
    set_scenario_param(sc, "state.alpha", "1.5");
    CHECK(sc.field.alpha == 1.5);
    CHECK_THROWS_AS(set_scenario_param(sc, "kappa", "-2"), Error);
    CHECK_THROWS_AS(set_scenario_param(sc, "nonsense", "1"), Error);
  }
}

TEST_CASE("scenario runs") {
  SUBCASE("dipole writes the time series") {
    const auto dir = scratch_dir("dipole");
    const auto report = run_scenario(parse_scenario_text(kDipole), dir);
    CHECK(report.ok());
    std::ifstream in(dir / "ts.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,re_rho_ef,im_rho_ef,rho_ee,rho_ff,trace_dev,purity");
    int rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == 5);
    CHECK(report.footer_text().rfind("[footer]\n", 0) == 0);
    CHECK(footer_value(report, "status") == "ok");
  }
  SUBCASE("closed scheme with zero coupling is constant") {
    const auto dir = scratch_dir("closed");
    const auto sc = parse_scenario_text(R"(
scheme = closed
physics.gamma = 0
state.alpha = 1
state.phi = 0.5
state.atom.e.re = 0.6
state.atom.f.re = 0.8
time.end = 3
time.samples = 6
outputs.timeseries = ts.csv
outputs.phase_snapshots = phase
)");
    const auto report = run_scenario(sc, dir);
    CHECK(report.ok());
    const auto flat = split_doubles(footer_value(report, "flatness"));
    REQUIRE(flat.size() == 7);
    for (double f : flat) CHECK(f == flat.front());
    std::ifstream in(dir / "ts.csv");
    std::string line;
    std::getline(in, line);
    std::set<std::string> bodies;
    while (std::getline(in, line)) bodies.insert(line.substr(line.find(',')));
    CHECK(bodies.size() == 1);
    CHECK(fs::exists(dir / "phase" / "phase_t6.csv"));
  }
  SUBCASE("momentum without measurement matches the revival formula") {
    const auto dir = scratch_dir("momentum");
    auto text = kDipole;
    text.replace(text.find("dipole"), 6, "momentum");
    auto sc = parse_scenario_text(text);
    set_scenario_param(sc, "kappa", "0");
    const auto report = run_scenario(sc, dir);
    CHECK(report.ok());
    CHECK(std::stod(footer_value(report, "closed_form_max_dev")) <=
          std::stod(footer_value(report, "closed_form_bound")));
  }
  SUBCASE("thermal ordering in the footer") {
    const auto base = parse_scenario(fs::path(QND_SCENARIO_DIR) / "fig4_thermal.scenario");
    auto cold = base;
    auto hot = base;
    set_scenario_param(cold, "temperature", "0.1");
    set_scenario_param(hot, "temperature", "10");
    const auto rc = run_scenario(cold, scratch_dir("cold"));
    const auto rh = run_scenario(hot, scratch_dir("hot"));
    CHECK(rc.ok());
    CHECK(rh.ok());
    const auto fc = split_doubles(footer_value(rc, "flatness"));
    const auto fh = split_doubles(footer_value(rh, "flatness"));
    REQUIRE(fc.size() == fh.size());
    for (std::size_t k = 0; k < fc.size(); ++k) CHECK(fh[k] <= fc[k] + 1e-12);
  }
  SUBCASE("selective mode writes an outcome log and honours the seed") {
    const std::string text = R"(
scheme = collapse
state.alpha = 2
state.phi = 0
collapse.mode = selective
collapse.epsilon = 0.4
collapse.v0 = 1
collapse.velocity_ratio = 0.8
collapse.interrogations = 8
collapse.seed = 5
outputs.outcome_log = outcomes.csv
)";
    const auto sc = parse_scenario_text(text);
    const auto a = scratch_dir("sel_a");
    const auto b = scratch_dir("sel_b");
    CHECK(run_scenario(sc, a).ok());
    CHECK(run_scenario(sc, b, 5).ok());
    std::ifstream fa(a / "outcomes.csv");
    std::ifstream fb(b / "outcomes.csv");
    std::stringstream sa;
    std::stringstream sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK(sa.str().rfind("interrogation_index,outcome,outcome_probability,velocity\n", 0) == 0);
  }
}
