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

#include "qnd/qnd.h"

#include <algorithm>
#include <fstream>
#include <memory>
#include <new>
#include <string>

#include "qnd/csv_io.hpp"
#include "qnd/dipole_scheme.hpp"
#include "qnd/scenario.hpp"

struct qnd_scenario {
  qnd::ScenarioFile scenario;
};

struct qnd_report {
  qnd::RunReport report;
  std::string footer;
};

struct qnd_state {
  qnd::JointDensityMatrix rho;
};

namespace {

thread_local std::string g_last_error;

qnd_status status_of(qnd::ErrorKind kind) {
  switch (kind) {
    case qnd::ErrorKind::InvalidArgument: return QND_ERR_ARGUMENT;
    case qnd::ErrorKind::Config: return QND_ERR_CONFIG;
    case qnd::ErrorKind::Numerical: return QND_ERR_NUMERICAL;
    case qnd::ErrorKind::Io: return QND_ERR_IO;
  }
  return QND_ERR_INTERNAL;
}

template <class Fn>
qnd_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return QND_OK;
  } catch (const qnd::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    g_last_error = e.what();
    return QND_ERR_IO;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return QND_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QND_ERR_INTERNAL;
  }
}

qnd_status null_argument(const char* what) {
  g_last_error = std::string("null argument: ") + what;
  return QND_ERR_ARGUMENT;
}

qnd::SimulationConfig to_config(const qnd_physics& p) {
  qnd::SimulationConfig cfg;
  cfg.omega = p.omega;
  cfg.omega_ef = p.omega_ef;
  cfg.gamma = p.gamma;
  cfg.kappa = p.kappa;
  return cfg;
}

qnd::AtomLevel level_of(char c) {
  if (c == 'e') return qnd::AtomLevel::e;
  if (c == 'f') return qnd::AtomLevel::f;
  qnd::fail(qnd::ErrorKind::InvalidArgument, std::string("atom label must be 'e' or 'f', got '") + c + "'");
}

}  // namespace

extern "C" {

const char* qnd_version(void) { return "1.0.0"; }

const char* qnd_last_error(void) { return g_last_error.c_str(); }

qnd_status qnd_scenario_load(const char* path, qnd_scenario** out) {
  if (!path || !out) return null_argument("path/out");
  return guarded([&] { *out = new qnd_scenario{qnd::parse_scenario(path)}; });
}

qnd_status qnd_scenario_parse(const char* text, qnd_scenario** out) {
  if (!text || !out) return null_argument("text/out");
  return guarded([&] { *out = new qnd_scenario{qnd::parse_scenario_text(text)}; });
}

qnd_status qnd_scenario_clone(const qnd_scenario* scenario, qnd_scenario** out) {
  if (!scenario || !out) return null_argument("scenario/out");
  return guarded([&] { *out = new qnd_scenario{*scenario}; });
}

qnd_status qnd_scenario_set(qnd_scenario* scenario, const char* key, const char* value) {
  if (!scenario || !key || !value) return null_argument("scenario/key/value");
  return guarded([&] { qnd::set_scenario_param(scenario->scenario, key, value); });
}

const char* qnd_scenario_scheme(const qnd_scenario* scenario) {
  return scenario ? qnd::scheme_name(scenario->scenario.scheme) : "";
}

qnd_status qnd_scenario_run(const qnd_scenario* scenario, const char* out_dir, int has_seed, uint64_t seed,
                            qnd_report** out) {
  if (!scenario || !out_dir || !out) return null_argument("scenario/out_dir/out");
  return guarded([&] {
    auto report = std::make_unique<qnd_report>();
    report->report = qnd::run_scenario(scenario->scenario, out_dir,
                                       has_seed ? std::optional<std::uint64_t>(seed) : std::nullopt);
    report->footer = report->report.footer_text();
    *out = report.release();
  });
}

void qnd_scenario_free(qnd_scenario* scenario) { delete scenario; }

int qnd_report_ok(const qnd_report* report) { return report && report->report.ok() ? 1 : 0; }

const char* qnd_report_footer(const qnd_report* report) { return report ? report->footer.c_str() : ""; }

qnd_status qnd_report_get(const qnd_report* report, const char* key, const char** value) {
  if (!report || !key || !value) return null_argument("report/key/value");
  for (const auto& [k, v] : report->report.footer) {
    if (k == key) {
      *value = v.c_str();
      return QND_OK;
    }
  }
  g_last_error = std::string("footer has no key ") + key;
  return QND_ERR_ARGUMENT;
}

size_t qnd_report_violation_count(const qnd_report* report) { return report ? report->report.violations.size() : 0; }

const char* qnd_report_violation(const qnd_report* report, size_t index) {
  if (!report || index >= report->report.violations.size()) return nullptr;
  return report->report.violations[index].c_str();
}

size_t qnd_report_warning_count(const qnd_report* report) { return report ? report->report.warnings.size() : 0; }

const char* qnd_report_warning(const qnd_report* report, size_t index) {
  if (!report || index >= report->report.warnings.size()) return nullptr;
  return report->report.warnings[index].c_str();
}

void qnd_report_free(qnd_report* report) { delete report; }

qnd_status qnd_state_create_product(double alpha, double phi, double amp_e_re, double amp_e_im, double amp_f_re,
                                    double amp_f_im, int cutoff, qnd_state** out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto field = qnd::build_coherent_field(qnd::CoherentStateSpec::make(alpha, phi), qnd::FockCutoff(cutoff));
    const auto atom = qnd::AtomStateSpec::make({amp_e_re, amp_e_im}, {amp_f_re, amp_f_im});
    *out = new qnd_state{qnd::build_joint_state(atom, field.field)};
  });
}

qnd_status qnd_state_cutoff(const qnd_state* state, int* cutoff) {
  if (!state || !cutoff) return null_argument("state/cutoff");
  *cutoff = state->rho.cutoff().max_photons();
  return QND_OK;
}

qnd_status qnd_state_get(const qnd_state* state, char a, int n, char b, int m, double* re, double* im) {
  if (!state || !re || !im) return null_argument("state/re/im");
  return guarded([&] {
    const int s = state->rho.cutoff().max_photons();
    if (n < 0 || m < 0 || n > s || m > s) qnd::fail(qnd::ErrorKind::InvalidArgument, "photon index out of range");
    const qnd::Complex v = state->rho(level_of(a), n, level_of(b), m);
    *re = v.real();
    *im = v.imag();
  });
}

qnd_status qnd_state_atom(const qnd_state* state, double out[8]) {
  if (!state || !out) return null_argument("state/out");
  return guarded([&] {
    const auto atom = qnd::reduce_to_atom(state->rho);
    const qnd::AtomLevel order[2] = {qnd::AtomLevel::f, qnd::AtomLevel::e};
    int k = 0;
    for (auto a : order) {
      for (auto b : order) {
        out[k++] = atom(a, b).real();
        out[k++] = atom(a, b).imag();
      }
    }
  });
}

qnd_status qnd_state_phase(const qnd_state* state, int grid, double* values) {
  if (!state || !values) return null_argument("state/values");
  return guarded([&] {
    const auto dist = qnd::pegg_barnett(qnd::reduce_to_field(state->rho), grid);
    std::copy(dist.values.begin(), dist.values.end(), values);
  });
}

qnd_status qnd_state_evolve_closed(const qnd_state* state, const qnd_physics* physics, double t, qnd_state** out) {
  if (!state || !physics || !out) return null_argument("state/physics/out");
  return guarded([&] { *out = new qnd_state{qnd::evolve_closed(state->rho, to_config(*physics), t)}; });
}

qnd_status qnd_state_evolve_dipole(const qnd_state* state, const qnd_physics* physics, double t, qnd_state** out) {
  if (!state || !physics || !out) return null_argument("state/physics/out");
  return guarded([&] { *out = new qnd_state{qnd::evolve_dipole_exact(state->rho, to_config(*physics), t)}; });
}

qnd_status qnd_state_integrate(const qnd_state* state, const qnd_physics* physics, qnd_probe probe,
                               int steps_per_period, double t, qnd_state** out) {
  if (!state || !physics || !out) return null_argument("state/physics/out");
  return guarded([&] {
    if (probe != QND_PROBE_ATOM_DIPOLE && probe != QND_PROBE_PHOTON_MOMENTUM) {
      qnd::fail(qnd::ErrorKind::InvalidArgument, "unknown probe");
    }
    if (!(t > 0.0)) qnd::fail(qnd::ErrorKind::InvalidArgument, "integration time must be > 0");
    qnd::SimulationConfig cfg = to_config(*physics);
    cfg.t_grid = {0.0, t};
    const auto kind = probe == QND_PROBE_ATOM_DIPOLE ? qnd::ProbeKind::AtomDipole : qnd::ProbeKind::PhotonMomentum;
    const auto traj = qnd::integrate(state->rho, cfg, qnd::make_probe(kind, state->rho.cutoff()),
                                     qnd::IntegratorSettings::per_period(cfg, steps_per_period));
    *out = new qnd_state{traj.states.back()};
  });
}

qnd_status qnd_state_write_csv(const qnd_state* state, const char* path) {
  if (!state || !path) return null_argument("state/path");
  return guarded([&] {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) qnd::fail(qnd::ErrorKind::Io, std::string("cannot write ") + path);
    qnd::write_density_csv(os, state->rho);
  });
}

void qnd_state_free(qnd_state* state) { delete state; }

}  // extern "C"
