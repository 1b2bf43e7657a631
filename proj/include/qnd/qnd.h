/*
 * Copyright 2026 The qnd-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef QND_QND_H
#define QND_QND_H

/*
 * C interface of libqnd: a continuous QND measurement simulator for a
 * two-level atom coupled dispersively to one cavity mode.
 *
 * Every object is an opaque handle owned by the caller and released with the
 * matching *_free function. Functions return a qnd_status; on failure
 * qnd_last_error() describes the problem (thread-local, valid until the next
 * call on the same thread).
 */

#include <stddef.h>
#include <stdint.h>

#if defined(QND_BUILDING_LIBRARY)
#define QND_API __attribute__((visibility("default")))
#else
#define QND_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values 2 and 3 double as CLI exit codes. */
typedef enum qnd_status {
  QND_OK = 0,
  QND_ERR_ARGUMENT = 1,
  QND_ERR_CONFIG = 2,
  QND_ERR_NUMERICAL = 3,
  QND_ERR_IO = 4,
  QND_ERR_INTERNAL = 5
} qnd_status;

typedef enum qnd_probe {
  QND_PROBE_ATOM_DIPOLE = 0,
  QND_PROBE_PHOTON_MOMENTUM = 1
} qnd_probe;

/* Angular frequencies, hbar = 1. */
typedef struct qnd_physics {
  double omega;
  double omega_ef;
  double gamma;
  double kappa;
} qnd_physics;

typedef struct qnd_scenario qnd_scenario;
typedef struct qnd_report qnd_report;
typedef struct qnd_state qnd_state;

QND_API const char* qnd_version(void);
QND_API const char* qnd_last_error(void);

/* Scenarios ------------------------------------------------------------- */

QND_API qnd_status qnd_scenario_load(const char* path, qnd_scenario** out);
QND_API qnd_status qnd_scenario_parse(const char* text, qnd_scenario** out);
QND_API qnd_status qnd_scenario_clone(const qnd_scenario* scenario, qnd_scenario** out);
/* Overrides one key (bare names such as "kappa" are resolved) and re-validates. */
QND_API qnd_status qnd_scenario_set(qnd_scenario* scenario, const char* key, const char* value);
QND_API const char* qnd_scenario_scheme(const qnd_scenario* scenario);
/*
 * Runs the scenario, writing outputs below out_dir. QND_OK means the run
 * completed; invariant violations are reported through qnd_report_ok.
 * seed is used only when has_seed != 0.
 */
QND_API qnd_status qnd_scenario_run(const qnd_scenario* scenario, const char* out_dir, int has_seed,
                                    uint64_t seed, qnd_report** out);
QND_API void qnd_scenario_free(qnd_scenario* scenario);

/* Run reports ----------------------------------------------------------- */

QND_API int qnd_report_ok(const qnd_report* report);
QND_API const char* qnd_report_footer(const qnd_report* report);
QND_API qnd_status qnd_report_get(const qnd_report* report, const char* key, const char** value);
QND_API size_t qnd_report_violation_count(const qnd_report* report);
QND_API const char* qnd_report_violation(const qnd_report* report, size_t index);
QND_API size_t qnd_report_warning_count(const qnd_report* report);
QND_API const char* qnd_report_warning(const qnd_report* report, size_t index);
QND_API void qnd_report_free(qnd_report* report);

/* Joint states ---------------------------------------------------------- */

/* (amp_e |e> + amp_f |f>) (x) |alpha e^{i phi}>, truncated at `cutoff` photons. */
QND_API qnd_status qnd_state_create_product(double alpha, double phi, double amp_e_re, double amp_e_im,
                                            double amp_f_re, double amp_f_im, int cutoff, qnd_state** out);
QND_API qnd_status qnd_state_cutoff(const qnd_state* state, int* cutoff);
/* Entry rho_{an,bm}; a and b are 'e' or 'f'. */
QND_API qnd_status qnd_state_get(const qnd_state* state, char a, int n, char b, int m, double* re, double* im);
/* Reduced atomic matrix as {ff, fe, ef, ee}, each as (re, im): 8 doubles. */
QND_API qnd_status qnd_state_atom(const qnd_state* state, double out[8]);
/* Pegg-Barnett density of the reduced field on `grid` points. */
QND_API qnd_status qnd_state_phase(const qnd_state* state, int grid, double* values);
QND_API qnd_status qnd_state_evolve_closed(const qnd_state* state, const qnd_physics* physics, double t,
                                           qnd_state** out);
QND_API qnd_status qnd_state_evolve_dipole(const qnd_state* state, const qnd_physics* physics, double t,
                                           qnd_state** out);
/* RK4 with step T_m / steps_per_period from 0 to t. */
QND_API qnd_status qnd_state_integrate(const qnd_state* state, const qnd_physics* physics, qnd_probe probe,
                                       int steps_per_period, double t, qnd_state** out);
QND_API qnd_status qnd_state_write_csv(const qnd_state* state, const char* path);
QND_API void qnd_state_free(qnd_state* state);

#ifdef __cplusplus
}
#endif

#endif /* QND_QND_H */
