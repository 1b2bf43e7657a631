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

#include "qnd/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qnd/csv_io.hpp"
#include "qnd/dipole_scheme.hpp"

namespace qnd {

namespace fs = std::filesystem;

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::Closed: return "closed";
    case Scheme::Dipole: return "dipole";
    case Scheme::Momentum: return "momentum";
    case Scheme::Collapse: return "collapse";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

const std::vector<std::string> kCommonKeys = {
    "scheme", "state.alpha", "state.phi", "state.cutoff",
    "outputs.phase_snapshots", "outputs.phase_stride", "outputs.phase_grid", "outputs.density_dump",
};
const std::vector<std::string> kEvolutionKeys = {
    "physics.omega", "physics.omega_ef", "physics.gamma", "physics.kappa",
    "state.atom.e.re", "state.atom.e.im", "state.atom.f.re", "state.atom.f.im",
    "time.end_periods", "time.end", "time.samples_per_period", "time.samples", "outputs.timeseries",
};
const std::vector<std::string> kIntegratorKeys = {"integrator.steps_per_period", "integrator.rehermitize_every"};
const std::vector<std::string> kCollapseKeys = {
    "collapse.mode", "collapse.epsilon", "collapse.v0", "collapse.velocity_ratio", "collapse.temperature",
    "collapse.interrogations", "collapse.seed", "collapse.quadrature_points", "outputs.outcome_log",
};

std::vector<std::string> all_known_keys() {
  std::vector<std::string> keys;
  for (const auto* list : {&kCommonKeys, &kEvolutionKeys, &kIntegratorKeys, &kCollapseKeys}) {
    keys.insert(keys.end(), list->begin(), list->end());
  }
  return keys;
}

class Reader {
 public:
  Reader(const std::map<std::string, std::string>& entries, std::vector<std::string>& violations)
      : entries_(entries), violations_(violations) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::optional<std::string> text(const std::string& key, bool required) {
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
      if (required) violations_.push_back("missing key " + key);
      return std::nullopt;
    }
    return it->second;
  }

  std::optional<double> number(const std::string& key, bool required) {
    const auto raw = text(key, required);
    if (!raw) return std::nullopt;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(*raw, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != raw->size() || !std::isfinite(v)) {
      violations_.push_back(key + ": '" + *raw + "' is not a finite number");
      return std::nullopt;
    }
    return v;
  }

  std::optional<long long> integer(const std::string& key, bool required) {
    const auto raw = text(key, required);
    if (!raw) return std::nullopt;
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(*raw, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != raw->size()) {
      violations_.push_back(key + ": '" + *raw + "' is not an integer");
      return std::nullopt;
    }
    return v;
  }

  void require(bool condition, const std::string& message) {
    if (!condition) violations_.push_back(message);
  }

 private:
  const std::map<std::string, std::string>& entries_;
  std::vector<std::string>& violations_;
};

std::map<std::string, std::string> parse_entries(const std::string& text, std::vector<std::string>& violations) {
  std::map<std::string, std::string> entries;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      violations.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      violations.push_back("line " + std::to_string(lineno) + ": empty key or value");
      continue;
    }
    if (!entries.emplace(key, value).second) {
      violations.push_back("line " + std::to_string(lineno) + ": duplicate key " + key);
    }
  }
  return entries;
}

[[noreturn]] void throw_violations(const std::vector<std::string>& violations) {
  std::ostringstream os;
  os << "invalid scenario (" << violations.size() << " problem" << (violations.size() == 1 ? "" : "s") << "):";
  for (const auto& v : violations) os << "\n  - " << v;
  fail(ErrorKind::Config, os.str());
}

}  // namespace

ScenarioFile build_scenario(const std::map<std::string, std::string>& entries) {
  std::vector<std::string> violations;
  Reader in(entries, violations);
  ScenarioFile sc;
  sc.entries = entries;

  std::optional<Scheme> scheme;
  if (const auto name = in.text("scheme", true)) {
    if (*name == "closed") scheme = Scheme::Closed;
    else if (*name == "dipole") scheme = Scheme::Dipole;
    else if (*name == "momentum") scheme = Scheme::Momentum;
    else if (*name == "collapse") scheme = Scheme::Collapse;
    else violations.push_back("scheme: unknown value '" + *name + "' (closed|dipole|momentum|collapse)");
  }

  // Keys allowed for this scheme; everything else is rejected.
  std::set<std::string> allowed(kCommonKeys.begin(), kCommonKeys.end());
  if (scheme && *scheme != Scheme::Collapse) allowed.insert(kEvolutionKeys.begin(), kEvolutionKeys.end());
  if (scheme && *scheme == Scheme::Momentum) allowed.insert(kIntegratorKeys.begin(), kIntegratorKeys.end());
  if (scheme && *scheme == Scheme::Collapse) allowed.insert(kCollapseKeys.begin(), kCollapseKeys.end());
  const auto known = all_known_keys();
  for (const auto& [key, value] : entries) {
    if (allowed.count(key)) continue;
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      violations.push_back("unknown key " + key);
    } else if (scheme) {
      violations.push_back("key " + key + " does not apply to scheme " + scheme_name(*scheme));
    }
  }

  // Field state, shared by every scheme.
  const auto alpha = in.number("state.alpha", true);
  const auto phi = in.number("state.phi", true);
  if (const auto cutoff = in.integer("state.cutoff", false)) {
    in.require(*cutoff >= 1 && *cutoff <= 400, "state.cutoff must be in [1, 400]");
    sc.cutoff = static_cast<int>(*cutoff);
  }
  if (alpha && phi) {
    if (*alpha < 0.0) {
      violations.push_back("state.alpha must be >= 0");
    } else {
      sc.field = CoherentStateSpec::make(*alpha, *phi);
      if (sc.cutoff >= 1) {
        try {
          (void)build_coherent_field(sc.field, FockCutoff(sc.cutoff));
        } catch (const Error& e) {
          violations.push_back(std::string("state: ") + e.what());
        }
      }
    }
  }

  const bool evolution = scheme && *scheme != Scheme::Collapse;
  if (evolution) {
    sc.physics.omega = in.number("physics.omega", false).value_or(0.0);
    sc.physics.omega_ef = in.number("physics.omega_ef", false).value_or(0.0);
    if (const auto gamma = in.number("physics.gamma", true)) {
      sc.physics.gamma = *gamma;
      if (*scheme == Scheme::Closed) {
        in.require(*gamma >= 0.0, "physics.gamma must be >= 0");
      } else {
        in.require(*gamma > 0.0, "physics.gamma must be > 0");
      }
    }
    const bool kappa_required = *scheme != Scheme::Closed;
    if (const auto kappa = in.number("physics.kappa", kappa_required)) {
      sc.physics.kappa = *kappa;
      in.require(*kappa >= 0.0, "physics.kappa must be >= 0");
    }
    if (*scheme == Scheme::Closed) sc.physics.kappa = 0.0;

    const auto e_re = in.number("state.atom.e.re", true);
    const auto e_im = in.number("state.atom.e.im", false);
    const auto f_re = in.number("state.atom.f.re", true);
    const auto f_im = in.number("state.atom.f.im", false);
    if (e_re && f_re) {
      const Complex amp_e(*e_re, e_im.value_or(0.0));
      const Complex amp_f(*f_re, f_im.value_or(0.0));
      try {
        sc.atom = AtomStateSpec::make(amp_e, amp_f);
      } catch (const Error& e) {
        violations.push_back(std::string("state.atom: ") + e.what());
      }
    }

    const bool periods = in.has("time.end_periods");
    const bool absolute = in.has("time.end");
    if (periods == absolute) {
      violations.push_back("time: give exactly one of time.end_periods or time.end");
    } else if (periods) {
      const auto end = in.number("time.end_periods", true);
      const auto spp = in.integer("time.samples_per_period", true);
      in.require(!in.has("time.samples"), "time.samples goes with time.end, not time.end_periods");
      if (end && spp) {
        in.require(*end > 0.0, "time.end_periods must be > 0");
        in.require(*spp >= 1, "time.samples_per_period must be >= 1");
        if (*end > 0.0 && *spp >= 1 && sc.physics.gamma > 0.0) {
          sc.physics.t_grid = periodic_grid(sc.physics, *end, static_cast<int>(*spp));
        } else if (!(sc.physics.gamma > 0.0)) {
          violations.push_back("time.end_periods needs gamma > 0 (T_m = pi/gamma)");
        }
      }
    } else {
      const auto end = in.number("time.end", true);
      const auto samples = in.integer("time.samples", true);
      in.require(!in.has("time.samples_per_period"), "time.samples_per_period goes with time.end_periods");
      if (end && samples) {
        in.require(*end > 0.0, "time.end must be > 0");
        in.require(*samples >= 1, "time.samples must be >= 1");
        if (*end > 0.0 && *samples >= 1) {
          for (long long k = 0; k <= *samples; ++k) {
            sc.physics.t_grid.push_back(*end * static_cast<double>(k) / static_cast<double>(*samples));
          }
        }
      }
    }
  }

  if (scheme && *scheme == Scheme::Momentum) {
    if (const auto spp = in.integer("integrator.steps_per_period", false)) {
      in.require(*spp >= kMinStepsPerPeriod, "integrator.steps_per_period must be >= " +
                                                 std::to_string(kMinStepsPerPeriod) + " (step <= T_m/200)");
      sc.steps_per_period = static_cast<int>(*spp);
    }
    if (const auto every = in.integer("integrator.rehermitize_every", false)) {
      in.require(*every >= 1, "integrator.rehermitize_every must be >= 1");
      sc.rehermitize_every = static_cast<int>(*every);
    }
  }

  if (scheme && *scheme == Scheme::Collapse) {
    std::optional<CollapseMode> mode;
    if (const auto name = in.text("collapse.mode", true)) {
      if (*name == "selective") mode = CollapseMode::Selective;
      else if (*name == "semiselective") mode = CollapseMode::Semiselective;
      else if (*name == "nonselective") mode = CollapseMode::Nonselective;
      else violations.push_back("collapse.mode: unknown value '" + *name + "'");
    }
    if (const auto eps = in.number("collapse.epsilon", true)) sc.collapse.epsilon = *eps;
    if (const auto count = in.integer("collapse.interrogations", true)) {
      in.require(*count >= 0 && *count <= 100000, "collapse.interrogations must be in [0, 100000]");
      sc.collapse.n_interrogations = static_cast<int>(*count);
    }
    if (const auto seed = in.integer("collapse.seed", false)) {
      in.require(*seed >= 0, "collapse.seed must be >= 0");
      sc.seed = static_cast<std::uint64_t>(*seed);
    }
    if (mode) {
      sc.collapse_mode = *mode;
      if (*mode == CollapseMode::Nonselective) {
        in.require(!in.has("collapse.velocity_ratio"), "collapse.velocity_ratio applies to monokinetic modes only");
        const auto temperature = in.number("collapse.temperature", true);
        int points = kThermalQuadraturePoints;
        if (const auto p = in.integer("collapse.quadrature_points", false)) {
          in.require(*p >= 1 && *p <= 100000, "collapse.quadrature_points must be in [1, 100000]");
          points = static_cast<int>(std::clamp<long long>(*p, 1, 100000));
        }
        if (temperature) {
          if (*temperature > 0.0) {
            sc.collapse.temperature = *temperature;
            sc.collapse.velocity_grid = thermal_velocity_grid(*temperature, points);
            sc.collapse.v0 = mean_velocity(sc.collapse.velocity_grid);
          } else {
            violations.push_back("collapse.temperature must be > 0");
          }
        }
        if (const auto v0 = in.number("collapse.v0", false)) {
          in.require(*v0 > 0.0, "collapse.v0 must be > 0");
          sc.collapse.v0 = *v0;
        }
      } else {
        in.require(!in.has("collapse.temperature"), "collapse.temperature applies to nonselective mode only");
        in.require(!in.has("collapse.quadrature_points"),
                   "collapse.quadrature_points applies to nonselective mode only");
        const auto v0 = in.number("collapse.v0", true);
        const auto ratio = in.number("collapse.velocity_ratio", true);
        if (v0) {
          in.require(*v0 > 0.0, "collapse.v0 must be > 0");
          sc.collapse.v0 = *v0;
        }
        if (ratio) in.require(*ratio > 0.0, "collapse.velocity_ratio must be > 0");
        if (v0 && ratio && *v0 > 0.0 && *ratio > 0.0) {
          sc.collapse.velocity_grid = monokinetic_grid(*ratio * *v0);
        }
      }
      if (*mode != CollapseMode::Selective) {
        in.require(!in.has("outputs.outcome_log"), "outputs.outcome_log needs collapse.mode = selective");
      }
    }
  }

  // Outputs.
  sc.outputs.timeseries = in.text("outputs.timeseries", false);
  sc.outputs.phase_snapshots = in.text("outputs.phase_snapshots", false);
  sc.outputs.density_dump = in.text("outputs.density_dump", false);
  sc.outputs.outcome_log = in.text("outputs.outcome_log", false);
  if (const auto stride = in.integer("outputs.phase_stride", false)) {
    in.require(*stride >= 1, "outputs.phase_stride must be >= 1");
    sc.outputs.phase_stride = static_cast<int>(std::max<long long>(*stride, 1));
  }
  if (const auto grid = in.integer("outputs.phase_grid", false)) {
    in.require(*grid >= 1 && *grid <= 1000000, "outputs.phase_grid must be in [1, 1000000]");
    sc.outputs.phase_grid = static_cast<int>(std::clamp<long long>(*grid, 1, 1000000));
  }
  if (!sc.outputs.timeseries && !sc.outputs.phase_snapshots && !sc.outputs.density_dump &&
      !sc.outputs.outcome_log) {
    violations.push_back("missing section outputs (declare at least one of outputs.timeseries, "
                         "outputs.phase_snapshots, outputs.density_dump, outputs.outcome_log)");
  }

  if (!violations.empty()) throw_violations(violations);
  sc.scheme = *scheme;
  return sc;
}

ScenarioFile parse_scenario_text(const std::string& text) {
  std::vector<std::string> violations;
  const auto entries = parse_entries(text, violations);
  if (!violations.empty()) {
    // Report syntax problems together with whatever the entries themselves lack.
    try {
      (void)build_scenario(entries);
    } catch (const Error& e) {
      std::string rest = e.what();
      const auto nl = rest.find('\n');
      std::istringstream lines(nl == std::string::npos ? "" : rest.substr(nl + 1));
      std::string line;
      while (std::getline(lines, line)) {
        const auto dash = line.find("- ");
        if (dash != std::string::npos) violations.push_back(line.substr(dash + 2));
      }
    }
    throw_violations(violations);
  }
  return build_scenario(entries);
}

ScenarioFile parse_scenario(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorKind::Config, "cannot read scenario file " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_scenario_text(ss.str());
}

void set_scenario_param(ScenarioFile& scenario, const std::string& key, const std::string& value) {
  std::string full = key;
  if (key.find('.') == std::string::npos && key != "scheme") {
    std::vector<std::string> matches;
    for (const auto& known : all_known_keys()) {
      const auto dot = known.rfind('.');
      if (dot != std::string::npos && known.substr(dot + 1) == key) matches.push_back(known);
    }
    if (matches.size() != 1) {
      fail(ErrorKind::Config, "parameter '" + key + "' does not name a unique scenario key");
    }
    full = matches.front();
  }
  auto entries = scenario.entries;
  entries[full] = value;
  scenario = build_scenario(entries);
}

std::string RunReport::footer_text() const {
  std::ostringstream os;
  os << "[footer]\n";
  for (const auto& [k, v] : footer) os << k << '=' << v << '\n';
  return os.str();
}

namespace {

constexpr double kTraceTol = 1e-8;
constexpr double kHermiticityTol = 1e-10;
constexpr double kDiagonalFloor = -1e-10;
constexpr double kPurityTol = 1e-12;
constexpr double kFieldPopulationTol = 1e-12;
constexpr double kAtomPopulationTol = 1e-8;
constexpr double kPhaseIntegralTol = 1e-6;
constexpr double kPhaseImagTol = 1e-12;
constexpr double kPhaseNegativeTol = -1e-9;
constexpr double kIntegratorTol = 1e-6;

std::ofstream open_output(const fs::path& out_dir, const std::string& relative) {
  const fs::path path = out_dir / relative;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) fail(ErrorKind::Io, "cannot write " + path.string());
  return os;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ';';
    out += format_double(values[i]);
  }
  return out;
}

struct Tracker {
  double trace_dev = 0.0;
  double hermiticity = 0.0;
  double min_diagonal = std::numeric_limits<double>::infinity();
  double purity_increase = -std::numeric_limits<double>::infinity();
  std::optional<double> last_purity;

  void add(const Matrix& m) {
    const StateDiagnostics d = validate(m, 0.0);
    trace_dev = std::max(trace_dev, d.trace_deviation);
    hermiticity = std::max(hermiticity, d.hermiticity_violation);
    min_diagonal = std::min(min_diagonal, d.min_diagonal);
    const double purity = m.squaredNorm();
    if (last_purity) purity_increase = std::max(purity_increase, purity - *last_purity);
    last_purity = purity;
  }
};

struct PhaseTracker {
  std::vector<double> flatness_values;
  double integral_dev = 0.0;
  double max_imag = 0.0;
  double min_value = std::numeric_limits<double>::infinity();

  void add(const PhaseDistribution& dist, double trace, const fs::path& out_dir,
           const std::optional<std::string>& dir) {
    const std::size_t index = flatness_values.size();
    flatness_values.push_back(flatness(dist));
    integral_dev = std::max(integral_dev, std::abs(dist.integral() - trace));
    max_imag = std::max(max_imag, dist.max_imaginary);
    min_value = std::min(min_value, dist.min_value);
    if (dir) {
      auto os = open_output(out_dir, (fs::path(*dir) / ("phase_t" + std::to_string(index) + ".csv")).string());
      write_phase_csv(os, dist);
    }
  }

  void report(RunReport& r) const {
    if (flatness_values.empty()) return;
    r.footer.emplace_back("flatness", join(flatness_values));
    r.footer.emplace_back("phase_integral_dev", format_double(integral_dev));
    r.footer.emplace_back("phase_min_value", format_double(min_value));
    if (integral_dev > kPhaseIntegralTol) r.violations.push_back("phase distribution does not integrate to the trace");
    if (max_imag > kPhaseImagTol) r.violations.push_back("phase distribution has a non-negligible imaginary part");
    if (min_value < kPhaseNegativeTol) r.warnings.push_back("phase distribution dips below -1e-9 (truncation)");
  }
};

void report_tracker(RunReport& r, const Tracker& t, bool dissipative) {
  r.footer.emplace_back("max_trace_dev", format_double(t.trace_dev));
  r.footer.emplace_back("max_hermiticity", format_double(t.hermiticity));
  r.footer.emplace_back("min_diagonal", format_double(t.min_diagonal));
  const double purity_increase = std::isfinite(t.purity_increase) ? t.purity_increase : 0.0;
  r.footer.emplace_back("max_purity_increase", format_double(purity_increase));
  if (t.trace_dev > kTraceTol) r.violations.push_back("trace deviation above 1e-8");
  if (t.hermiticity > kHermiticityTol) r.violations.push_back("hermiticity drift above 1e-10");
  if (t.min_diagonal < kDiagonalFloor) r.violations.push_back("negative diagonal entry below -1e-10");
  if (dissipative && purity_increase > kPurityTol) r.violations.push_back("purity increased under dissipation");
}

bool is_equal_real_superposition(const AtomStateSpec& atom) {
  const double h = std::sqrt(0.5);
  return atom.amp_e.imag() == 0.0 && atom.amp_f.imag() == 0.0 && std::abs(atom.amp_e.real() - h) < 1e-12 &&
         std::abs(atom.amp_f.real() - h) < 1e-12;
}

RunReport run_evolution(const ScenarioFile& sc, const fs::path& out_dir) {
  RunReport report;
  const FockCutoff cutoff(sc.cutoff);
  const CoherentField coherent = build_coherent_field(sc.field, cutoff);
  const JointDensityMatrix rho0 = build_joint_state(sc.atom, coherent.field);
  const SimulationConfig& cfg = sc.physics;

  report.footer.emplace_back("scheme", scheme_name(sc.scheme));
  report.footer.emplace_back("truncation_deficit", format_double(coherent.truncation_deficit));

  std::vector<JointDensityMatrix> states;
  std::optional<IntegrationDiagnostics> integration;
  if (sc.scheme == Scheme::Momentum) {
    IntegratorSettings settings = IntegratorSettings::per_period(cfg, sc.steps_per_period);
    settings.rehermitize_every = sc.rehermitize_every;
    Trajectory traj = integrate(rho0, cfg, make_probe(ProbeKind::PhotonMomentum, cutoff), settings);
    states = std::move(traj.states);
    integration = traj.diagnostics;
  } else {
    states.reserve(cfg.t_grid.size());
    for (double t : cfg.t_grid) {
      states.push_back(sc.scheme == Scheme::Closed ? evolve_closed(rho0, cfg, t) : evolve_dipole_exact(rho0, cfg, t));
    }
  }

  Tracker tracker;
  PhaseTracker phases;
  std::optional<std::ofstream> series;
  if (sc.outputs.timeseries) {
    series = open_output(out_dir, *sc.outputs.timeseries);
    write_timeseries_header(*series);
  }
  const FieldDensityMatrix field0 = reduce_to_field(rho0);
  const AtomDensityMatrix atom0 = reduce_to_atom(rho0);
  double field_drift = 0.0;
  double atom_drift = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const JointDensityMatrix& rho = states[i];
    tracker.add(rho.matrix());
    if (series) write_timeseries_row(*series, cfg.t_grid[i], rho);
    const FieldDensityMatrix field = reduce_to_field(rho);
    const AtomDensityMatrix atom = reduce_to_atom(rho);
    for (int n = 0; n < cutoff.field_dim(); ++n) {
      field_drift = std::max(field_drift, std::abs(field(n, n) - field0(n, n)));
    }
    for (int a = 0; a < 2; ++a) {
      const auto level = static_cast<AtomLevel>(a);
      atom_drift = std::max(atom_drift, std::abs(atom(level, level) - atom0(level, level)));
    }
    if (i % static_cast<std::size_t>(sc.outputs.phase_stride) == 0) {
      phases.add(pegg_barnett(field, sc.outputs.phase_grid), field.trace(), out_dir, sc.outputs.phase_snapshots);
    }
  }
  if (sc.outputs.density_dump) {
    auto os = open_output(out_dir, *sc.outputs.density_dump);
    write_density_csv(os, states.back());
  }

  const bool dissipative = cfg.kappa > 0.0;
  if (integration) {
    tracker.purity_increase = std::max(tracker.purity_increase, integration->max_purity_increase);
  }
  report_tracker(report, tracker, dissipative);
  report.footer.emplace_back("field_population_drift", format_double(field_drift));
  report.footer.emplace_back("atom_population_drift", format_double(atom_drift));
  if (sc.scheme != Scheme::Momentum && field_drift > kFieldPopulationTol) {
    report.violations.push_back("field populations drifted above 1e-12");
  }
  if (sc.scheme == Scheme::Momentum && atom_drift > kAtomPopulationTol) {
    report.violations.push_back("atomic populations drifted above 1e-8");
  }
  phases.report(report);

  if (integration) {
    Trajectory view;
    view.times = cfg.t_grid;
    view.states = states;
    const auto coherence = coherence_series(view);
    const EnvelopeFit fit = fit_envelope_rate(coherence);
    report.footer.emplace_back("integrator_steps", std::to_string(integration->steps));
    report.footer.emplace_back("coherence_envelope_rate", format_double(fit.rate));
    report.footer.emplace_back("coherence_envelope_points", std::to_string(fit.points));
    report.footer.emplace_back("coherence_envelope_fallback", fit.monotone_fallback ? "1" : "0");
    report.footer.emplace_back("max_boundary_occupancy", format_double(integration->max_boundary_occupancy));
    report.footer.emplace_back("truncation_flag", integration->truncation_flag ? "1" : "0");
    if (integration->truncation_flag) {
      report.warnings.push_back("occupancy of the highest Fock level reached " +
                                format_double(integration->max_boundary_occupancy) + " (guard 1e-6)");
    }
    if (cfg.kappa == 0.0 && is_equal_real_superposition(sc.atom)) {
      double dev = 0.0;
      for (const CoherencePoint& p : coherence) {
        dev = std::max(dev, std::abs(p.rho_ef - coherence_closed_form(sc.field.alpha, cfg, p.t)));
      }
      // Closed form is the untruncated sum: allow the Poisson tail plus RK4 error.
      const double bound = coherent.truncation_deficit + kIntegratorTol;
      report.footer.emplace_back("closed_form_max_dev", format_double(dev));
      report.footer.emplace_back("closed_form_bound", format_double(bound));
      if (dev > bound) report.violations.push_back("coherence departs from the closed-form revival");
    }
  }
  return report;
}

RunReport run_collapse(const ScenarioFile& sc, const fs::path& out_dir, std::uint64_t seed) {
  RunReport report;
  const FockCutoff cutoff(sc.cutoff);
  const CoherentField coherent = build_coherent_field(sc.field, cutoff);
  const InterrogationSequence seq =
      run_interrogation_sequence(coherent.field, sc.collapse, sc.collapse_mode, seed, sc.outputs.phase_grid);

  report.footer.emplace_back("scheme", "collapse");
  const char* mode = sc.collapse_mode == CollapseMode::Selective       ? "selective"
                     : sc.collapse_mode == CollapseMode::Semiselective ? "semiselective"
                                                                       : "nonselective";
  report.footer.emplace_back("mode", mode);
  report.footer.emplace_back("truncation_deficit", format_double(coherent.truncation_deficit));
  report.footer.emplace_back("v0", format_double(sc.collapse.v0));
  report.footer.emplace_back("mean_velocity", format_double(mean_velocity(sc.collapse.velocity_grid)));
  report.footer.emplace_back("seed", std::to_string(seed));

  Tracker tracker;
  PhaseTracker phases;
  double population_drift = 0.0;
  for (std::size_t k = 0; k < seq.states.size(); ++k) {
    tracker.add(seq.states[k].matrix());
    phases.add(seq.snapshots[k], seq.states[k].trace(), out_dir, sc.outputs.phase_snapshots);
    if (sc.collapse_mode != CollapseMode::Selective) {
      for (int n = 0; n < cutoff.field_dim(); ++n) {
        population_drift = std::max(population_drift, std::abs(seq.states[k](n, n) - seq.states[0](n, n)));
      }
    }
  }
  report_tracker(report, tracker, sc.collapse_mode != CollapseMode::Selective);
  report.footer.emplace_back("field_population_drift", format_double(population_drift));
  if (population_drift > kFieldPopulationTol) report.violations.push_back("field populations changed");
  phases.report(report);

  if (sc.outputs.density_dump) {
    auto os = open_output(out_dir, *sc.outputs.density_dump);
    write_density_csv(os, seq.states.back());
  }
  if (sc.outputs.outcome_log) {
    auto os = open_output(out_dir, *sc.outputs.outcome_log);
    write_outcome_log(os, seq.outcomes);
  }
  return report;
}

}  // namespace

RunReport run_scenario(const ScenarioFile& scenario, const fs::path& out_dir, std::optional<std::uint64_t> seed) {
  fs::create_directories(out_dir);
  RunReport report = scenario.scheme == Scheme::Collapse ? run_collapse(scenario, out_dir, seed.value_or(scenario.seed))
                                                         : run_evolution(scenario, out_dir);
  report.footer.emplace_back("warnings", std::to_string(report.warnings.size()));
  report.footer.emplace_back("status", report.ok() ? "ok" : "invariant_violation");
  return report;
}

}  // namespace qnd
