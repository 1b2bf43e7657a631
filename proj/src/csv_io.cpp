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

#include "qnd/csv_io.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace qnd {

std::string format_double(double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

void write_density_csv(std::ostream& os, const JointDensityMatrix& rho) {
  const FockCutoff cutoff = rho.cutoff();
  const int dim = cutoff.field_dim();
  os << "a,n,b,m,re,im\n";
  for (int i = 0; i < cutoff.joint_dim(); ++i) {
    for (int j = i; j < cutoff.joint_dim(); ++j) {
      const Complex v = rho.matrix()(i, j);
      os << level_label(static_cast<AtomLevel>(i / dim)) << ',' << i % dim << ','
         << level_label(static_cast<AtomLevel>(j / dim)) << ',' << j % dim << ',' << format_double(v.real())
         << ',' << format_double(v.imag()) << '\n';
    }
  }
}

void write_density_csv(std::ostream& os, const FieldDensityMatrix& rho) {
  const int dim = rho.max_photons() + 1;
  os << "a,n,b,m,re,im\n";
  for (int n = 0; n < dim; ++n) {
    for (int m = n; m < dim; ++m) {
      os << "-," << n << ",-," << m << ',' << format_double(rho(n, m).real()) << ','
         << format_double(rho(n, m).imag()) << '\n';
    }
  }
}

namespace {

int atom_offset(const std::string& label, bool& joint) {
  if (label == "f") {
    joint = true;
    return 0;
  }
  if (label == "e") {
    joint = true;
    return 1;
  }
  if (label == "-") return 0;
  fail(ErrorKind::Io, "density CSV: unknown atom label '" + label + "'");
}

}  // namespace

DensityCsv read_density_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "a,n,b,m,re,im") {
    fail(ErrorKind::Io, "density CSV: missing header a,n,b,m,re,im");
  }
  struct Row {
    int a, n, b, m;
    Complex v;
  };
  std::vector<Row> rows;
  bool joint = false;
  int max_n = -1;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 6) fail(ErrorKind::Io, "density CSV: expected 6 columns in '" + line + "'");
    Row r{atom_offset(cells[0], joint), std::stoi(cells[1]), atom_offset(cells[2], joint), std::stoi(cells[3]),
          Complex(std::stod(cells[4]), std::stod(cells[5]))};
    max_n = std::max({max_n, r.n, r.m});
    rows.push_back(r);
  }
  if (max_n < 1) fail(ErrorKind::Io, "density CSV: no entries");
  const int dim = max_n + 1;
  const int size = joint ? 2 * dim : dim;
  DensityCsv out{Matrix::Zero(size, size), joint};
  for (const Row& r : rows) {
    const int i = r.a * dim + r.n;
    const int j = r.b * dim + r.m;
    out.matrix(i, j) = r.v;
    out.matrix(j, i) = std::conj(r.v);
  }
  return out;
}

void write_phase_csv(std::ostream& os, const PhaseDistribution& dist) {
  os << "theta,pi_value\n";
  for (std::size_t k = 0; k < dist.values.size(); ++k) {
    os << format_double(dist.theta[k]) << ',' << format_double(dist.values[k]) << '\n';
  }
}

void write_timeseries_header(std::ostream& os) { os << "t,re_rho_ef,im_rho_ef,rho_ee,rho_ff,trace_dev,purity\n"; }

void write_timeseries_row(std::ostream& os, double t, const JointDensityMatrix& rho) {
  const AtomDensityMatrix atom = reduce_to_atom(rho);
  const Complex ef = atom(AtomLevel::e, AtomLevel::f);
  os << format_double(t) << ',' << format_double(ef.real()) << ',' << format_double(ef.imag()) << ','
     << format_double(atom(AtomLevel::e, AtomLevel::e).real()) << ','
     << format_double(atom(AtomLevel::f, AtomLevel::f).real()) << ',' << format_double(rho.trace() - 1.0) << ','
     << format_double(rho.purity()) << '\n';
}

void write_outcome_log(std::ostream& os, const std::vector<InterrogationRecord>& records) {
  os << "interrogation_index,outcome,outcome_probability,velocity\n";
  for (const InterrogationRecord& r : records) {
    os << r.index << ',' << level_label(r.outcome) << ',' << format_double(r.probability) << ','
       << format_double(r.velocity) << '\n';
  }
}

}  // namespace qnd
