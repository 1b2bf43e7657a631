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

// CSV writers shared by the scenario runner. All numbers are written with 17
// significant digits and '\n' line endings so identical runs give identical bytes.

#include <iosfwd>
#include <string>
#include <vector>

#include "qnd/collapse.hpp"
#include "qnd/lindblad.hpp"

namespace qnd {

std::string format_double(double v);

/// Header `a,n,b,m,re,im`; upper triangle in flat-index order.
void write_density_csv(std::ostream& os, const JointDensityMatrix& rho);

/// Field-only matrices use `-` as the atom label.
void write_density_csv(std::ostream& os, const FieldDensityMatrix& rho);

struct DensityCsv {
  Matrix matrix;
  bool joint = false;
};

/// Reads either layout back and restores the lower triangle by Hermiticity.
DensityCsv read_density_csv(std::istream& is);

/// Header `theta,pi_value`.
void write_phase_csv(std::ostream& os, const PhaseDistribution& dist);

/// Header `t,re_rho_ef,im_rho_ef,rho_ee,rho_ff,trace_dev,purity`.
void write_timeseries_header(std::ostream& os);
void write_timeseries_row(std::ostream& os, double t, const JointDensityMatrix& rho);

/// Header `interrogation_index,outcome,outcome_probability,velocity`.
void write_outcome_log(std::ostream& os, const std::vector<InterrogationRecord>& records);

}  // namespace qnd
