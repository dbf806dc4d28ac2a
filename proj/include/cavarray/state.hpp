// Copyright 2026 The cavarray Authors
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

#include "cavarray/fock.hpp"

namespace cavarray {

/// Two-sublattice mean-field state: one single-site density matrix per
/// sublattice of a bipartite lattice.
struct MeanFieldState {
  DensityMatrix rho_A;
  DensityMatrix rho_B;
  double t = 0.0;

  FockSpace space() const { return FockSpace(int(rho_A.rows())); }
};

/// Physicality residuals of a single density matrix.
struct StateDiagnostics {
  double trace_deviation = 0.0;
  double hermiticity_residual = 0.0;
  double min_eigenvalue = 0.0;
};

StateDiagnostics diagnose(const DensityMatrix& rho);

}  // namespace cavarray
