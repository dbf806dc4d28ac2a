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

#include <optional>
#include <string>

#include "cavarray/fock.hpp"

namespace cavarray {

/// Couplings of the driven-dissipative cavity array in the rotating frame,
/// all in units of the loss rate. Hopping, cross-Kerr and correlated-hopping
/// strengths are coordination-scaled (z times the bare bond value).
struct ModelParams {
  double delta = 0.0;
  double omega = 0.0;
  double zJ = 0.0;
  double U = 0.0;
  double zV = 0.0;
  double kappa = 1.0;
  double t_ch = 0.0;
  bool hard_core = false;
  /// Unset means automatic truncation (see dynamics). Hard-core forces 1.
  std::optional<int> n_max;

  /// Throws InvalidInput on kappa <= 0, n_max < 1, non-finite values, or a
  /// hard-core model with n_max != 1.
  void validate() const;
};

/// Expectation values of the opposite sublattice that enter the decoupled
/// single-site generator.
struct MeanFields {
  Complex a = 0.0;
  double n = 0.0;
  Complex adag_adag_a = 0.0;
  Complex a_a = 0.0;
};

Operator build_mf_hamiltonian(const ModelParams& params, const MeanFields& mf,
                              FockSpace space);

/// Mean-field reduction of the correlated-hopping bond term:
/// t_ch * ( a <a^dag a^dag a> + a^dag a^dag a <a> - 1/2 a^dag a^dag <a a> ) + h.c.
Operator build_ch_mf(double t_ch, const MeanFields& mf, FockSpace space);

/// Time derivative of rho under -i[H, rho] + kappa/2 (2 a rho a^dag - n rho - rho n).
Eigen::MatrixXcd lindblad_rhs(const DensityMatrix& rho, const Operator& H,
                              double kappa);

/// Allocation-free variant used by the integrators. `bandwidth` bounds the
/// nonzero diagonals of H (|i - j| <= bandwidth); pass -1 to detect it.
void lindblad_rhs_into(const DensityMatrix& rho, const Operator& H, double kappa,
                       Eigen::MatrixXcd& out, int bandwidth = -1);

/// Fast path for Hermitian rho and H: only the upper triangle is computed and
/// the result is mirrored, so it is Hermitian to the last bit.
void lindblad_rhs_hermitian_into(const DensityMatrix& rho, const Operator& H,
                                 double kappa, int bandwidth, Eigen::MatrixXcd& scratch,
                                 Eigen::MatrixXcd& out);

int operator_bandwidth(const Operator& op, double tol = 0.0);

enum class CriticalLimit { HardCore, FreeU0 };

struct CriticalV {
  double zV_c = 0.0;
  double gamma = 0.0;
  /// The closed form is a small-detuning result; exact only at delta = 0.
  std::string caveat;
};

CriticalV critical_V_analytic(double delta, double omega, CriticalLimit limit);

}  // namespace cavarray
