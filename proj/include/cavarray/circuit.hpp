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

#include <string>
#include <vector>

#include <json.hpp>

namespace cavarray::circuit {

/// SI physical constants (CODATA 2018 exact values where defined).
inline constexpr double kHbar = 1.054571817e-34;
inline constexpr double kPlanck = 6.62607015e-34;
inline constexpr double kElectronCharge = 1.602176634e-19;
/// Reduced flux quantum hbar / 2e.
inline constexpr double kPhi0 = kHbar / (2.0 * kElectronCharge);

/// Lumped-element resonators (C, L) coupled through capacitively shunted
/// Josephson junctions (C_J, E_J). SI units; E_J in joules.
struct CircuitParams {
  double C = 0.0;
  double L = 0.0;
  double C_J = 0.0;
  double E_J = 0.0;
  int z = 2;

  void validate() const;
};

struct CircuitDerived {
  double C_tilde = 0.0;
  double L_tilde = 0.0;
  double L_J = 0.0;
  /// Angular frequency 1/sqrt(L_tilde C_tilde), rad/s.
  double omega = 0.0;
  double alpha = 0.0;
  double X_plus = 0.0;
  double X_minus = 0.0;
  /// Charging energy e^2 / (2 C_tilde), joules.
  double E_C = 0.0;
  /// Model couplings in Hz (energy / h). Signed: U and V come out negative.
  double U = 0.0;
  double V = 0.0;
  double t_ch = 0.0;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;

  double omega_over_2pi_hz() const;
  double E_C_hz() const;
  /// z V / U; identically 4 for this coupler.
  double zV_over_U(int z) const { return z * V / U; }
};

CircuitDerived derive(const CircuitParams& circuit);

enum class CancellationTarget { E_J, C_J };

/// Chooses the free parameter so that the linear inter-cavity coupling
/// X_minus vanishes. `fixed_other` is C_J when solving for E_J, and E_J when
/// solving for C_J. Throws NoSolution when no positive value exists.
CircuitParams solve_cancellation(double C, double L, int z, CancellationTarget target,
                                 double fixed_other);

nlohmann::json to_json(const CircuitParams& c);
nlohmann::json to_json(const CircuitDerived& d, int z);
CircuitParams circuit_from_json(const nlohmann::json& j);

}  // namespace cavarray::circuit
