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

#include "cavarray/circuit.hpp"

#include <cmath>
#include <numbers>

#include "cavarray/error.hpp"

namespace cavarray::circuit {

void CircuitParams::validate() const {
  for (double v : {C, L, C_J, E_J}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::InvalidInput, "circuit parameters must be positive and finite");
    }
  }
  if (z < 1) throw Error(ErrorKind::InvalidInput, "coordination number must be >= 1");
}

double CircuitDerived::omega_over_2pi_hz() const { return omega / (2.0 * std::numbers::pi); }

double CircuitDerived::E_C_hz() const { return E_C / kPlanck; }

CircuitDerived derive(const CircuitParams& c) {
  c.validate();
  CircuitDerived d;
  d.L_J = kPhi0 * kPhi0 / c.E_J;
  d.C_tilde = c.C + 2.0 * c.C_J;
  d.L_tilde = 1.0 / (1.0 / (2.0 * c.L) + 1.0 / d.L_J);
  d.omega = 1.0 / std::sqrt(d.L_tilde * d.C_tilde);
  const double capacitive = c.C_J / (c.C + 2.0 * c.C_J);
  const double inductive = 2.0 * c.L / (2.0 * c.L + d.L_J);
  d.alpha = capacitive;
  d.X_plus = inductive + capacitive;
  d.X_minus = inductive - capacitive;
  d.E_C = kElectronCharge * kElectronCharge / (2.0 * d.C_tilde);
  const double ec_hz = d.E_C / kPlanck;
  d.U = -d.alpha * c.z * ec_hz / 2.0;
  d.V = -2.0 * d.alpha * ec_hz;
  d.t_ch = d.alpha * ec_hz;

  if (c.C_J / c.C >= 0.1) {
    d.warnings.push_back("C_J/C >= 0.1: first-order inversion of the capacitance matrix is unreliable");
  }
  if (d.X_plus >= 0.2) {
    d.warnings.push_back("X_plus >= 0.2: rotating-wave neglect of the X_plus terms requires X_plus << 2");
  }
  if (std::abs(d.X_minus) > 1e-12) {
    d.warnings.push_back("X_minus != 0: residual linear tunnelling between cavities");
  }
  d.notes.push_back("E_C uses the charging energy e^2/(2 C_tilde)");
  d.notes.push_back(
      "U and V are negative for this coupler; phase diagrams are parameterized by positive U, V");
  d.notes.push_back("normal-ordering frequency shift not included; absorb it into the detuning");
  return d;
}

CircuitParams solve_cancellation(double C, double L, int z, CancellationTarget target,
                                 double fixed_other) {
  if (!(C > 0.0) || !(L > 0.0) || !(fixed_other > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "solve_cancellation needs positive inputs");
  }
  CircuitParams out;
  out.C = C;
  out.L = L;
  out.z = z;
  if (target == CancellationTarget::E_J) {
    out.C_J = fixed_other;
    const double alpha = out.C_J / (C + 2.0 * out.C_J);
    // 2L / (2L + L_J) = alpha
    const double L_J = 2.0 * L * (1.0 - alpha) / alpha;
    out.E_J = kPhi0 * kPhi0 / L_J;
  } else {
    out.E_J = fixed_other;
    const double L_J = kPhi0 * kPhi0 / out.E_J;
    const double beta = 2.0 * L / (2.0 * L + L_J);
    if (beta >= 0.5) {
      throw Error(ErrorKind::NoSolution,
                  "no positive C_J cancels X_minus: requires L_J > 2L");
    }
    // C_J / (C + 2 C_J) = beta
    out.C_J = beta * C / (1.0 - 2.0 * beta);
  }
  out.validate();
  return out;
}

nlohmann::json to_json(const CircuitParams& c) {
  return {{"C", c.C}, {"L", c.L}, {"C_J", c.C_J}, {"E_J", c.E_J}, {"z", c.z}};
}

nlohmann::json to_json(const CircuitDerived& d, int z) {
  return {
      {"C_tilde", d.C_tilde},
      {"L_tilde", d.L_tilde},
      {"L_J", d.L_J},
      {"omega", d.omega},
      {"omega_over_2pi_hz", d.omega_over_2pi_hz()},
      {"alpha", d.alpha},
      {"X_plus", d.X_plus},
      {"X_minus", d.X_minus},
      {"E_C", d.E_C},
      {"E_C_hz", d.E_C_hz()},
      {"U_hz", d.U},
      {"V_hz", d.V},
      {"t_ch_hz", d.t_ch},
      {"zV_over_U", d.zV_over_U(z)},
      {"warnings", d.warnings},
      {"notes", d.notes},
  };
}

CircuitParams circuit_from_json(const nlohmann::json& j) {
  static const char* const kKeys[] = {"C", "L", "C_J", "E_J", "z"};
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : kKeys) known = known || key == k;
    if (!known) throw Error(ErrorKind::InvalidInput, "unknown circuit key: " + key);
  }
  CircuitParams c;
  try {
    c.C = j.at("C").get<double>();
    c.L = j.at("L").get<double>();
    c.C_J = j.at("C_J").get<double>();
    c.E_J = j.at("E_J").get<double>();
    c.z = j.value("z", 2);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("circuit config: ") + e.what());
  }
  c.validate();
  return c;
}

}  // namespace cavarray::circuit
