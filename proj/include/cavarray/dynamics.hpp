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
#include <variant>
#include <vector>

#include "cavarray/fock.hpp"
#include "cavarray/model.hpp"
#include "cavarray/state.hpp"

namespace cavarray {

struct IntegratorControls {
  double dt = 1e-2;
  /// Cadence of trajectory records and invariant checks.
  double sample_interval = 0.1;
  /// A failed invariant check rewinds to the previous sample and halves dt,
  /// at most this many times over the whole run.
  int max_halvings = 8;
  double trace_tol = 1e-8;
  double hermiticity_tol = 1e-10;
  double positivity_tol = 1e-8;
  /// Largest tolerated population of the top Fock level. Exceeding it raises
  /// TruncationRisk when `enforce_truncation` is set.
  double top_population_tol = 1e-6;
  bool enforce_truncation = false;
};

struct TrajectorySample {
  double t = 0.0;
  Complex a_A = 0.0;
  Complex a_B = 0.0;
  double n_A = 0.0;
  double n_B = 0.0;
  /// max(||rho_A'||_F, ||rho_B'||_F)
  double residual = 0.0;
  double top_population = 0.0;
  /// Worst physicality residuals over both sublattices.
  StateDiagnostics diagnostics;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  MeanFieldState final_state;
  double dt_used = 0.0;
};

/// Integrates the coupled sublattice master equations with classical RK4.
/// The generator of each sublattice is rebuilt at every stage from the other
/// sublattice's state at that same stage.
Trajectory evolve(const MeanFieldState& initial, const ModelParams& params,
                  double t_final, const IntegratorControls& controls = {});

/// Time derivative of both sublattices at `state`.
std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> mf_rhs(const MeanFieldState& state,
                                                      const ModelParams& params);

enum class PhaseKind { Uniform, Crystal, Oscillating };

std::string_view to_string(PhaseKind kind);

struct PhaseLabel {
  PhaseKind kind = PhaseKind::Uniform;
  double delta_n = 0.0;
  std::optional<double> period;
  /// Largest residual over the analysis window.
  double residual = 0.0;
};

struct ClassifierControls {
  double t_transient = 200.0;
  double t_window = 100.0;
  double eps_stationary = 1e-6;
  double eps_crystal = 1e-3;
  double recurrence_tol = 1e-4;
  /// Peak-to-peak swing of <a_A> below which a non-stationary window is
  /// treated as slow relaxation rather than a limit cycle.
  double min_cycle_amplitude = 1e-3;
};

/// Labels the asymptotic regime from the last `t_window` of the trajectory.
/// Throws Inconclusive when the window is neither stationary nor periodic.
PhaseLabel classify(const Trajectory& traj, const ClassifierControls& controls = {});

double order_parameter(const MeanFieldState& state);

struct SymmetricVacuum {};
struct AsymmetricCoherent {
  Complex alpha_A = 0.1;
  Complex alpha_B = 0.0;
};
struct FockOccupation {
  double n_A = 1.0;
  double n_B = 0.0;
};
using Seed = std::variant<SymmetricVacuum, AsymmetricCoherent, FockOccupation>;

MeanFieldState seed_state(const Seed& seed, FockSpace space);

/// Diagonal state with mean occupation `n`, mixing the two nearest levels.
DensityMatrix occupation_state(double n, FockSpace space);

struct TruncationPolicy {
  int initial_n_max = 10;
  int step = 5;
  int max_n_max = 60;
};

struct PointResult {
  Trajectory trajectory;
  int n_max_used = 0;
};

/// Seeds and evolves one parameter point. Hard-core models run at n_max = 1;
/// an explicit params.n_max is honoured as given; otherwise the truncation is
/// grown until the top level stays below controls.top_population_tol.
PointResult simulate(const ModelParams& params, const Seed& seed, double t_final,
                     IntegratorControls controls = {},
                     const TruncationPolicy& truncation = {});

}  // namespace cavarray
