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

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cavarray/dynamics.hpp"
#include "cavarray/model.hpp"

namespace cavarray {

struct SweepAxis {
  /// One of delta, omega, zJ, U, zV, t_ch, n_A0, n_B0.
  std::string name;
  double min = 0.0;
  double max = 0.0;
  int n_points = 2;

  std::vector<double> values() const;
};

struct SweepSpec {
  ModelParams base;
  SweepAxis axis1;
  /// Absent for a one-dimensional cut.
  std::optional<SweepAxis> axis2;
  /// Used unless an axis names an initial occupation, which forces a
  /// FockOccupation seed built from n_A0 / n_B0. A symmetric seed can never
  /// break the sublattice symmetry.
  Seed seed = AsymmetricCoherent{};
  double n_A0 = 1.0;
  double n_B0 = 0.0;
  /// When set, every node uses t_ch = t_ch_per_U * U.
  std::optional<double> t_ch_per_U;
  double t_final = 300.0;
  IntegratorControls integrator;
  ClassifierControls classifier;
  TruncationPolicy truncation;
  /// 0 means hardware concurrency.
  int workers = 0;

  /// Throws InvalidInput.
  void validate() const;
};

bool is_sweep_parameter(const std::string& name);

struct PhaseRow {
  double axis1 = 0.0;
  std::optional<double> axis2;
  /// Empty for an inconclusive node.
  std::optional<PhaseKind> kind;
  double delta_n = 0.0;
  std::optional<double> period;
  double residual = 0.0;
  int n_max_used = 0;
  /// Failure description for inconclusive nodes.
  std::string detail;
};

struct PhaseTable {
  std::string axis1_name;
  std::optional<std::string> axis2_name;
  std::vector<double> axis1_values;
  std::vector<double> axis2_values;
  /// Row-major: axis1 outer, axis2 inner.
  std::vector<PhaseRow> rows;

  const PhaseRow& at(std::size_t i1, std::size_t i2 = 0) const;
};

/// Parameters and seed for a single node.
struct NodeSetup {
  ModelParams params;
  Seed seed;
};

NodeSetup node_setup(const SweepSpec& spec, double v1, std::optional<double> v2);

/// Simulates and classifies one node, retrying once with doubled t_final when
/// the first attempt is inconclusive. Never throws for numerical failures.
PhaseRow evaluate_node(const SweepSpec& spec, double v1, std::optional<double> v2);

using SweepProgress = std::function<void(std::size_t done, std::size_t total)>;

PhaseTable run_sweep(const SweepSpec& spec, const SweepProgress& progress = {});

/// CSV with header `axis1,axis2,phase,delta_n,period,residual,n_max_used`.
void write_csv(std::ostream& out, const PhaseTable& table);

/// Midpoint between the first Crystal node of a one-dimensional table and the
/// last classified non-Crystal node before it. Inconclusive nodes in between
/// widen the bracket.
std::optional<double> first_crystal_transition(const PhaseTable& table);

struct BoundaryPoint {
  double axis1 = 0.0;
  double axis2 = 0.0;
};
using Polyline = std::vector<BoundaryPoint>;

struct Boundaries {
  /// Contour Delta n = epsilon.
  std::vector<Polyline> crystal;
  /// Contour of the Oscillating indicator at 1/2.
  std::vector<Polyline> oscillating;
};

/// Marching squares on a two-dimensional table. Cells touching an
/// inconclusive node are skipped.
Boundaries extract_boundary(const PhaseTable& table, double epsilon);

/// Marching squares of `field` (row-major, n1 x n2) at level zero.
std::vector<Polyline> contour_zero(const std::vector<double>& field, const std::vector<double>& x1,
                                   const std::vector<double>& x2);

struct TransitionBracket {
  double lo = 0.0;
  double hi = 0.0;

  double midpoint() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
};

/// Bisection of the Uniform -> Crystal transition along spec.axis1 within
/// [lo, hi]. Returns nullopt unless the node at lo is non-Crystal and the node
/// at hi is Crystal; throws Inconclusive if either end cannot be classified.
/// Refinement stops at width `tol` or at the first unclassifiable probe, so
/// the returned bracket can be wider than `tol` close to critical slowing down.
std::optional<TransitionBracket> bisect_transition(const SweepSpec& spec, double lo, double hi,
                                                   double tol);

}  // namespace cavarray
