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

#include <iosfwd>
#include <vector>

#include "cavarray/fock.hpp"
#include "cavarray/model.hpp"
#include "cavarray/state.hpp"

namespace cavarray {

Complex expectation(const Operator& op, const DensityMatrix& rho);

/// <a>, <n>, <a^dag a^dag a>, <a a> of a single-site state in one pass.
MeanFields single_site_fields(const DensityMatrix& rho);

struct SublatticeFields {
  MeanFields A;
  MeanFields B;
};

SublatticeFields mf_expectations(const MeanFieldState& state);

/// Wigner function sampled on a rectangular grid, values(i, j) = W(xs[i], ps[j]),
/// normalized so that the integral over the plane is one.
struct WignerGrid {
  std::vector<double> xs;
  std::vector<double> ps;
  Eigen::MatrixXd values;
  /// Largest |Im W| seen while summing the Fock-basis kernels.
  double max_imag_residue = 0.0;

  double integral() const;
  double min() const { return values.minCoeff(); }
  double max() const { return values.maxCoeff(); }
};

WignerGrid wigner(const DensityMatrix& rho, const std::vector<double>& xs,
                  const std::vector<double>& ps);

/// `count` evenly spaced points on [lo, hi].
std::vector<double> linspace(double lo, double hi, int count);

/// CSV with header `x,p,W`, rows ordered by x then p.
void write_csv(std::ostream& out, const WignerGrid& grid);

}  // namespace cavarray
