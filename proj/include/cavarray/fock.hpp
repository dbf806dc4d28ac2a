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

#include <complex>

#include <Eigen/Dense>

namespace cavarray {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using DensityMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

/// Truncated single-mode Fock space spanned by |0>, ..., |dim-1>.
/// The top level is a hard wall: a^dagger maps |dim-1> to zero.
class FockSpace {
 public:
  explicit FockSpace(int dim);

  int dim() const noexcept { return dim_; }
  int n_max() const noexcept { return dim_ - 1; }

  friend bool operator==(FockSpace, FockSpace) = default;

 private:
  int dim_;
};

Operator identity(FockSpace space);
Operator annihilation(FockSpace space);
Operator creation(FockSpace space);
Operator number(FockSpace space);

/// Coherent state truncated to `space` and renormalized. Requires
/// |alpha|^2 <= (dim - 1) / 2 so the discarded tail stays negligible.
StateVector coherent_state(Complex alpha, FockSpace space);
StateVector fock_state(int n, FockSpace space);

DensityMatrix projector(const StateVector& psi);

Operator adjoint(const Operator& op);
Operator commutator(const Operator& a, const Operator& b);

}  // namespace cavarray
