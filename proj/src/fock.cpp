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

#include "cavarray/fock.hpp"

#include <cmath>
#include <string>

#include "cavarray/error.hpp"

namespace cavarray {

FockSpace::FockSpace(int dim) : dim_(dim) {
  if (dim < 2) {
    throw Error(ErrorKind::InvalidSpace,
                "Fock space dimension must be >= 2, got " + std::to_string(dim));
  }
}

Operator identity(FockSpace space) {
  return Operator::Identity(space.dim(), space.dim());
}

Operator annihilation(FockSpace space) {
  const int d = space.dim();
  Operator a = Operator::Zero(d, d);
  for (int n = 0; n + 1 < d; ++n) a(n, n + 1) = std::sqrt(double(n + 1));
  return a;
}

Operator creation(FockSpace space) { return annihilation(space).adjoint(); }

Operator number(FockSpace space) {
  const int d = space.dim();
  Operator n = Operator::Zero(d, d);
  for (int k = 0; k < d; ++k) n(k, k) = double(k);
  return n;
}

StateVector coherent_state(Complex alpha, FockSpace space) {
  const double mean = std::norm(alpha);
  if (mean > 0.5 * (space.dim() - 1)) {
    throw Error(ErrorKind::TruncationRisk,
                "coherent state |alpha|^2 = " + std::to_string(mean) +
                    " too large for dimension " + std::to_string(space.dim()));
  }
  StateVector psi(space.dim());
  // alpha^n / sqrt(n!) by recurrence; the Gaussian prefactor drops out on
  // renormalization.
  Complex c = 1.0;
  for (int n = 0; n < space.dim(); ++n) {
    psi(n) = c;
    c *= alpha / std::sqrt(double(n + 1));
  }
  psi.normalize();
  return psi;
}

StateVector fock_state(int n, FockSpace space) {
  if (n < 0 || n >= space.dim()) {
    throw Error(ErrorKind::TruncationRisk,
                "Fock level " + std::to_string(n) + " outside dimension " +
                    std::to_string(space.dim()));
  }
  StateVector psi = StateVector::Zero(space.dim());
  psi(n) = 1.0;
  return psi;
}

DensityMatrix projector(const StateVector& psi) { return psi * psi.adjoint(); }

Operator adjoint(const Operator& op) { return op.adjoint(); }

Operator commutator(const Operator& a, const Operator& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "commutator of mismatched operators");
  }
  return a * b - b * a;
}

}  // namespace cavarray
