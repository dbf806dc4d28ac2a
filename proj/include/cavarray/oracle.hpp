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

#include <Eigen/Sparse>

#include "cavarray/fock.hpp"
#include "cavarray/model.hpp"

namespace cavarray {

enum class Geometry { OpenChain, PeriodicChain };

struct LatticeSpec {
  int n_sites = 1;
  Geometry geometry = Geometry::OpenChain;
  int n_max = 1;
  long dim_cap = 4096;

  int site_dim() const { return n_max + 1; }
  long dim() const;
  /// Nearest-neighbour pairs (i, j) with i < j.
  std::vector<std::pair<int, int>> bonds() const;
  /// Throws DimensionCap when (n_max + 1)^n_sites exceeds dim_cap.
  void validate() const;
};

/// Bare per-bond couplings for the lattice Hamiltonian. Mean-field
/// parameters carry z-scaled hopping and cross-Kerr; convert explicitly.
struct LatticeCouplings {
  double delta = 0.0;
  double omega = 0.0;
  double J = 0.0;
  double U = 0.0;
  double V = 0.0;
  double t_ch = 0.0;
  double kappa = 1.0;
  bool hard_core = false;

  static LatticeCouplings from_scaled(const ModelParams& params, int z);
};

using SparseOperator = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

SparseOperator build_lattice_hamiltonian(const LatticeSpec& spec,
                                         const LatticeCouplings& couplings);

/// Single-site operator `op` acting on `site` of the tensor-product space.
SparseOperator embed(const Operator& op, int site, const LatticeSpec& spec);

struct LatticeState {
  DensityMatrix rho;
  LatticeSpec spec;
  /// ||L rho||_F of the returned state.
  double residual = 0.0;
};

enum class SteadyStateMethod { NullSpace, LongTime };

struct SteadyStateControls {
  long nullspace_dim_cap = 64;
  double residual_tol = 1e-8;
  double t_max = 5000.0;
  /// Relative pivot threshold deciding the Liouvillian kernel dimension.
  double kernel_tol = 1e-10;
  int workers = 1;
  /// LongTime integrates the Fock-diagonal part of the generator exactly
  /// (ETDRK4) up to this dimension and falls back to RK4 above it, where the
  /// per-element coefficient tables no longer fit comfortably in memory.
  long exponential_dim_cap = 2048;
};

LatticeState steady_state(const LatticeSpec& spec, const LatticeCouplings& couplings,
                          SteadyStateMethod method, const SteadyStateControls& controls = {});

/// Matrix-free Liouvillian action on a lattice density matrix.
class LatticeLiouvillian {
 public:
  LatticeLiouvillian(const LatticeSpec& spec, const LatticeCouplings& couplings);

  void apply(const DensityMatrix& rho, Eigen::MatrixXcd& out, int workers = 1) const;
  const SparseOperator& hamiltonian() const { return H_; }
  /// Bound on the Liouvillian spectral radius used to pick a stable RK4 step.
  double spectral_bound() const { return spectral_bound_; }
  /// Generator restricted to |p><q| -> |p><q|: -i(E_p - E_q) - kappa (N_p + N_q) / 2.
  Complex diagonal(long p, long q) const;
  /// Bound on the remainder once the diagonal part is removed.
  double off_diagonal_bound() const { return off_diagonal_bound_; }

 private:
  void apply_columns(const DensityMatrix& rho, Eigen::MatrixXcd& out, long q0, long q1) const;

  struct Jump {
    long stride;
    std::vector<double> coeff;  // sqrt(n_i + 1) or 0 at the truncation wall
  };

  LatticeSpec spec_;
  double kappa_;
  SparseOperator H_;
  std::vector<double> energies_;
  std::vector<double> total_number_;
  std::vector<Jump> jumps_;
  double spectral_bound_ = 0.0;
  double off_diagonal_bound_ = 0.0;
};

/// Dense Liouvillian superoperator (column-stacking convention), built from
/// Kronecker products. Only for small spaces.
Eigen::MatrixXcd dense_liouvillian(const LatticeSpec& spec, const LatticeCouplings& couplings);

std::vector<double> site_occupations(const LatticeState& state);

/// <a_i^dag a_j^dag a_j a_i> / (<n_i><n_j>).
double g2(const LatticeState& state, int i, int j);

DensityMatrix reduced_density(const LatticeState& state, int site);

DensityMatrix product_state(const std::vector<DensityMatrix>& factors);

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

struct G2Row {
  int i = 0;
  int j = 0;
  int r = 0;
  double g2 = 0.0;
};

/// g2(reference, j) for every other site j.
std::vector<G2Row> g2_table(const LatticeState& state, int reference);

/// Bond distance between two sites; wraps around on periodic chains.
int chain_distance(const LatticeSpec& spec, int i, int j);

/// Mean of g2(i, j) over all site pairs at each distance r; entry 0 is the
/// mean on-site value.
std::vector<double> g2_by_distance(const LatticeState& state);

/// CSV with header `i,j,r,g2`.
void write_csv(std::ostream& out, const std::vector<G2Row>& rows);

}  // namespace cavarray
