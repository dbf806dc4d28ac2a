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

#include "cavarray/model.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cavarray/error.hpp"

namespace cavarray {

namespace {

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void ModelParams::validate() const {
  for (double v : {delta, omega, zJ, U, zV, kappa, t_ch}) {
    if (!finite(v)) throw Error(ErrorKind::InvalidInput, "non-finite model parameter");
  }
  if (kappa <= 0.0) throw Error(ErrorKind::InvalidInput, "kappa must be positive");
  if (n_max && *n_max < 1) throw Error(ErrorKind::InvalidInput, "n_max must be >= 1");
  if (hard_core && n_max && *n_max != 1) {
    throw Error(ErrorKind::InvalidInput, "hard-core model requires n_max = 1");
  }
}

Operator build_ch_mf(double t_ch, const MeanFields& mf, FockSpace space) {
  const int d = space.dim();
  if (t_ch == 0.0) return Operator::Zero(d, d);
  const Operator a = annihilation(space);
  const Operator ad = a.adjoint();
  const Operator adad = ad * ad;
  const Operator terms = a * mf.adag_adag_a + (adad * a) * mf.a - 0.5 * adad * mf.a_a;
  return t_ch * (terms + terms.adjoint());
}

Operator build_mf_hamiltonian(const ModelParams& params, const MeanFields& mf,
                              FockSpace space) {
  if (params.hard_core && space.dim() != 2) {
    throw Error(ErrorKind::DimensionMismatch, "hard-core model lives in dimension 2");
  }
  if (params.n_max && space.dim() != *params.n_max + 1) {
    throw Error(ErrorKind::DimensionMismatch,
                "space dimension does not match n_max + 1");
  }
  const int d = space.dim();
  Operator H = Operator::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    double diag = -params.delta * k + params.zV * mf.n * k;
    if (!params.hard_core) diag += params.U * k * (k - 1);
    H(k, k) = diag;
  }
  // Drive and decoupled hopping only touch the first off-diagonal:
  // Omega (a^dag + a) - zJ (conj(<a>) a + <a> a^dag).
  const Complex lower = params.omega - params.zJ * mf.a;  // coefficient of a^dag
  for (int k = 0; k + 1 < d; ++k) {
    const double s = std::sqrt(double(k + 1));
    H(k + 1, k) += lower * s;
    H(k, k + 1) += std::conj(lower) * s;
  }
  if (params.t_ch != 0.0) H += build_ch_mf(params.t_ch, mf, space);
  return H;
}

int operator_bandwidth(const Operator& op, double tol) {
  const int d = int(op.rows());
  int bw = 0;
  for (int q = 0; q < d; ++q) {
    for (int p = 0; p < d; ++p) {
      if (std::abs(op(p, q)) > tol) bw = std::max(bw, std::abs(p - q));
    }
  }
  return bw;
}

void lindblad_rhs_into(const DensityMatrix& rho, const Operator& H, double kappa,
                       Eigen::MatrixXcd& out, int bandwidth) {
  const int d = int(rho.rows());
  if (rho.cols() != d || H.rows() != d || H.cols() != d) {
    throw Error(ErrorKind::DimensionMismatch, "lindblad_rhs shape mismatch");
  }
  const int bw = bandwidth < 0 ? operator_bandwidth(H) : std::min(bandwidth, d - 1);
  out.resize(d, d);
  const Complex minus_i(0.0, -1.0);
  for (int q = 0; q < d; ++q) {
    for (int p = 0; p < d; ++p) {
      Complex comm = 0.0;
      const int k0 = std::max(0, p - bw), k1 = std::min(d - 1, p + bw);
      for (int k = k0; k <= k1; ++k) comm += H(p, k) * rho(k, q);
      const int l0 = std::max(0, q - bw), l1 = std::min(d - 1, q + bw);
      for (int l = l0; l <= l1; ++l) comm -= rho(p, l) * H(l, q);
      Complex diss = -0.5 * double(p + q) * rho(p, q);
      if (p + 1 < d && q + 1 < d) {
        diss += std::sqrt(double((p + 1) * (q + 1))) * rho(p + 1, q + 1);
      }
      out(p, q) = minus_i * comm + kappa * diss;
    }
  }
}

void lindblad_rhs_hermitian_into(const DensityMatrix& rho, const Operator& H,
                                 double kappa, int bandwidth, Eigen::MatrixXcd& scratch,
                                 Eigen::MatrixXcd& out) {
  const int d = int(rho.rows());
  const int bw = std::min(bandwidth, d - 1);
  scratch.resize(d, d);
  out.resize(d, d);
  const Complex* h = H.data();
  const Complex* r = rho.data();
  Complex* x = scratch.data();
  Complex* o = out.data();
  thread_local std::vector<double> root;
  if (int(root.size()) < d + 1) {
    root.resize(d + 1);
    for (int k = 0; k <= d; ++k) root[k] = std::sqrt(double(k));
  }
  // x = H rho, column by column; for Hermitian rho, rho H = x^dagger.
  for (int q = 0; q < d; ++q) {
    const Complex* rq = r + q * d;
    Complex* xq = x + q * d;
    for (int p = 0; p < d; ++p) xq[p] = 0.0;
    for (int k = 0; k < d; ++k) {
      const Complex rk = rq[k];
      const Complex* hk = h + k * d;
      const int p0 = k > bw ? k - bw : 0;
      const int p1 = k + bw < d ? k + bw : d - 1;
      for (int p = p0; p <= p1; ++p) xq[p] += hk[p] * rk;
    }
  }
  for (int q = 0; q < d; ++q) {
    for (int p = 0; p <= q; ++p) {
      const Complex comm = x[p + q * d] - std::conj(x[q + p * d]);
      Complex diss = -0.5 * double(p + q) * r[p + q * d];
      if (q + 1 < d) diss += (root[p + 1] * root[q + 1]) * r[(p + 1) + (q + 1) * d];
      const Complex v(comm.imag() + kappa * diss.real(), -comm.real() + kappa * diss.imag());
      o[p + q * d] = v;
      o[q + p * d] = std::conj(v);
    }
  }
  for (int p = 0; p < d; ++p) o[p + p * d] = o[p + p * d].real();
}

Eigen::MatrixXcd lindblad_rhs(const DensityMatrix& rho, const Operator& H,
                              double kappa) {
  Eigen::MatrixXcd out;
  lindblad_rhs_into(rho, H, kappa, out);
  return out;
}

CriticalV critical_V_analytic(double delta, double omega, CriticalLimit limit) {
  if (omega == 0.0) {
    throw Error(ErrorKind::InvalidInput, "critical_V_analytic: division by zero drive");
  }
  CriticalV out;
  out.gamma = limit == CriticalLimit::HardCore
                  ? 4.0 * delta * delta + 8.0 * omega * omega + 1.0
                  : 4.0 * delta * delta + 1.0;
  out.zV_c = out.gamma * (-2.0 * delta + std::sqrt(out.gamma)) / (4.0 * omega * omega);
  out.caveat = delta == 0.0
                   ? "exact threshold at zero detuning"
                   : "small-detuning approximation; not exact for delta != 0";
  return out;
}

}  // namespace cavarray
