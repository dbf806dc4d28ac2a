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

#include "cavarray/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <string>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "cavarray/error.hpp"

namespace cavarray {

long LatticeSpec::dim() const {
  long d = 1;
  for (int i = 0; i < n_sites; ++i) d *= site_dim();
  return d;
}

std::vector<std::pair<int, int>> LatticeSpec::bonds() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i + 1 < n_sites; ++i) out.emplace_back(i, i + 1);
  if (geometry == Geometry::PeriodicChain && n_sites > 2) out.emplace_back(0, n_sites - 1);
  return out;
}

void LatticeSpec::validate() const {
  if (n_sites < 1) throw Error(ErrorKind::InvalidInput, "lattice needs at least one site");
  if (n_max < 1) throw Error(ErrorKind::InvalidInput, "lattice n_max must be >= 1");
  double d = std::pow(double(site_dim()), n_sites);
  if (d > double(dim_cap)) {
    throw Error(ErrorKind::DimensionCap,
                "lattice dimension " + std::to_string(long(d)) + " exceeds cap " +
                    std::to_string(dim_cap));
  }
}

LatticeCouplings LatticeCouplings::from_scaled(const ModelParams& params, int z) {
  if (z < 1) throw Error(ErrorKind::InvalidInput, "coordination number must be >= 1");
  LatticeCouplings c;
  c.delta = params.delta;
  c.omega = params.omega;
  c.J = params.zJ / z;
  c.U = params.U;
  c.V = params.zV / z;
  c.t_ch = params.t_ch / z;
  c.kappa = params.kappa;
  c.hard_core = params.hard_core;
  return c;
}

namespace {

using Triplet = Eigen::Triplet<Complex>;

std::vector<long> strides(const LatticeSpec& spec) {
  std::vector<long> s(spec.n_sites);
  long acc = 1;
  for (int i = spec.n_sites - 1; i >= 0; --i) {
    s[i] = acc;
    acc *= spec.site_dim();
  }
  return s;
}

int digit(long state, long stride, int d) { return int((state / stride) % d); }

class TermBuilder {
 public:
  explicit TermBuilder(const LatticeSpec& spec)
      : spec_(spec), dim_(spec.dim()), strides_(strides(spec)) {}

  void one_site(const Operator& op, int site, Complex coeff) {
    if (coeff == 0.0) return;
    const int d = spec_.site_dim();
    for (long s = 0; s < dim_; ++s) {
      const int n = digit(s, strides_[site], d);
      for (int p = 0; p < d; ++p) {
        const Complex v = op(p, n);
        if (v == 0.0) continue;
        triplets_.emplace_back(s + (p - n) * strides_[site], s, coeff * v);
      }
    }
  }

  void two_site(const Operator& op_i, int i, const Operator& op_j, int j, Complex coeff) {
    if (coeff == 0.0) return;
    const int d = spec_.site_dim();
    for (long s = 0; s < dim_; ++s) {
      const int ni = digit(s, strides_[i], d);
      const int nj = digit(s, strides_[j], d);
      for (int p = 0; p < d; ++p) {
        const Complex vi = op_i(p, ni);
        if (vi == 0.0) continue;
        for (int q = 0; q < d; ++q) {
          const Complex vj = op_j(q, nj);
          if (vj == 0.0) continue;
          triplets_.emplace_back(s + (p - ni) * strides_[i] + (q - nj) * strides_[j], s,
                                 coeff * vi * vj);
        }
      }
    }
  }

  SparseOperator finish() {
    SparseOperator H(dim_, dim_);
    H.setFromTriplets(triplets_.begin(), triplets_.end());
    H.prune(Complex(0.0));
    H.makeCompressed();
    return H;
  }

 private:
  const LatticeSpec& spec_;
  long dim_;
  std::vector<long> strides_;
  std::vector<Triplet> triplets_;
};

}  // namespace

SparseOperator build_lattice_hamiltonian(const LatticeSpec& spec,
                                         const LatticeCouplings& c) {
  spec.validate();
  if (c.hard_core && spec.n_max != 1) {
    throw Error(ErrorKind::InvalidInput, "hard-core lattice requires n_max = 1");
  }
  const FockSpace space(spec.site_dim());
  const Operator a = annihilation(space);
  const Operator ad = a.adjoint();
  const Operator n = number(space);
  const Operator kerr = n * (n - identity(space));

  TermBuilder b(spec);
  for (int i = 0; i < spec.n_sites; ++i) {
    b.one_site(n, i, -c.delta);
    b.one_site(a + ad, i, c.omega);
    if (!c.hard_core) b.one_site(kerr, i, c.U);
  }
  const Operator adad_a = ad * ad * a;
  const Operator ad_aa = ad * a * a;
  const Operator adad = ad * ad;
  const Operator aa = a * a;
  for (const auto& [i, j] : spec.bonds()) {
    b.two_site(ad, i, a, j, -c.J);
    b.two_site(a, i, ad, j, -c.J);
    b.two_site(n, i, n, j, c.V);
    if (c.t_ch != 0.0) {
      b.two_site(a, i, adad_a, j, c.t_ch);
      b.two_site(adad_a, i, a, j, c.t_ch);
      b.two_site(adad, i, aa, j, -0.5 * c.t_ch);
      // Hermitian conjugates.
      b.two_site(ad, i, ad_aa, j, c.t_ch);
      b.two_site(ad_aa, i, ad, j, c.t_ch);
      b.two_site(aa, i, adad, j, -0.5 * c.t_ch);
    }
  }
  return b.finish();
}

SparseOperator embed(const Operator& op, int site, const LatticeSpec& spec) {
  if (site < 0 || site >= spec.n_sites) throw Error(ErrorKind::InvalidInput, "site out of range");
  TermBuilder b(spec);
  b.one_site(op, site, 1.0);
  return b.finish();
}

LatticeLiouvillian::LatticeLiouvillian(const LatticeSpec& spec, const LatticeCouplings& c)
    : spec_(spec), kappa_(c.kappa), H_(build_lattice_hamiltonian(spec, c)) {
  const long dim = spec.dim();
  const int d = spec.site_dim();
  const auto st = strides(spec);
  total_number_.assign(dim, 0.0);
  for (int i = 0; i < spec.n_sites; ++i) {
    Jump jump{st[i], std::vector<double>(dim, 0.0)};
    for (long s = 0; s < dim; ++s) {
      const int ni = digit(s, st[i], d);
      total_number_[s] += ni;
      if (ni < spec.n_max) jump.coeff[s] = std::sqrt(double(ni + 1));
    }
    jumps_.push_back(std::move(jump));
  }
  // Gershgorin bound on the spread of H plus the dissipative decay range.
  double lo = 0.0, hi = 0.0, max_radius = 0.0;
  energies_.assign(dim, 0.0);
  for (long p = 0; p < dim; ++p) {
    double centre = 0.0, radius = 0.0;
    for (SparseOperator::InnerIterator it(H_, p); it; ++it) {
      if (it.col() == p) centre = it.value().real();
      else radius += std::abs(it.value());
    }
    energies_[p] = centre;
    if (p == 0) lo = hi = centre;
    lo = std::min(lo, centre - radius);
    hi = std::max(hi, centre + radius);
    max_radius = std::max(max_radius, radius);
  }
  const double decay = kappa_ * spec.n_sites * spec.n_max;
  spectral_bound_ = std::hypot(hi - lo, decay);
  off_diagonal_bound_ = 2.0 * max_radius + decay;
}

Complex LatticeLiouvillian::diagonal(long p, long q) const {
  return {-0.5 * kappa_ * (total_number_[p] + total_number_[q]), -(energies_[p] - energies_[q])};
}

void LatticeLiouvillian::apply_columns(const DensityMatrix& rho, Eigen::MatrixXcd& out,
                                       long q0, long q1) const {
  const long dim = rho.rows();
  const int* outer = H_.outerIndexPtr();
  const int* inner = H_.innerIndexPtr();
  const Complex* val = H_.valuePtr();
  const Complex* r = rho.data();
  Complex* o = out.data();
  for (long q = q0; q < q1; ++q) {
    const Complex* rq = r + q * dim;
    Complex* oq = o + q * dim;
    // -i (H rho)_{pq}
    for (long p = 0; p < dim; ++p) {
      Complex acc = 0.0;
      for (int k = outer[p]; k < outer[p + 1]; ++k) acc += val[k] * rq[inner[k]];
      oq[p] = Complex(acc.imag(), -acc.real()) -
              (0.5 * kappa_ * (total_number_[p] + total_number_[q])) * rq[p];
    }
    // +i (rho H)_{:,q} = +i sum_k conj(H_{qk}) rho_{:,k}
    for (int k = outer[q]; k < outer[q + 1]; ++k) {
      const Complex h = std::conj(val[k]);
      const Complex coef(-h.imag(), h.real());
      const Complex* rk = r + long(inner[k]) * dim;
      for (long p = 0; p < dim; ++p) oq[p] += coef * rk[p];
    }
    for (const Jump& jump : jumps_) {
      const double cq = jump.coeff[q];
      if (cq == 0.0) continue;
      const Complex* col = r + (q + jump.stride) * dim + jump.stride;
      const double kq = kappa_ * cq;
      for (long p = 0; p < dim; ++p) {
        const double cp = jump.coeff[p];
        if (cp != 0.0) oq[p] += (kq * cp) * col[p];
      }
    }
  }
}

void LatticeLiouvillian::apply(const DensityMatrix& rho, Eigen::MatrixXcd& out,
                               int workers) const {
  const long dim = rho.rows();
  out.resize(dim, dim);
  if (workers <= 1) {
    apply_columns(rho, out, 0, dim);
    return;
  }
  std::vector<std::thread> pool;
  const long chunk = (dim + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const long q0 = w * chunk, q1 = std::min(dim, q0 + chunk);
    if (q0 < q1) pool.emplace_back([&, q0, q1] { apply_columns(rho, out, q0, q1); });
  }
  for (auto& t : pool) t.join();
}

Eigen::MatrixXcd dense_liouvillian(const LatticeSpec& spec, const LatticeCouplings& c) {
  const long n = spec.dim();
  const Eigen::MatrixXcd H = Eigen::MatrixXcd(build_lattice_hamiltonian(spec, c));
  const long N = n * n;
  Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(N, N);
  const Complex mi(0.0, -1.0);
  // vec(A rho B) = (B^T kron A) vec(rho), column stacking.
  for (long q = 0; q < n; ++q) {
    for (long p = 0; p < n; ++p) {
      for (long k = 0; k < n; ++k) {
        if (H(p, k) != 0.0) L(p + q * n, k + q * n) += mi * H(p, k);  // I kron H
        if (H(k, q) != 0.0) L(p + q * n, p + k * n) -= mi * H(k, q);  // H^T kron I
      }
    }
  }
  const FockSpace space(spec.site_dim());
  for (int i = 0; i < spec.n_sites; ++i) {
    const Eigen::MatrixXcd a = Eigen::MatrixXcd(embed(annihilation(space), i, spec));
    const Eigen::MatrixXcd num = a.adjoint() * a;
    for (long q = 0; q < n; ++q) {
      for (long l = 0; l < n; ++l) {
        const Complex aql = std::conj(a(q, l));
        if (aql == 0.0) continue;
        for (long p = 0; p < n; ++p) {
          for (long k = 0; k < n; ++k) {
            if (a(p, k) != 0.0) L(p + q * n, k + l * n) += c.kappa * aql * a(p, k);
          }
        }
      }
    }
    for (long q = 0; q < n; ++q) {
      for (long p = 0; p < n; ++p) {
        for (long k = 0; k < n; ++k) {
          if (num(p, k) != 0.0) L(p + q * n, k + q * n) -= 0.5 * c.kappa * num(p, k);
          if (num(k, q) != 0.0) L(p + q * n, p + k * n) -= 0.5 * c.kappa * num(k, q);
        }
      }
    }
  }
  return L;
}

namespace {

DensityMatrix normalized_hermitian(DensityMatrix rho) {
  rho /= rho.trace();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return rho;
}

LatticeState null_space_steady_state(const LatticeSpec& spec, const LatticeCouplings& c,
                                     const SteadyStateControls& controls) {
  const long n = spec.dim();
  if (n > controls.nullspace_dim_cap) {
    throw Error(ErrorKind::DimensionCap,
                "NullSpace needs dim <= " + std::to_string(controls.nullspace_dim_cap) +
                    ", got " + std::to_string(n));
  }
  const Eigen::MatrixXcd L = dense_liouvillian(spec, c);
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(L);
  lu.setThreshold(controls.kernel_tol);
  const long kernel_dim = L.cols() - lu.rank();
  if (kernel_dim > 1) {
    throw Error(ErrorKind::Multistability,
                "Liouvillian kernel has dimension " + std::to_string(kernel_dim));
  }
  if (kernel_dim < 1) throw Error(ErrorKind::NoSolution, "Liouvillian kernel is empty");
  const Eigen::VectorXcd v = lu.kernel().col(0);
  LatticeState out;
  out.spec = spec;
  out.rho = normalized_hermitian(Eigen::Map<const Eigen::MatrixXcd>(v.data(), n, n));
  Eigen::VectorXcd vec = Eigen::Map<const Eigen::VectorXcd>(out.rho.data(), n * n);
  out.residual = (L * vec).norm();
  return out;
}

LatticeState finish_long_time(const LatticeSpec& spec, const LatticeLiouvillian& liou,
                              const DensityMatrix& rho, int workers) {
  LatticeState out;
  out.spec = spec;
  out.rho = normalized_hermitian(rho);
  Eigen::MatrixXcd r;
  liou.apply(out.rho, r, workers);
  out.residual = r.norm();
  return out;
}

void check_progress(double residual, double t, double dt, const SteadyStateControls& controls) {
  if (!std::isfinite(residual)) {
    throw Error(ErrorKind::Stiffness, "LongTime integration diverged at dt = " + std::to_string(dt));
  }
  if (t > controls.t_max) {
    throw Error(ErrorKind::IntegrationFailure,
                "LongTime did not reach residual " + std::to_string(controls.residual_tol) +
                    " by t = " + std::to_string(controls.t_max) + " (residual " +
                    std::to_string(residual) + ")");
  }
}

LatticeState rk4_steady_state(const LatticeSpec& spec, const LatticeLiouvillian& liou,
                              const SteadyStateControls& controls) {
  const long n = spec.dim();
  DensityMatrix rho = DensityMatrix::Zero(n, n);
  rho(0, 0) = 1.0;
  Eigen::MatrixXcd k1, k2, k3, k4, stage;
  const double dt = std::min(0.1, 2.4 / std::max(liou.spectral_bound(), 1e-12));
  const int w = controls.workers;
  for (double t = 0.0;; t += dt) {
    liou.apply(rho, k1, w);
    const double residual = k1.norm();
    if (residual < controls.residual_tol) return finish_long_time(spec, liou, rho, w);
    check_progress(residual, t, dt, controls);
    stage = rho + (0.5 * dt) * k1;
    liou.apply(stage, k2, w);
    stage = rho + (0.5 * dt) * k2;
    liou.apply(stage, k3, w);
    stage = rho + dt * k3;
    liou.apply(stage, k4, w);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
}

/// phi_1, phi_2, phi_3 with phi_k(z) = sum_n z^n / (n + k)!.
std::array<Complex, 3> phi123(Complex z) {
  if (std::abs(z) < 0.5) {
    std::array<Complex, 3> out{};
    for (int k = 1; k <= 3; ++k) {
      double factorial = 1.0;
      for (int m = 2; m <= k; ++m) factorial *= m;
      Complex term = 1.0 / factorial, sum = 0.0;
      for (int m = 0; m < 24; ++m) {
        sum += term;
        term *= z / double(m + k + 1);
      }
      out[k - 1] = sum;
    }
    return out;
  }
  const Complex e = std::exp(z);
  const Complex p1 = (e - 1.0) / z;
  const Complex p2 = (e - 1.0 - z) / (z * z);
  const Complex p3 = (e - 1.0 - z - 0.5 * z * z) / (z * z * z);
  return {p1, p2, p3};
}

/// Cox-Matthews ETDRK4 with the Fock-diagonal part of the generator as the
/// linear operator. Fixed points of the full generator are fixed points of
/// the scheme, so the residual criterion is unaffected by the splitting.
LatticeState etdrk4_steady_state(const LatticeSpec& spec, const LatticeLiouvillian& liou,
                                 const SteadyStateControls& controls, double dt) {
  const long n = spec.dim();
  const long nn = n * n;
  Eigen::VectorXcd E(nn), E2(nn), Q(nn), F1(nn), F2(nn), F3(nn), L0(nn);
  for (long q = 0; q < n; ++q) {
    for (long p = 0; p < n; ++p) {
      const long k = p + q * n;
      const Complex l = liou.diagonal(p, q);
      const Complex z = dt * l;
      const auto half = phi123(0.5 * z);
      const auto full = phi123(z);
      L0[k] = l;
      E[k] = std::exp(z);
      E2[k] = std::exp(0.5 * z);
      Q[k] = 0.5 * dt * half[0];
      F1[k] = dt * (full[0] - 3.0 * full[1] + 4.0 * full[2]);
      F2[k] = dt * (full[1] - 2.0 * full[2]);
      F3[k] = dt * (4.0 * full[2] - full[1]);
    }
  }
  const int w = controls.workers;
  DensityMatrix u = DensityMatrix::Zero(n, n);
  u(0, 0) = 1.0;
  Eigen::MatrixXcd Nu, Na, Nb, Nc, stage, full;
  auto vec = [nn](Eigen::MatrixXcd& m) { return Eigen::Map<Eigen::VectorXcd>(m.data(), nn); };
  // N(x) = L x - L0 x; also returns ||L x||_F.
  auto nonlinear = [&](DensityMatrix& x, Eigen::MatrixXcd& out) {
    liou.apply(x, full, w);
    const double norm = full.norm();
    out.resize(n, n);
    vec(out) = vec(full) - L0.cwiseProduct(vec(x));
    return norm;
  };
  double initial = 0.0;
  for (double t = 0.0;; t += dt) {
    const double residual = nonlinear(u, Nu);
    if (residual < controls.residual_tol) return finish_long_time(spec, liou, u, w);
    if (t == 0.0) initial = residual;
    if (residual > 1e3 * initial) {
      throw Error(ErrorKind::Stiffness, "LongTime integration diverged at dt = " + std::to_string(dt));
    }
    check_progress(residual, t, dt, controls);
    stage.resize(n, n);
    vec(stage) = E2.cwiseProduct(vec(u)) + Q.cwiseProduct(vec(Nu));
    nonlinear(stage, Na);
    DensityMatrix a = stage;
    vec(stage) = E2.cwiseProduct(vec(u)) + Q.cwiseProduct(vec(Na));
    nonlinear(stage, Nb);
    vec(stage) = E2.cwiseProduct(vec(a)) + Q.cwiseProduct(2.0 * vec(Nb) - vec(Nu));
    nonlinear(stage, Nc);
    vec(u) = E.cwiseProduct(vec(u)) + F1.cwiseProduct(vec(Nu)) +
             2.0 * F2.cwiseProduct(vec(Na) + vec(Nb)) + F3.cwiseProduct(vec(Nc));
  }
}

LatticeState long_time_steady_state(const LatticeSpec& spec, const LatticeCouplings& c,
                                    const SteadyStateControls& controls) {
  const LatticeLiouvillian liou(spec, c);
  if (spec.dim() > controls.exponential_dim_cap) return rk4_steady_state(spec, liou, controls);
  double dt = std::min(0.5, 6.0 / std::max(liou.off_diagonal_bound(), 1e-12));
  for (int attempt = 0;; ++attempt) {
    try {
      return etdrk4_steady_state(spec, liou, controls, dt);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Stiffness || attempt == 3) throw;
      dt *= 0.5;
    }
  }
}

}  // namespace

LatticeState steady_state(const LatticeSpec& spec, const LatticeCouplings& couplings,
                          SteadyStateMethod method, const SteadyStateControls& controls) {
  spec.validate();
  if (method == SteadyStateMethod::NullSpace) return null_space_steady_state(spec, couplings, controls);
  return long_time_steady_state(spec, couplings, controls);
}

std::vector<double> site_occupations(const LatticeState& state) {
  const auto& spec = state.spec;
  const auto st = strides(spec);
  std::vector<double> occ(spec.n_sites, 0.0);
  for (long s = 0; s < spec.dim(); ++s) {
    const double p = state.rho(s, s).real();
    for (int i = 0; i < spec.n_sites; ++i) occ[i] += p * digit(s, st[i], spec.site_dim());
  }
  return occ;
}

double g2(const LatticeState& state, int i, int j) {
  const auto& spec = state.spec;
  if (i < 0 || j < 0 || i >= spec.n_sites || j >= spec.n_sites) {
    throw Error(ErrorKind::InvalidInput, "g2 site out of range");
  }
  const auto st = strides(spec);
  const int d = spec.site_dim();
  double ni = 0.0, nj = 0.0, corr = 0.0;
  for (long s = 0; s < spec.dim(); ++s) {
    const double p = state.rho(s, s).real();
    const int a = digit(s, st[i], d), b = digit(s, st[j], d);
    ni += p * a;
    nj += p * b;
    // a_i^dag a_j^dag a_j a_i is diagonal: n_i n_j, or n_i (n_i - 1) on site.
    corr += p * (i == j ? double(a) * (a - 1) : double(a) * b);
  }
  if (ni <= 1e-12 || nj <= 1e-12) {
    throw Error(ErrorKind::UndefinedCorrelator, "g2 undefined: vanishing occupation");
  }
  return corr / (ni * nj);
}

DensityMatrix reduced_density(const LatticeState& state, int site) {
  const auto& spec = state.spec;
  if (site < 0 || site >= spec.n_sites) throw Error(ErrorKind::InvalidInput, "site out of range");
  const auto st = strides(spec);
  const int d = spec.site_dim();
  const long stride = st[site];
  DensityMatrix out = DensityMatrix::Zero(d, d);
  for (long s = 0; s < spec.dim(); ++s) {
    const int a = digit(s, stride, d);
    if (a != 0) continue;
    // s enumerates the configurations of the other sites with this site empty.
    for (int x = 0; x < d; ++x) {
      for (int y = 0; y < d; ++y) out(x, y) += state.rho(s + x * stride, s + y * stride);
    }
  }
  return out;
}

DensityMatrix product_state(const std::vector<DensityMatrix>& factors) {
  if (factors.empty()) throw Error(ErrorKind::InvalidInput, "empty product");
  DensityMatrix out = factors.front();
  for (std::size_t f = 1; f < factors.size(); ++f) {
    const DensityMatrix& b = factors[f];
    DensityMatrix next(out.rows() * b.rows(), out.cols() * b.cols());
    for (long i = 0; i < out.rows(); ++i) {
      for (long j = 0; j < out.cols(); ++j) {
        next.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = out(i, j) * b;
      }
    }
    out = std::move(next);
  }
  return out;
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "trace_distance shape mismatch");
  }
  const Eigen::MatrixXcd diff = a - b;
  const Eigen::MatrixXcd herm = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

std::vector<G2Row> g2_table(const LatticeState& state, int reference) {
  std::vector<G2Row> rows;
  for (int j = 0; j < state.spec.n_sites; ++j) {
    if (j == reference) continue;
    rows.push_back({reference, j, chain_distance(state.spec, reference, j), g2(state, reference, j)});
  }
  return rows;
}

int chain_distance(const LatticeSpec& spec, int i, int j) {
  const int r = std::abs(i - j);
  return spec.geometry == Geometry::PeriodicChain ? std::min(r, spec.n_sites - r) : r;
}

std::vector<double> g2_by_distance(const LatticeState& state) {
  const int n = state.spec.n_sites;
  int r_max = 0;
  for (int j = 0; j < n; ++j) r_max = std::max(r_max, chain_distance(state.spec, 0, j));
  std::vector<double> sum(r_max + 1, 0.0);
  std::vector<int> count(r_max + 1, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const int r = chain_distance(state.spec, i, j);
      sum[r] += g2(state, i, j);
      ++count[r];
    }
  }
  for (int r = 0; r <= r_max; ++r) sum[r] /= count[r];
  return sum;
}

void write_csv(std::ostream& out, const std::vector<G2Row>& rows) {
  out << "i,j,r,g2\n";
  out.precision(12);
  for (const auto& r : rows) out << r.i << ',' << r.j << ',' << r.r << ',' << r.g2 << '\n';
}

}  // namespace cavarray
