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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cavarray/error.hpp"
#include "cavarray/fock.hpp"
#include "cavarray/model.hpp"

namespace cavarray {
namespace {

DensityMatrix random_density(int dim, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(g(rng), g(rng));
  DensityMatrix rho = m * m.adjoint();
  return rho / rho.trace();
}

Operator random_hermitian(int dim, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Operator m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(g(rng), g(rng));
  return 0.5 * (m + m.adjoint());
}

MeanFields random_fields(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  MeanFields mf;
  mf.a = Complex(u(rng), u(rng));
  mf.n = std::abs(u(rng)) * 2.0;
  mf.adag_adag_a = Complex(u(rng), u(rng));
  mf.a_a = Complex(u(rng), u(rng));
  return mf;
}

TEST(ModelParams, Validation) {
  ModelParams p;
  EXPECT_NO_THROW(p.validate());
  p.kappa = 0.0;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.n_max = 0;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.hard_core = true;
  p.n_max = 3;
  EXPECT_THROW(p.validate(), Error);
  p.n_max = 1;
  EXPECT_NO_THROW(p.validate());
  p = {};
  p.omega = std::nan("");
  EXPECT_THROW(p.validate(), Error);
}

TEST(MeanFieldHamiltonian, AllZero) {
  const Operator H = build_mf_hamiltonian({}, {}, FockSpace(4));
  EXPECT_EQ(H.norm(), 0.0);
}

TEST(MeanFieldHamiltonian, OnSiteKerr) {
  ModelParams p;
  p.U = 1.0;
  const Operator H = build_mf_hamiltonian(p, {}, FockSpace(3));
  Operator expected = Operator::Zero(3, 3);
  expected(2, 2) = 2.0;
  EXPECT_EQ((H - expected).norm(), 0.0);
}

TEST(MeanFieldHamiltonian, CrossKerrShift) {
  ModelParams p;
  p.zV = 0.6;
  MeanFields mf;
  mf.n = 1.0;
  const Operator H = build_mf_hamiltonian(p, mf, FockSpace(3));
  EXPECT_NEAR(H(0, 0).real(), 0.0, 1e-15);
  EXPECT_NEAR(H(1, 1).real(), 0.6, 1e-15);
  EXPECT_NEAR(H(2, 2).real(), 1.2, 1e-15);
  EXPECT_EQ((H - Operator(H.diagonal().asDiagonal())).norm(), 0.0);
}

TEST(MeanFieldHamiltonian, HardCoreDropsKerr) {
  ModelParams p;
  p.U = 5.0;
  p.hard_core = true;
  const Operator H = build_mf_hamiltonian(p, {}, FockSpace(2));
  EXPECT_EQ(H.norm(), 0.0);
  EXPECT_THROW(build_mf_hamiltonian(p, {}, FockSpace(3)), Error);
}

TEST(MeanFieldHamiltonian, RejectsSpaceNotMatchingNmax) {
  ModelParams p;
  p.n_max = 4;
  try {
    build_mf_hamiltonian(p, {}, FockSpace(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(MeanFieldHamiltonian, HoppingSignAndDrive) {
  ModelParams p;
  p.zJ = 0.5;
  p.omega = 0.2;
  MeanFields mf;
  mf.a = Complex(0.3, 0.4);
  const FockSpace s(5);
  const Operator H = build_mf_hamiltonian(p, mf, s);
  const Operator a = annihilation(s);
  const Operator expected = 0.2 * (a + a.adjoint()) - 0.5 * (std::conj(mf.a) * a + mf.a * a.adjoint());
  EXPECT_LT((H - expected).norm(), 1e-15);
}

TEST(MeanFieldHamiltonian, HermitianForRandomInputs) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    ModelParams p;
    p.delta = u(rng);
    p.omega = u(rng);
    p.zJ = u(rng);
    p.U = u(rng);
    p.zV = u(rng);
    p.t_ch = u(rng);
    const Operator H = build_mf_hamiltonian(p, random_fields(rng), FockSpace(2 + trial % 9));
    EXPECT_LT((H - H.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(MeanFieldHamiltonian, DecoupledLimitIsDrivenCavity) {
  std::mt19937 rng(5);
  ModelParams p;
  p.delta = 0.7;
  p.omega = 0.9;
  const FockSpace s(8);
  const Operator a = annihilation(s);
  const Operator expected = -0.7 * number(s) + 0.9 * (a + a.adjoint());
  for (int trial = 0; trial < 5; ++trial) {
    const Operator H = build_mf_hamiltonian(p, random_fields(rng), s);
    EXPECT_LT((H - expected).norm(), 1e-14);
  }
}

TEST(CorrelatedHopping, ZeroStrengthOrVacuumFields) {
  std::mt19937 rng(3);
  EXPECT_EQ(build_ch_mf(0.0, random_fields(rng), FockSpace(5)).norm(), 0.0);
  EXPECT_EQ(build_ch_mf(1.3, MeanFields{}, FockSpace(5)).norm(), 0.0);
}

// Element-wise expansion of the three term families, independent of the
// operator products used by the implementation.
Operator ch_reference(double t, const MeanFields& mf, int d) {
  Operator h = Operator::Zero(d, d);
  for (int n = 0; n + 1 < d; ++n) {
    // a |n+1> = sqrt(n+1) |n>
    h(n, n + 1) += mf.adag_adag_a * std::sqrt(n + 1.0);
    // a^dag a^dag a |n> = n sqrt(n+1) |n+1>
    h(n + 1, n) += mf.a * (n * std::sqrt(n + 1.0));
  }
  for (int n = 0; n + 2 < d; ++n) {
    // a^dag a^dag |n> = sqrt((n+1)(n+2)) |n+2>
    h(n + 2, n) += -0.5 * mf.a_a * std::sqrt((n + 1.0) * (n + 2.0));
  }
  return t * (h + h.adjoint());
}

TEST(CorrelatedHopping, SingleFieldCase) {
  MeanFields mf;
  mf.a = 0.3;
  const FockSpace s(3);
  const Operator a = annihilation(s);
  const Operator ad = a.adjoint();
  const Operator expected = 0.3 * (ad * ad * a + ad * a * a);
  EXPECT_LT((build_ch_mf(1.0, mf, s) - expected).norm(), 1e-15);
  EXPECT_LT((build_ch_mf(1.0, mf, s) - ch_reference(1.0, mf, 3)).norm(), 1e-15);
}

TEST(CorrelatedHopping, MatchesElementwiseExpansion) {
  std::mt19937 rng(19);
  for (int d : {2, 3, 6, 12}) {
    const MeanFields mf = random_fields(rng);
    const Operator H = build_ch_mf(-0.8, mf, FockSpace(d));
    EXPECT_LT((H - ch_reference(-0.8, mf, d)).norm(), 1e-13) << "dim " << d;
    EXPECT_LT((H - H.adjoint()).norm(), 1e-15);
  }
}

TEST(Lindblad, VacuumIsDark) {
  const FockSpace s(4);
  const DensityMatrix rho = projector(fock_state(0, s));
  EXPECT_EQ(lindblad_rhs(rho, Operator::Zero(4, 4), 1.0).norm(), 0.0);
}

TEST(Lindblad, SinglePhotonDecay) {
  const FockSpace s(4);
  const DensityMatrix rho = projector(fock_state(1, s));
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(4, 4);
  expected(0, 0) = 1.0;
  expected(1, 1) = -1.0;
  EXPECT_LT((lindblad_rhs(rho, Operator::Zero(4, 4), 1.0) - expected).norm(), 1e-15);
}

TEST(Lindblad, TraceAndHermiticityPreserved) {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + trial % 10;
    const DensityMatrix rho = random_density(d, rng);
    const Operator H = random_hermitian(d, rng);
    const Eigen::MatrixXcd r = lindblad_rhs(rho, H, 1.0);
    EXPECT_LT(std::abs(r.trace()), 1e-13);
    EXPECT_LT((r - r.adjoint()).cwiseAbs().maxCoeff(), 1e-13);
    const Eigen::MatrixXcd r_adj = lindblad_rhs(rho.adjoint(), H, 1.0).adjoint();
    EXPECT_LT((r_adj - r).cwiseAbs().maxCoeff(), 1e-13);
  }
}

// Direct transcription of -i[H, rho] + (kappa/2)(2 a rho a^dag - n rho - rho n).
Eigen::MatrixXcd lindblad_reference(const DensityMatrix& rho, const Operator& H, double kappa) {
  const FockSpace s(int(rho.rows()));
  const Operator a = annihilation(s);
  const Operator n = a.adjoint() * a;
  const Complex i(0.0, 1.0);
  return -i * (H * rho - rho * H) +
         0.5 * kappa * (2.0 * a * rho * a.adjoint() - n * rho - rho * n);
}

TEST(Lindblad, FastPathsAgreeWithDefinition) {
  std::mt19937 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 15;
    const DensityMatrix rho = random_density(d, rng);
    ModelParams p;
    p.delta = 0.3;
    p.omega = 0.7;
    p.zJ = 0.4;
    p.U = 0.5;
    p.zV = 0.2;
    p.t_ch = trial % 2 ? -0.5 : 0.0;
    const Operator H = build_mf_hamiltonian(p, random_fields(rng), FockSpace(d));
    const Eigen::MatrixXcd ref = lindblad_reference(rho, H, 0.8);
    EXPECT_LT((lindblad_rhs(rho, H, 0.8) - ref).norm(), 1e-12);
    Eigen::MatrixXcd out, scratch;
    lindblad_rhs_into(rho, H, 0.8, out, operator_bandwidth(H));
    EXPECT_LT((out - ref).norm(), 1e-12);
    lindblad_rhs_hermitian_into(rho, H, 0.8, operator_bandwidth(H), scratch, out);
    EXPECT_LT((out - ref).norm(), 1e-12);
  }
}

TEST(Bandwidth, OfModelOperators) {
  ModelParams p;
  p.omega = 1.0;
  EXPECT_EQ(operator_bandwidth(build_mf_hamiltonian(p, {}, FockSpace(6))), 1);
  p.t_ch = 1.0;
  MeanFields mf;
  mf.a_a = 0.2;
  EXPECT_EQ(operator_bandwidth(build_mf_hamiltonian(p, mf, FockSpace(6))), 2);
}

TEST(CriticalV, LimitingValues) {
  EXPECT_NEAR(critical_V_analytic(0.0, 0.75, CriticalLimit::HardCore).zV_c, 5.733, 1e-3);
  EXPECT_NEAR(critical_V_analytic(0.0, 0.75, CriticalLimit::FreeU0).zV_c, 0.444, 1e-3);
  EXPECT_NEAR(critical_V_analytic(0.0, 0.5, CriticalLimit::FreeU0).zV_c, 1.0, 1e-15);
}

TEST(CriticalV, ClosedFormIndependentEvaluation) {
  // gamma_inf = 4 delta^2 + 8 Omega^2 + 1 = 1 + 8 * 0.5625 = 5.5
  const double gamma = 5.5;
  EXPECT_NEAR(critical_V_analytic(0.0, 0.75, CriticalLimit::HardCore).zV_c,
              gamma * std::sqrt(gamma) / (4.0 * 0.5625), 1e-12);
  const CriticalV c = critical_V_analytic(0.3, 1.0, CriticalLimit::FreeU0);
  EXPECT_NEAR(c.gamma, 1.36, 1e-14);
  EXPECT_NEAR(c.zV_c, 1.36 * (-0.6 + std::sqrt(1.36)) / 4.0, 1e-14);
  EXPECT_FALSE(c.caveat.empty());
}

TEST(CriticalV, HardCoreAboveFreeLimit) {
  for (double omega = 0.05; omega < 5.0; omega += 0.05) {
    EXPECT_GE(critical_V_analytic(0.0, omega, CriticalLimit::HardCore).zV_c,
              critical_V_analytic(0.0, omega, CriticalLimit::FreeU0).zV_c);
  }
}

TEST(CriticalV, ZeroDriveRejected) {
  EXPECT_THROW(critical_V_analytic(0.0, 0.0, CriticalLimit::HardCore), Error);
}

}  // namespace
}  // namespace cavarray
