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

#include "cavarray/dynamics.hpp"
#include "cavarray/error.hpp"
#include "cavarray/observables.hpp"

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

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorKind::Io;
}

TEST(Evolve, DecoupledSublatticesStayIdentical) {
  std::mt19937 rng(31);
  ModelParams p;
  p.delta = 0.4;
  p.omega = 0.6;
  p.U = 0.7;
  p.n_max = 7;
  const DensityMatrix rho = random_density(8, rng);
  const Trajectory traj = evolve({rho, rho, 0.0}, p, 20.0);
  for (const auto& s : traj.samples) {
    EXPECT_LT(std::abs(s.a_A - s.a_B), 1e-12);
    EXPECT_LT(std::abs(s.n_A - s.n_B), 1e-12);
  }
  EXPECT_LT((traj.final_state.rho_A - traj.final_state.rho_B).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Evolve, UndrivenVacuumIsDark) {
  ModelParams p;
  p.delta = 1.0;
  p.zJ = 2.0;
  p.U = 1.0;
  p.zV = 3.0;
  p.n_max = 4;
  const FockSpace s(5);
  const DensityMatrix vac = projector(fock_state(0, s));
  const Trajectory traj = evolve({vac, vac, 0.0}, p, 10.0);
  for (const auto& x : traj.samples) {
    EXPECT_EQ(x.n_A, 0.0);
    EXPECT_EQ(x.n_B, 0.0);
  }
}

TEST(Evolve, LinearCavitySteadyState) {
  // <a>_ss = Omega / (delta + i kappa / 2) for a driven linear cavity.
  const double omega = 0.75, delta = 0.0;
  const Complex expected = omega / Complex(delta, 0.5);
  ModelParams p;
  p.omega = omega;
  p.delta = delta;
  p.n_max = 16;
  const Trajectory traj = evolve(seed_state(SymmetricVacuum{}, FockSpace(17)), p, 80.0);
  const auto& last = traj.samples.back();
  EXPECT_NEAR(last.a_A.real(), expected.real(), 1e-6);
  EXPECT_NEAR(last.a_A.imag(), -1.5, 1e-6);
  EXPECT_NEAR(last.n_A, 2.25, 1e-6);
}

TEST(Evolve, SampleTimesStrictlyIncrease) {
  ModelParams p;
  p.omega = 0.5;
  p.n_max = 6;
  const Trajectory traj = evolve(seed_state(SymmetricVacuum{}, FockSpace(7)), p, 5.0);
  ASSERT_EQ(traj.samples.size(), 51u);
  for (std::size_t k = 1; k < traj.samples.size(); ++k) {
    EXPECT_GT(traj.samples[k].t, traj.samples[k - 1].t);
  }
  EXPECT_NEAR(traj.samples.back().t, 5.0, 1e-9);
  EXPECT_NEAR(traj.final_state.t, 5.0, 1e-9);
}

TEST(Evolve, ContinuesFromInitialTime) {
  ModelParams p;
  p.omega = 0.5;
  p.n_max = 6;
  MeanFieldState s = seed_state(SymmetricVacuum{}, FockSpace(7));
  s.t = 3.0;
  const Trajectory traj = evolve(s, p, 1.0);
  EXPECT_NEAR(traj.samples.front().t, 3.0, 1e-12);
  EXPECT_NEAR(traj.samples.back().t, 4.0, 1e-9);
}

TEST(Evolve, SublatticeExchangeSymmetry) {
  std::mt19937 rng(37);
  ModelParams p;
  p.delta = 0.3;
  p.omega = 0.8;
  p.zJ = 0.5;
  p.U = 0.4;
  p.zV = 1.2;
  p.t_ch = -0.4;
  p.n_max = 6;
  const DensityMatrix a = random_density(7, rng), b = random_density(7, rng);
  const Trajectory fwd = evolve({a, b, 0.0}, p, 10.0);
  const Trajectory rev = evolve({b, a, 0.0}, p, 10.0);
  ASSERT_EQ(fwd.samples.size(), rev.samples.size());
  for (std::size_t k = 0; k < fwd.samples.size(); ++k) {
    EXPECT_EQ(fwd.samples[k].a_A, rev.samples[k].a_B);
    EXPECT_EQ(fwd.samples[k].n_A, rev.samples[k].n_B);
  }
  EXPECT_EQ(fwd.final_state.rho_A, rev.final_state.rho_B);
}

TEST(Evolve, PhysicalityAlongTrajectory) {
  ModelParams p;
  p.delta = 0.9;
  p.omega = 0.75;
  p.zJ = 0.2;
  p.zV = 0.6;
  p.n_max = 12;
  const Trajectory traj = evolve(seed_state(AsymmetricCoherent{}, FockSpace(13)), p, 30.0);
  for (const auto& s : traj.samples) {
    EXPECT_LT(s.diagnostics.trace_deviation, 1e-8);
    EXPECT_LT(s.diagnostics.hermiticity_residual, 1e-10);
    EXPECT_GT(s.diagnostics.min_eigenvalue, -1e-8);
  }
}

TEST(Evolve, RejectsInvalidInput) {
  ModelParams p;
  p.n_max = 3;
  const MeanFieldState vac = seed_state(SymmetricVacuum{}, FockSpace(4));
  EXPECT_EQ(kind_of([&] { evolve(vac, p, 0.0); }), ErrorKind::InvalidInput);
  MeanFieldState bad = vac;
  bad.rho_A(1, 1) = 0.5;
  EXPECT_EQ(kind_of([&] { evolve(bad, p, 1.0); }), ErrorKind::InvalidInput);
  MeanFieldState mismatched = vac;
  mismatched.rho_B = projector(fock_state(0, FockSpace(3)));
  EXPECT_EQ(kind_of([&] { evolve(mismatched, p, 1.0); }), ErrorKind::DimensionMismatch);
  p.n_max = 5;
  EXPECT_EQ(kind_of([&] { evolve(vac, p, 1.0); }), ErrorKind::DimensionMismatch);
}

TEST(Evolve, HugeStepFailsAfterHalvingBudget) {
  ModelParams p;
  p.omega = 3.0;
  p.U = 40.0;
  p.zV = 30.0;
  p.n_max = 10;
  IntegratorControls c;
  c.dt = 1.0;
  c.sample_interval = 1.0;
  c.max_halvings = 1;
  const ErrorKind k = kind_of([&] { evolve(seed_state(AsymmetricCoherent{}, FockSpace(11)), p, 5.0, c); });
  EXPECT_TRUE(k == ErrorKind::Stiffness || k == ErrorKind::IntegrationFailure);
}

TEST(Evolve, HalvingRecoversFromLargeStep) {
  ModelParams p;
  p.omega = 0.75;
  p.U = 2.0;
  p.n_max = 8;
  IntegratorControls c;
  c.dt = 0.5;
  c.sample_interval = 0.5;
  const Trajectory traj = evolve(seed_state(SymmetricVacuum{}, FockSpace(9)), p, 5.0, c);
  EXPECT_LT(traj.dt_used, 0.5);
}

TEST(OrderParameter, Examples) {
  const FockSpace s(4);
  const DensityMatrix one = projector(fock_state(1, s));
  const DensityMatrix zero = projector(fock_state(0, s));
  EXPECT_EQ(order_parameter({one, one, 0.0}), 0.0);
  EXPECT_EQ(order_parameter({one, zero, 0.0}), 1.0);
  EXPECT_EQ(order_parameter({zero, one, 0.0}), 1.0);
}

TEST(OrderParameter, MatchesDiagonalSum) {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 3 + trial;
    const DensityMatrix a = random_density(d, rng), b = random_density(d, rng);
    double na = 0.0, nb = 0.0;
    for (int k = 0; k < d; ++k) {
      na += k * a(k, k).real();
      nb += k * b(k, k).real();
    }
    EXPECT_NEAR(order_parameter({a, b, 0.0}), std::abs(na - nb), 1e-13);
  }
}

TEST(SeedState, Kinds) {
  const FockSpace s(5);
  const MeanFieldState vac = seed_state(SymmetricVacuum{}, s);
  EXPECT_EQ(vac.rho_A, projector(fock_state(0, s)));
  EXPECT_EQ(vac.rho_B, vac.rho_A);

  const MeanFieldState fock = seed_state(FockOccupation{1.0, 0.0}, s);
  EXPECT_EQ(fock.rho_A, projector(fock_state(1, s)));
  EXPECT_EQ(fock.rho_B, projector(fock_state(0, s)));

  const MeanFieldState half = seed_state(FockOccupation{0.5, 0.0}, s);
  EXPECT_EQ(half.rho_A(0, 0), Complex(0.5));
  EXPECT_EQ(half.rho_A(1, 1), Complex(0.5));
  EXPECT_NEAR(half.rho_A.trace().real(), 1.0, 1e-15);

  const MeanFieldState coh = seed_state(AsymmetricCoherent{}, FockSpace(10));
  EXPECT_NEAR(single_site_fields(coh.rho_A).a.real(), 0.1, 1e-12);
  EXPECT_EQ(single_site_fields(coh.rho_B).n, 0.0);
}

TEST(SeedState, OccupationBeyondTruncation) {
  EXPECT_EQ(kind_of([] { seed_state(FockOccupation{4.5, 0.0}, FockSpace(5)); }),
            ErrorKind::InvalidInput);
  EXPECT_EQ(kind_of([] { seed_state(FockOccupation{-0.1, 0.0}, FockSpace(5)); }),
            ErrorKind::InvalidInput);
}

TEST(Classify, UniformForSymmetricStart) {
  ModelParams p;
  p.U = 1.0;
  p.omega = 0.75;
  const PointResult r = simulate(p, SymmetricVacuum{}, 300.0);
  const PhaseLabel label = classify(r.trajectory);
  EXPECT_EQ(label.kind, PhaseKind::Uniform);
  EXPECT_EQ(label.delta_n, 0.0);
  EXPECT_FALSE(label.period);
}

TEST(Classify, HardCoreCrystalAboveThreshold) {
  ModelParams p;
  p.hard_core = true;
  p.omega = 0.75;
  p.zV = 8.0;
  const PointResult r = simulate(p, AsymmetricCoherent{}, 300.0);
  EXPECT_EQ(r.n_max_used, 1);
  const PhaseLabel label = classify(r.trajectory);
  EXPECT_EQ(label.kind, PhaseKind::Crystal);
  EXPECT_GT(label.delta_n, 1e-3);
}

TEST(Classify, OscillatingPoint) {
  ModelParams p;
  p.omega = 0.75;
  p.zV = 0.6;
  p.zJ = 0.2;
  p.delta = 0.9;
  const PointResult r = simulate(p, AsymmetricCoherent{}, 300.0);
  const PhaseLabel label = classify(r.trajectory);
  ASSERT_EQ(label.kind, PhaseKind::Oscillating);
  ASSERT_TRUE(label.period);
  EXPECT_GT(*label.period, 0.0);
  double max_gap = 0.0;
  for (const auto& s : r.trajectory.samples) {
    if (s.t > 200.0) max_gap = std::max(max_gap, std::abs(s.a_A - s.a_B));
  }
  EXPECT_GT(max_gap, 1e-2);
}

TEST(Classify, TooShortIsInconclusive) {
  ModelParams p;
  p.omega = 0.5;
  p.n_max = 6;
  const Trajectory traj = evolve(seed_state(SymmetricVacuum{}, FockSpace(7)), p, 50.0);
  EXPECT_EQ(kind_of([&] { classify(traj); }), ErrorKind::Inconclusive);
}

TEST(Classify, TransientWindowIsInconclusive) {
  ModelParams p;
  p.omega = 0.75;
  p.n_max = 14;
  const Trajectory traj = evolve(seed_state(SymmetricVacuum{}, FockSpace(15)), p, 6.0);
  ClassifierControls c;
  c.t_transient = 0.0;
  c.t_window = 5.0;
  EXPECT_EQ(kind_of([&] { classify(traj, c); }), ErrorKind::Inconclusive);
}

TEST(Simulate, AutomaticTruncationKeepsTopLevelEmpty) {
  ModelParams p;
  p.omega = 1.5;
  const PointResult r = simulate(p, SymmetricVacuum{}, 40.0);
  EXPECT_GT(r.n_max_used, 10);
  for (const auto& s : r.trajectory.samples) EXPECT_LT(s.top_population, 1e-6);
}

TEST(Simulate, TruncationBudgetExhausted) {
  ModelParams p;
  p.omega = 3.0;
  TruncationPolicy policy{2, 1, 4};
  EXPECT_EQ(kind_of([&] { simulate(p, SymmetricVacuum{}, 10.0, {}, policy); }),
            ErrorKind::TruncationRisk);
}

TEST(Simulate, ExplicitTruncationHonoured) {
  ModelParams p;
  p.omega = 0.3;
  p.n_max = 5;
  const PointResult r = simulate(p, SymmetricVacuum{}, 5.0);
  EXPECT_EQ(r.n_max_used, 5);
  EXPECT_EQ(r.trajectory.final_state.rho_A.rows(), 6);
}

TEST(RightHandSide, VanishesAtDecoupledSteadyState) {
  ModelParams p;
  p.omega = 0.75;
  p.n_max = 16;
  const Trajectory traj = evolve(seed_state(SymmetricVacuum{}, FockSpace(17)), p, 80.0);
  const auto [dA, dB] = mf_rhs(traj.final_state, p);
  EXPECT_LT(dA.norm(), 1e-8);
  EXPECT_LT(dB.norm(), 1e-8);
}

}  // namespace
}  // namespace cavarray
