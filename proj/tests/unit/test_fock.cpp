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

namespace cavarray {
namespace {

Operator random_operator(int dim, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Operator op(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) op(i, j) = Complex(g(rng), g(rng));
  return op;
}

TEST(FockSpace, RejectsDimensionBelowTwo) {
  EXPECT_THROW(FockSpace(1), Error);
  EXPECT_THROW(FockSpace(0), Error);
  try {
    FockSpace bad(1);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidSpace);
  }
  EXPECT_EQ(FockSpace(2).n_max(), 1);
}

TEST(Annihilation, SmallestSpace) {
  const Operator a = annihilation(FockSpace(2));
  EXPECT_EQ(a(0, 1), Complex(1.0));
  EXPECT_EQ(a(0, 0), Complex(0.0));
  EXPECT_EQ(a(1, 0), Complex(0.0));
  EXPECT_EQ(a(1, 1), Complex(0.0));
}

TEST(Annihilation, MatrixElements) {
  const Operator a = annihilation(FockSpace(4));
  EXPECT_NEAR(a(2, 3).real(), std::sqrt(3.0), 1e-15);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (j != i + 1) {
        EXPECT_EQ(a(i, j), Complex(0.0));
      }
}

TEST(Annihilation, KillsVacuum) {
  const FockSpace s(6);
  EXPECT_EQ((annihilation(s) * fock_state(0, s)).norm(), 0.0);
}

TEST(Creation, IsAdjointOfAnnihilation) {
  const FockSpace s(7);
  EXPECT_EQ((creation(s) - annihilation(s).adjoint()).norm(), 0.0);
}

TEST(Number, DiagonalAndTrace) {
  const Operator n3 = number(FockSpace(3));
  EXPECT_EQ(n3(0, 0), Complex(0.0));
  EXPECT_EQ(n3(1, 1), Complex(1.0));
  EXPECT_EQ(n3(2, 2), Complex(2.0));
  EXPECT_EQ(n3(0, 1), Complex(0.0));
  EXPECT_EQ(number(FockSpace(5)).trace(), Complex(10.0));
}

TEST(Number, EqualsAdaggerA) {
  for (int d : {2, 5, 17}) {
    const FockSpace s(d);
    const Operator a = annihilation(s);
    EXPECT_LT((number(s) - adjoint(a) * a).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Number, HermitianPositiveSemidefinite) {
  const Operator n = number(FockSpace(9));
  EXPECT_EQ((n - n.adjoint()).norm(), 0.0);
  Eigen::SelfAdjointEigenSolver<Operator> es(n);
  EXPECT_GE(es.eigenvalues().minCoeff(), 0.0);
}

TEST(Commutator, CanonicalBelowTruncationWall) {
  for (int d : {3, 8, 20}) {
    const FockSpace s(d);
    const Operator c = commutator(annihilation(s), creation(s));
    const Operator block = c.topLeftCorner(d - 1, d - 1);
    EXPECT_LT((block - Operator::Identity(d - 1, d - 1)).cwiseAbs().maxCoeff(), 1e-14);
    // The hard wall shows up in the last diagonal entry.
    EXPECT_NEAR(c(d - 1, d - 1).real(), -(d - 1.0), 1e-14);
  }
}

TEST(Commutator, RejectsMismatchedShapes) {
  try {
    commutator(identity(FockSpace(3)), identity(FockSpace(4)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(Adjoint, IsAnInvolution) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const Operator x = random_operator(2 + trial, rng);
    EXPECT_EQ((adjoint(adjoint(x)) - x).norm(), 0.0);
  }
}

TEST(CoherentState, ZeroAmplitudeIsVacuum) {
  const FockSpace s(8);
  const StateVector psi = coherent_state(0.0, s);
  EXPECT_NEAR((psi - fock_state(0, s)).norm(), 0.0, 1e-15);
}

TEST(CoherentState, MeanOccupation) {
  const FockSpace s(30);
  const StateVector psi = coherent_state(1.0, s);
  const Complex n = psi.dot(number(s) * psi);
  EXPECT_NEAR(n.real(), 1.0, 1e-10);
}

TEST(CoherentState, EigenvalueOfAnnihilation) {
  const FockSpace s(20);
  const StateVector psi = coherent_state(0.5, s);
  const Complex a = psi.dot(annihilation(s) * psi);
  EXPECT_NEAR(a.real(), 0.5, 1e-10);
  EXPECT_NEAR(a.imag(), 0.0, 1e-10);
}

TEST(CoherentState, NormalizedAfterTruncation) {
  const FockSpace s(6);
  const StateVector psi = coherent_state(Complex(1.2, -0.9), s);
  EXPECT_NEAR(psi.norm(), 1.0, 1e-14);
}

TEST(CoherentState, GuardsTruncationAdequacy) {
  try {
    coherent_state(2.0, FockSpace(6));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TruncationRisk);
  }
  EXPECT_NO_THROW(coherent_state(std::sqrt(2.4), FockSpace(6)));
}

TEST(FockState, Basis) {
  const FockSpace s(4);
  const StateVector psi = fock_state(2, s);
  EXPECT_EQ(psi(2), Complex(1.0));
  EXPECT_EQ(psi.norm(), 1.0);
  EXPECT_THROW(fock_state(4, s), Error);
  EXPECT_THROW(fock_state(-1, s), Error);
}

TEST(Projector, IsRankOnePure) {
  const FockSpace s(6);
  const DensityMatrix rho = projector(coherent_state(Complex(0.3, 0.4), s));
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-14);
  EXPECT_NEAR((rho * rho - rho).norm(), 0.0, 1e-14);
}

}  // namespace
}  // namespace cavarray
