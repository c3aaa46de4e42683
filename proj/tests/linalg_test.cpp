// Copyright 2026 The qcool Authors
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

#include <gtest/gtest.h>

#include <cmath>

#include "qcool/linalg.hpp"
#include "support.hpp"

namespace qcool {
namespace {

using testing::Gen;

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

TEST(Kron, MatchesHandExpandedProduct) {
  const ComplexMatrix k = kron(pauli_x(), pauli_y());
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(0, 3) = -kI;
  expected(1, 2) = kI;
  expected(2, 1) = -kI;
  expected(3, 0) = kI;
  EXPECT_LT(max_abs(k - expected), 1e-15);
}

TEST(Kron, RectangularShapes) {
  Gen gen(1);
  const ComplexMatrix k = kron(gen.ginibre(2, 3), gen.ginibre(4, 1));
  EXPECT_EQ(k.rows(), 8);
  EXPECT_EQ(k.cols(), 3);
}

TEST(Vec, RoundTripIsColumnMajor) {
  ComplexMatrix a(2, 2);
  a << 1, 2, 3, 4;
  const ComplexVector v = vec(a);
  EXPECT_EQ(v(1), Complex(3.0, 0.0));
  EXPECT_EQ(unvec(v, 2), a);
}

TEST(Vec, SandwichIdentityOnRandomMatrices) {
  Gen gen(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = gen.integer(1, 6);
    const ComplexMatrix a = gen.ginibre(n, n), b = gen.ginibre(n, n), x = gen.ginibre(n, n);
    const ComplexVector lhs = vec(a * x * b);
    const ComplexVector rhs = kron(b.transpose(), a) * vec(x);
    EXPECT_LT((lhs - rhs).norm(), 1e-12 * (1.0 + lhs.norm())) << "n=" << n;
  }
}

TEST(HermitianEigen, PauliX) {
  const HermitianEigen e = hermitian_eigen(pauli_x());
  EXPECT_NEAR(e.values(0), -1.0, 1e-14);
  EXPECT_NEAR(e.values(1), 1.0, 1e-14);
  // Phase convention: the largest component is real positive, the first on ties.
  EXPECT_NEAR(e.vectors(0, 0).real(), 1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(e.vectors(1, 0).real(), -1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(e.vectors(0, 0).imag(), 0.0, 1e-14);
}

TEST(HermitianEigen, RejectsBadInput) {
  ComplexMatrix upper(2, 2);
  upper << 0, 1, 0, 0;
  try {
    hermitian_eigen(upper);
    FAIL() << "expected NotHermitian";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotHermitian);
  }
  try {
    hermitian_eigen(ComplexMatrix::Zero(2, 3));
    FAIL() << "expected DimensionMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(HermitianEigen, RandomMatricesDecompose) {
  Gen gen(3);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = gen.integer(1, 8);
    const ComplexMatrix h = gen.hermitian(n, gen.uniform(0.1, 10.0));
    const HermitianEigen e = hermitian_eigen(h);
    const ComplexMatrix& v = e.vectors;
    EXPECT_LT(max_abs(v.adjoint() * v - ComplexMatrix::Identity(n, n)), 1e-12);
    EXPECT_LT(max_abs(h * v - v * e.values.cast<Complex>().asDiagonal()), 1e-11 * (1.0 + max_abs(h)));
    for (Eigen::Index k = 1; k < n; ++k) EXPECT_LE(e.values(k - 1), e.values(k));
    for (Eigen::Index k = 0; k < n; ++k) {
      Eigen::Index top = 0;
      v.col(k).cwiseAbs().maxCoeff(&top);
      EXPECT_NEAR(v(top, k).imag(), 0.0, 1e-12);
      EXPECT_GT(v(top, k).real(), 0.0);
    }
  }
}

TEST(FixGlobalPhase, TieGoesToLowestIndex) {
  ComplexVector v(2);
  v << Complex(0.0, -1.0), Complex(0.0, 1.0);
  fix_global_phase(v);
  EXPECT_NEAR(v(0).real(), 1.0, 1e-15);
  EXPECT_NEAR(v(1).real(), -1.0, 1e-15);
}

TEST(SingularPairs, DiagonalOracle) {
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d.diagonal() << 3.0, 1.0, 2.0;
  const auto pairs = smallest_singular_pairs(d, 2);
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_NEAR(pairs[0].value, 1.0, 1e-14);
  EXPECT_NEAR(pairs[1].value, 2.0, 1e-14);
  EXPECT_NEAR(std::abs(pairs[0].vector(1)), 1.0, 1e-14);
}

TEST(SingularPairs, VectorsAttainTheirValues) {
  Gen gen(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = gen.integer(2, 9);
    const ComplexMatrix a = gen.ginibre(n, n);
    const auto pairs = smallest_singular_pairs(a, 3);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      EXPECT_NEAR((a * pairs[k].vector).norm(), pairs[k].value, 1e-10);
      EXPECT_NEAR(pairs[k].vector.norm(), 1.0, 1e-12);
      if (k) {
        EXPECT_LE(pairs[k - 1].value, pairs[k].value);
      }
    }
  }
}

TEST(DensityMatrix, ValidStatesConstruct) {
  Gen gen(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = gen.integer(1, 8);
    const DensityMatrix rho = gen.state(n, gen.integer(1, static_cast<int>(n)));
    const StateDefects d = inspect_state(rho.matrix());
    EXPECT_LE(d.trace_error, 1e-12);
    EXPECT_GE(d.min_eigenvalue, -1e-12);
  }
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(4);
  EXPECT_NEAR(mixed(2, 2).real(), 0.25, 1e-15);
  ComplexVector psi(2);
  psi << 3.0, Complex(0.0, 4.0);
  const DensityMatrix pure = DensityMatrix::pure(psi);
  EXPECT_NEAR(pure(1, 1).real(), 0.64, 1e-15);
}

TEST(DensityMatrix, RejectsUnphysicalMatrices) {
  auto kind_of = [](const ComplexMatrix& m) {
    try {
      DensityMatrix rho(m);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::UsageError;  // sentinel: nothing thrown
  };
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m.diagonal() << 1.5, -0.5;
  EXPECT_EQ(kind_of(m), ErrorKind::InvalidState);
  m.diagonal() << 0.6, 0.6;
  EXPECT_EQ(kind_of(m), ErrorKind::InvalidState);
  m.diagonal() << 0.5, 0.5;
  m(0, 1) = 0.1;
  EXPECT_EQ(kind_of(m), ErrorKind::InvalidState);
  EXPECT_EQ(kind_of(ComplexMatrix::Zero(2, 3)), ErrorKind::DimensionMismatch);
}

}  // namespace
}  // namespace qcool
