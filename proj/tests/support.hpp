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

// Seeded random generators and small helpers shared by the test binaries.

#pragma once

#include <cstdint>
#include <random>

#include "qcool/linalg.hpp"

namespace qcool::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>()(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  ComplexMatrix ginibre(Eigen::Index rows, Eigen::Index cols) {
    ComplexMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = Complex(normal(), normal());
    return m;
  }

  ComplexMatrix hermitian(Eigen::Index n, double scale = 1.0) {
    const ComplexMatrix g = ginibre(n, n);
    return 0.5 * scale * (g + g.adjoint());
  }

  /// Haar-ish unitary from the QR factor of a Ginibre matrix.
  ComplexMatrix unitary(Eigen::Index n) {
    Eigen::HouseholderQR<ComplexMatrix> qr(ginibre(n, n));
    return qr.householderQ() * ComplexMatrix::Identity(n, n);
  }

  ComplexVector ket(Eigen::Index n) {
    ComplexVector v = ginibre(n, 1);
    return v / v.norm();
  }

  /// Full-rank mixed state G G^dagger / tr, or a pure state when rank is 1.
  DensityMatrix state(Eigen::Index n, Eigen::Index rank = -1) {
    const ComplexMatrix g = ginibre(n, rank < 0 ? n : rank);
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(0.5 * (rho + rho.adjoint()));
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace qcool::testing
