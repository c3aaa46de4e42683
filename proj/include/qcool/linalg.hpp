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

// Dense complex linear algebra shared by every other module. Matrices are
// Eigen::MatrixXcd; logical indexing is (row, column) and vectorization is
// column stacking throughout the library.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qcool/error.hpp"

namespace qcool {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

inline double max_abs(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

/// Largest entrywise deviation |a - a^dagger|.
inline double hermiticity_error(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) return INFINITY;
  return max_abs(a - a.adjoint());
}

inline ComplexMatrix dagger(const ComplexMatrix& a) { return a.adjoint(); }

/// Kronecker product: (a (x) b)(i*p + k, j*q + l) = a(i, j) * b(k, l) for b of shape p x q.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index p = b.rows();
  const Eigen::Index q = b.cols();
  ComplexMatrix out(a.rows() * p, a.cols() * q);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * p, j * q, p, q) = a(i, j) * b;
  return out;
}

/// Column-stacking vectorization: vec(a)[i + j*rows] = a(i, j).
inline ComplexVector vec(const ComplexMatrix& a) {
  return Eigen::Map<const ComplexVector>(a.data(), a.size());
}

inline ComplexMatrix unvec(const ComplexVector& v, Eigen::Index dim) {
  if (v.size() != dim * dim)
    throw Error(ErrorKind::DimensionMismatch,
                "cannot reshape vector of length " + std::to_string(v.size()) + " into " +
                    std::to_string(dim) + "x" + std::to_string(dim));
  return Eigen::Map<const ComplexMatrix>(v.data(), dim, dim);
}

/// Multiplies v by a unit phase so its largest-magnitude component is real and
/// positive. Ties go to the lowest index, keeping the choice reproducible.
inline void fix_global_phase(Eigen::Ref<ComplexVector> v) {
  if (v.size() == 0) return;
  const double peak = v.cwiseAbs().maxCoeff();
  if (peak == 0.0) return;
  Eigen::Index pivot = 0;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (std::abs(v(k)) >= peak * (1.0 - 1e-9)) {
      pivot = k;
      break;
    }
  }
  v *= std::conj(v(pivot)) / std::abs(v(pivot));
}

struct HermitianEigen {
  RealVector values;     // ascending
  ComplexMatrix vectors; // orthonormal columns, vectors.col(k) pairs with values(k)
};

/// Eigendecomposition of a Hermitian matrix; index 0 is the ground state.
/// Within a degenerate block the eigenvectors are an arbitrary orthonormal basis.
inline HermitianEigen hermitian_eigen(const ComplexMatrix& a, double tolerance = 1e-10) {
  if (a.rows() != a.cols())
    throw Error(ErrorKind::DimensionMismatch, "hermitian_eigen needs a square matrix");
  const double defect = hermiticity_error(a);
  if (defect > tolerance * std::max(1.0, max_abs(a)))
    throw Error(ErrorKind::NotHermitian,
                "matrix deviates from its adjoint by " + std::to_string(defect));
  // Average with the adjoint so round-off in the input does not leak into the solver.
  const ComplexMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  HermitianEigen out{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index k = 0; k < out.vectors.cols(); ++k) fix_global_phase(out.vectors.col(k));
  return out;
}

struct SingularPair {
  double value;
  ComplexVector vector;  // unit-norm right singular vector
};

/// The `count` smallest singular values of a square matrix, ascending, with
/// their right singular vectors.
inline std::vector<SingularPair> smallest_singular_pairs(const ComplexMatrix& a, std::size_t count) {
  if (a.rows() != a.cols())
    throw Error(ErrorKind::DimensionMismatch, "smallest_singular_pairs needs a square matrix");
  const auto n = static_cast<std::size_t>(a.rows());
  count = std::min(count, n);
  Eigen::BDCSVD<ComplexMatrix> svd(a, Eigen::ComputeFullV);
  const RealVector& sigma = svd.singularValues();  // descending
  std::vector<SingularPair> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const auto idx = static_cast<Eigen::Index>(n - 1 - k);
    ComplexVector v = svd.matrixV().col(idx);
    v.normalize();
    out.push_back({sigma(idx), std::move(v)});
  }
  return out;
}

/// Deviations of a candidate density matrix from the physical constraints.
struct StateDefects {
  double hermiticity = 0.0;   // max |rho - rho^dagger|
  double trace_error = 0.0;   // |tr rho - 1|
  double min_eigenvalue = 0.0;
};

inline StateDefects inspect_state(const ComplexMatrix& rho) {
  StateDefects d;
  d.hermiticity = hermiticity_error(rho);
  d.trace_error = std::abs(rho.trace() - Complex(1.0, 0.0));
  const ComplexMatrix h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  d.min_eigenvalue = solver.eigenvalues().size() ? solver.eigenvalues()(0) : 0.0;
  return d;
}

struct StateTolerance {
  double hermiticity = 1e-10;
  double trace = 1e-9;
  double positivity = 1e-9;
};

/// Hermitian, unit-trace, positive-semidefinite operator. Construction validates.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix rho, StateTolerance tol = {}) : rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols() || rho_.rows() == 0)
      throw Error(ErrorKind::DimensionMismatch, "density matrix must be square and non-empty");
    const StateDefects d = inspect_state(rho_);
    if (d.hermiticity > tol.hermiticity)
      throw Error(ErrorKind::InvalidState, "not Hermitian (defect " + std::to_string(d.hermiticity) + ")");
    if (d.trace_error > tol.trace)
      throw Error(ErrorKind::InvalidState, "trace deviates from 1 by " + std::to_string(d.trace_error));
    if (d.min_eigenvalue < -tol.positivity)
      throw Error(ErrorKind::InvalidState,
                  "negative eigenvalue " + std::to_string(d.min_eigenvalue));
  }

  static DensityMatrix pure(const ComplexVector& psi) {
    const double norm = psi.norm();
    if (norm == 0.0) throw Error(ErrorKind::InvalidState, "zero state vector");
    const ComplexVector u = psi / norm;
    return DensityMatrix(u * u.adjoint());
  }

  static DensityMatrix maximally_mixed(Eigen::Index dim) {
    return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
  }

  const ComplexMatrix& matrix() const noexcept { return rho_; }
  Eigen::Index dim() const noexcept { return rho_.rows(); }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return rho_(i, j); }

 private:
  ComplexMatrix rho_;
};

}  // namespace qcool
