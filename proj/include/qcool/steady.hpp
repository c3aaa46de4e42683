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

// Stationary states and the one-qubit figures of merit: closed-form
// stationary state, fidelity, heating and cooling rates, and a cooling-rate
// estimate fitted to simulated dynamics.
//
// In the closed forms, gamma is the decay rate of each reset channel
// (e_k -> g_j) and delta_lambda = lambda_1 - lambda_0 is the gap between the
// target state and the resonantly driven qubit state.

#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "qcool/lindblad.hpp"
#include "qcool/linalg.hpp"

namespace qcool {

struct SteadyResult {
  DensityMatrix rho;
  double residual = 0.0;       // |L vec(rho)|
  double gap_indicator = 0.0;  // second-smallest singular value of L
};

inline constexpr double kSteadyDegeneracyThreshold = 1e-8;

/// Stationary state from the right singular vector of L belonging to the
/// smallest singular value. A second singular value below 1e-8 means the
/// stationary state is not unique and is reported as an error.
inline SteadyResult steady_state(const Liouvillian& liouv) {
  const auto pairs = smallest_singular_pairs(liouv.matrix, 2);
  if (pairs.size() < 2 || pairs[1].value < kSteadyDegeneracyThreshold)
    throw Error(ErrorKind::DegenerateSteadyState,
                "Liouvillian has more than one null vector (second singular value " +
                    std::to_string(pairs.size() < 2 ? 0.0 : pairs[1].value) + ")");
  ComplexMatrix rho = unvec(pairs[0].vector, liouv.state_dim);
  rho = (0.5 * (rho + rho.adjoint())).eval();
  const Complex tr = rho.trace();
  if (std::abs(tr) < 1e-12)
    throw Error(ErrorKind::DegenerateSteadyState, "null vector is traceless");
  rho /= tr.real();
  const double residual = (liouv.matrix * vec(rho)).norm();
  return {DensityMatrix(rho), residual, pairs[1].value};
}

inline double steady_denominator(double omega, double gamma, double delta_lambda) {
  return 2.0 * gamma * gamma + delta_lambda * delta_lambda + omega * omega;
}

/// Closed-form one-qubit stationary state in the basis
/// {lambda_0, lambda_1, lambda_2, lambda_3}, lambda_{n+2} = sum_j |e_j><g_j| lambda_n.
inline DensityMatrix analytic_steady_one_qubit(double omega, double gamma, double delta_lambda) {
  if (!(omega > 0.0)) throw Error(ErrorKind::ZeroRabi, "the closed form needs Omega > 0");
  const double g2 = gamma * gamma;
  const double o2 = omega * omega;
  const double d = steady_denominator(omega, gamma, delta_lambda);
  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  rho(0, 0) = (4.0 * g2 + 4.0 * delta_lambda * delta_lambda + o2) / (4.0 * d);
  rho(1, 1) = (4.0 * g2 + o2) / (4.0 * d);
  rho(2, 2) = o2 / (4.0 * d);
  rho(3, 3) = o2 / (4.0 * d);
  rho(0, 2) = Complex(-delta_lambda * omega, gamma * omega) / (2.0 * d);
  // Both driven pairs couple with +Omega/2, so rho_13 shares the sign of Im rho_02.
  rho(1, 3) = Complex(0.0, gamma * omega) / (2.0 * d);
  rho(2, 0) = std::conj(rho(0, 2));
  rho(3, 1) = std::conj(rho(1, 3));
  return DensityMatrix(rho);
}

/// <target| rho |target>
inline double fidelity(const ComplexMatrix& rho, const ComplexVector& target) {
  if (rho.rows() != target.size() || rho.cols() != target.size())
    throw Error(ErrorKind::DimensionMismatch, "target and state dimensions differ");
  if (std::abs(target.norm() - 1.0) > 1e-9)
    throw Error(ErrorKind::InvalidState, "target state is not normalized");
  const double f = (target.adjoint() * rho * target)(0, 0).real();
  return std::clamp(f, 0.0, 1.0);
}

inline double fidelity(const DensityMatrix& rho, const ComplexVector& target) {
  return fidelity(rho.matrix(), target);
}

/// F = 1 - (4 Gamma^2 + 3 Omega^2) / (4 (Delta^2 + 2 Gamma^2 + Omega^2))
inline double fidelity_formula(double omega, double gamma, double delta_lambda) {
  return 1.0 - (4.0 * gamma * gamma + 3.0 * omega * omega) /
                   (4.0 * steady_denominator(omega, gamma, delta_lambda));
}

/// gamma_h = Gamma rho_22 / 2, for a state expressed in the lambda basis.
inline double heating_rate(const DensityMatrix& rho_lambda, double gamma) {
  if (rho_lambda.dim() < 3) throw Error(ErrorKind::DimensionMismatch, "state has no lambda_2 component");
  return 0.5 * gamma * rho_lambda(2, 2).real();
}

inline double cooling_rate_formula(double omega, double gamma, double delta_lambda) {
  const double g2 = gamma * gamma;
  const double o2 = omega * omega;
  const double d2 = delta_lambda * delta_lambda;
  return gamma * o2 * (4.0 * d2 + 4.0 * g2 + o2) /
         (8.0 * steady_denominator(omega, gamma, delta_lambda) * (4.0 * g2 + 3.0 * o2));
}

/// Large-detuning limit of cooling_rate_formula: Gamma Omega^2 / (2 (4 Gamma^2 + 3 Omega^2)).
inline double cooling_rate_large_detuning(double omega, double gamma) {
  const double o2 = omega * omega;
  const double denom = 2.0 * (4.0 * gamma * gamma + 3.0 * o2);
  return denom > 0.0 ? gamma * o2 / denom : 0.0;
}

struct RateReport {
  double fidelity = 0.0;
  double heating_rate = 0.0;
  double cooling_rate = 0.0;
  double cooling_rate_large_detuning = 0.0;
};

inline RateReport rate_report(double omega, double gamma, double delta_lambda) {
  RateReport r;
  const DensityMatrix rho = analytic_steady_one_qubit(omega, gamma, delta_lambda);
  r.fidelity = rho(0, 0).real();
  r.heating_rate = heating_rate(rho, gamma);
  r.cooling_rate = cooling_rate_formula(omega, gamma, delta_lambda);
  r.cooling_rate_large_detuning = cooling_rate_large_detuning(omega, gamma);
  return r;
}

/// Decay rate of F_ss - F(t), from a least-squares fit of its logarithm over
/// the stretch where the gap first falls from 60% to 5% of its initial value.
inline double cooling_rate_fit(std::span<const double> times, std::span<const double> fidelities,
                               double steady_fidelity) {
  if (times.size() != fidelities.size() || times.size() < 3)
    throw Error(ErrorKind::NotConverged, "trajectory too short for a rate fit");
  const double final_gap = std::abs(steady_fidelity - fidelities.back());
  if (final_gap > 0.02 * std::abs(steady_fidelity))
    throw Error(ErrorKind::NotConverged, "final fidelity is not within 2% of the steady value");
  const double gap0 = steady_fidelity - fidelities.front();
  if (!(gap0 > 1e-12))
    throw Error(ErrorKind::NotConverged, "trajectory starts at the steady fidelity; nothing to fit");

  std::vector<double> xs, ys;
  bool entered = false;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double gap = steady_fidelity - fidelities[k];
    if (!entered && gap <= 0.6 * gap0) entered = true;
    if (!entered) continue;
    if (gap < 0.05 * gap0) break;
    xs.push_back(times[k]);
    ys.push_back(std::log(gap));
  }
  if (!entered) throw Error(ErrorKind::NonMonotone, "fidelity gap never fell below 60% of its initial value");
  if (xs.size() < 3)
    throw Error(ErrorKind::NotConverged, "too few samples inside the fit window; store more time points");

  const auto n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sx += xs[k];
    sy += ys[k];
    sxx += xs[k] * xs[k];
    sxy += xs[k] * ys[k];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  if (!(slope < 0.0)) throw Error(ErrorKind::NonMonotone, "fidelity gap is not decreasing");
  return -slope;
}

inline double cooling_rate_fit(const Trajectory& traj, double steady_fidelity,
                               const std::string& observable = "fidelity") {
  return cooling_rate_fit(traj.times, traj.observable(observable), steady_fidelity);
}

/// Slowest nonzero decay rate of the Liouvillian spectrum, -Re(mu_1).
inline double slowest_relaxation_rate(const Liouvillian& liouv) {
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(liouv.matrix, false);
  std::vector<double> rates;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) rates.push_back(-solver.eigenvalues()(k).real());
  std::sort(rates.begin(), rates.end());
  if (rates.size() < 2) throw Error(ErrorKind::DimensionMismatch, "Liouvillian too small");
  return rates[1];
}

}  // namespace qcool
