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

// Master equation d rho/dt = -i[H, rho] + D(rho) with spontaneous-emission
// reset operators R = |g_j>_i <e_k|, its column-stacked superoperator, and a
// fixed-step RK4 integrator.

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qcool/linalg.hpp"
#include "qcool/system.hpp"

namespace qcool {

struct ResetOperator {
  ComplexMatrix op;
  double rate = 0.0;
  int atom = 0;     // 0-based
  int ground = 0;   // j
  int excited = 0;  // k
};

struct ResetOperatorSet {
  Eigen::Index dim = 0;
  std::vector<ResetOperator> operators;

  std::size_t size() const { return operators.size(); }
};

/// R_jk^(i) = |g_j>_i <e_k| with rate Gamma_jk, ordered by atom, then j, then k.
inline ResetOperatorSet reset_operators(const SystemSpec& spec) {
  validate(spec);
  ResetOperatorSet set;
  set.dim = static_cast<Eigen::Index>(full_dim(spec.n_atoms));
  for (int atom = 0; atom < spec.n_atoms; ++atom)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        const ComplexMatrix one = atom_transition(static_cast<Level>(j), static_cast<Level>(2 + k));
        set.operators.push_back(
            {single_atom_operator(spec.n_atoms, atom, one), spec.decay.gamma_jk[j][k], atom, j, k});
      }
  return set;
}

/// Matrix elements <b_a| R |b_c> of every reset operator in the basis given by
/// the orthonormal columns of `isometry`.
inline ResetOperatorSet compress(const ResetOperatorSet& set, const ComplexMatrix& isometry) {
  if (isometry.rows() != set.dim)
    throw Error(ErrorKind::DimensionMismatch, "isometry does not match the reset operator space");
  ResetOperatorSet out;
  out.dim = isometry.cols();
  for (const auto& r : set.operators) {
    ResetOperator c = r;
    c.op = isometry.adjoint() * r.op * isometry;
    out.operators.push_back(std::move(c));
  }
  return out;
}

inline void check_dims(const ComplexMatrix& rho, const ResetOperatorSet& ops) {
  if (rho.rows() != rho.cols() || rho.rows() != ops.dim)
    throw Error(ErrorKind::DimensionMismatch,
                "state of dimension " + std::to_string(rho.rows()) + " vs operators of dimension " +
                    std::to_string(ops.dim));
}

/// sum Gamma [R rho R^dag - 1/2 R^dag R rho - 1/2 rho R^dag R]
inline ComplexMatrix dissipator(const ComplexMatrix& rho, const ResetOperatorSet& ops) {
  check_dims(rho, ops);
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& r : ops.operators) {
    if (r.rate == 0.0) continue;
    const ComplexMatrix rdr = r.op.adjoint() * r.op;
    out += r.rate * (r.op * rho * r.op.adjoint() - 0.5 * (rdr * rho + rho * rdr));
  }
  return out;
}

inline ComplexMatrix dissipator(const DensityMatrix& rho, const ResetOperatorSet& ops) {
  return dissipator(rho.matrix(), ops);
}

inline ComplexMatrix master_rhs(const ComplexMatrix& h, const ComplexMatrix& rho, const ResetOperatorSet& ops) {
  check_dims(rho, ops);
  if (h.rows() != rho.rows() || h.cols() != rho.cols())
    throw Error(ErrorKind::DimensionMismatch, "Hamiltonian and state dimensions differ");
  return -kI * (h * rho - rho * h) + dissipator(rho, ops);
}

inline ComplexMatrix master_rhs(const ComplexMatrix& h, const DensityMatrix& rho, const ResetOperatorSet& ops) {
  return master_rhs(h, rho.matrix(), ops);
}

/// Superoperator with vec(master_rhs(rho)) = matrix * vec(rho), column stacking.
struct Liouvillian {
  ComplexMatrix matrix;
  Eigen::Index state_dim = 0;

  ComplexMatrix apply(const ComplexMatrix& rho) const { return unvec(matrix * vec(rho), state_dim); }
};

// vec(A rho B) = (B^T (x) A) vec(rho)
inline Liouvillian assemble_liouvillian(const ComplexMatrix& h, const ResetOperatorSet& ops) {
  if (h.rows() != h.cols() || h.rows() != ops.dim)
    throw Error(ErrorKind::DimensionMismatch, "Hamiltonian and reset operators disagree on dimension");
  const Eigen::Index d = h.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  ComplexMatrix l = -kI * (kron(id, h) - kron(h.transpose(), id));
  for (const auto& r : ops.operators) {
    if (r.rate == 0.0) continue;
    const ComplexMatrix rdr = r.op.adjoint() * r.op;
    l += r.rate * (kron(r.op.conjugate(), r.op) - 0.5 * kron(id, rdr) - 0.5 * kron(rdr.transpose(), id));
  }
  return {std::move(l), d};
}

using HamiltonianProvider = std::function<ComplexMatrix(double)>;

struct Observable {
  std::string name;
  std::function<double(const ComplexMatrix&)> evaluate;
};

/// <target| rho |target>
inline Observable population(std::string name, ComplexVector target) {
  return {std::move(name), [t = std::move(target)](const ComplexMatrix& rho) {
            return (t.adjoint() * rho * t)(0, 0).real();
          }};
}

struct IntegrateOptions {
  double t_max = 1.0;
  double dt = 0.01;
  std::size_t sample_every = 1;  // store every n-th step (the final step is always stored)
  bool keep_states = true;
  std::vector<Observable> observables;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;  // empty when keep_states was false
  std::map<std::string, std::vector<double>> observables;

  const std::vector<double>& observable(const std::string& name) const {
    auto it = observables.find(name);
    if (it == observables.end()) throw Error(ErrorKind::BadConfig, "no observable named '" + name + "'");
    return it->second;
  }
};

/// min(0.01 / Gamma, 0.1 / max|H|)
inline double default_time_step(const ComplexMatrix& h, double gamma) {
  double dt = gamma > 0.0 ? 0.01 / gamma : 0.01;
  const double hmax = max_abs(h);
  if (hmax > 0.0) dt = std::min(dt, 0.1 / hmax);
  return dt;
}

namespace detail {

struct SparseEntry {
  Eigen::Index row;
  Eigen::Index col;
  Complex value;
};

// Right-hand side split as G rho + rho G^dag + sum Gamma R rho R^dag with
// G = -i H - 1/2 sum Gamma R^dag R; the jump term uses the few nonzeros of R.
class MasterEquation {
 public:
  explicit MasterEquation(const ResetOperatorSet& ops) : dim_(ops.dim) {
    damping_ = ComplexMatrix::Zero(dim_, dim_);
    for (const auto& r : ops.operators) {
      if (r.rate == 0.0) continue;
      damping_ += 0.5 * r.rate * r.op.adjoint() * r.op;
      std::vector<SparseEntry> nz;
      for (Eigen::Index c = 0; c < r.op.cols(); ++c)
        for (Eigen::Index a = 0; a < r.op.rows(); ++a)
          if (std::abs(r.op(a, c)) > 1e-15) nz.push_back({a, c, r.op(a, c)});
      jumps_.push_back({r.rate, std::move(nz)});
    }
  }

  ComplexMatrix generator(const ComplexMatrix& h) const { return -kI * h - damping_; }

  void rhs(const ComplexMatrix& g, const ComplexMatrix& rho, ComplexMatrix& out) const {
    out.noalias() = g * rho;
    out += out.adjoint().eval();  // rho Hermitian: (G rho)^dag = rho G^dag
    for (const auto& [rate, nz] : jumps_)
      for (const auto& x : nz)
        for (const auto& y : nz) out(x.row, y.row) += rate * x.value * rho(x.col, y.col) * std::conj(y.value);
  }

  Eigen::Index dim() const { return dim_; }

 private:
  Eigen::Index dim_;
  ComplexMatrix damping_;
  std::vector<std::pair<double, std::vector<SparseEntry>>> jumps_;
};

inline Trajectory run_rk4(const MasterEquation& eq, const std::function<ComplexMatrix(double)>& generator_at,
                          bool time_dependent, const DensityMatrix& rho0, const IntegrateOptions& opt) {
  if (!(opt.dt > 0.0) || !std::isfinite(opt.dt)) throw Error(ErrorKind::BadConfig, "dt must be positive");
  if (!(opt.t_max > 0.0) || !std::isfinite(opt.t_max)) throw Error(ErrorKind::BadConfig, "t_max must be positive");
  if (rho0.dim() != eq.dim()) throw Error(ErrorKind::DimensionMismatch, "initial state has the wrong dimension");
  const std::size_t stride = std::max<std::size_t>(1, opt.sample_every);
  const auto n_steps = static_cast<std::size_t>(std::ceil(opt.t_max / opt.dt - 1e-9));

  Trajectory traj;
  for (const auto& o : opt.observables) traj.observables[o.name];
  auto record = [&](double t, const ComplexMatrix& rho) {
    const StateDefects d = inspect_state(rho);
    if (d.min_eigenvalue < -1e-9 || d.trace_error > 1e-9 || d.hermiticity > 1e-10)
      throw Error(ErrorKind::StepTooLarge,
                  "state left the physical set at t = " + std::to_string(t) + " (min eigenvalue " +
                      std::to_string(d.min_eigenvalue) + "); reduce dt");
    traj.times.push_back(t);
    if (opt.keep_states) traj.states.emplace_back(rho);
    for (const auto& o : opt.observables) traj.observables[o.name].push_back(o.evaluate(rho));
  };

  ComplexMatrix rho = rho0.matrix();
  record(0.0, rho);
  const Eigen::Index d = eq.dim();
  ComplexMatrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), tmp(d, d);
  ComplexMatrix g_start = generator_at(0.0), g_mid = g_start, g_end = g_start;
  double t = 0.0;
  for (std::size_t step = 1; step <= n_steps; ++step) {
    const double t_next = step == n_steps ? opt.t_max : static_cast<double>(step) * opt.dt;
    const double h = t_next - t;
    if (time_dependent) {
      g_start = generator_at(t);
      g_mid = generator_at(t + 0.5 * h);
      g_end = generator_at(t_next);
    }
    eq.rhs(g_start, rho, k1);
    tmp = rho + 0.5 * h * k1;
    eq.rhs(g_mid, tmp, k2);
    tmp = rho + 0.5 * h * k2;
    eq.rhs(g_mid, tmp, k3);
    tmp = rho + h * k3;
    eq.rhs(g_end, tmp, k4);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    rho = (0.5 * (rho + rho.adjoint())).eval();

    const Complex tr = rho.trace();
    const double drift = std::abs(tr - Complex(1.0, 0.0));
    if (!std::isfinite(drift) || drift > 1e-9 || max_abs(rho) > 1.0 + 1e-6)
      throw Error(ErrorKind::StepTooLarge,
                  "integration diverged at t = " + std::to_string(t_next) + "; reduce dt (currently " +
                      std::to_string(opt.dt) + ")");
    if (drift > 1e-12) rho /= tr.real();
    t = t_next;
    if (step % stride == 0 || step == n_steps) record(t, rho);
  }
  return traj;
}

}  // namespace detail

/// Fixed-step RK4 for a time-dependent Hamiltonian; H is sampled at the
/// start, midpoint and end of every step.
inline Trajectory integrate(const HamiltonianProvider& h_of_t, const ResetOperatorSet& ops,
                            const DensityMatrix& rho0, const IntegrateOptions& opt) {
  const detail::MasterEquation eq(ops);
  return detail::run_rk4(eq, [&](double t) { return eq.generator(h_of_t(t)); }, true, rho0, opt);
}

inline Trajectory integrate(const ComplexMatrix& h, const ResetOperatorSet& ops, const DensityMatrix& rho0,
                            const IntegrateOptions& opt) {
  if (h.rows() != ops.dim) throw Error(ErrorKind::DimensionMismatch, "Hamiltonian dimension mismatch");
  const detail::MasterEquation eq(ops);
  const ComplexMatrix g = eq.generator(h);
  return detail::run_rk4(eq, [&](double) { return g; }, false, rho0, opt);
}

inline Trajectory integrate(const SystemSpec& spec, const HamiltonianProvider& h_of_t, const DensityMatrix& rho0,
                            const IntegrateOptions& opt) {
  return integrate(h_of_t, reset_operators(spec), rho0, opt);
}

}  // namespace qcool
