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

// Ready-made cooling setups: one qubit with an arbitrary interaction, and two
// qubits with a Heisenberg coupling (full 16-dim space or the 8-dim
// single-excitation truncation), plus the parameter sweeps built on them.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "qcool/lindblad.hpp"
#include "qcool/linalg.hpp"
#include "qcool/steady.hpp"
#include "qcool/system.hpp"

namespace qcool {

enum class ScenarioKind { one_qubit, two_qubit_heisenberg };

struct InitialState {
  enum class Kind { lambda, product, mixed_qubit };
  Kind kind = Kind::mixed_qubit;
  Eigen::Index index = 0;
};

/// Accepts "mixed", "singlet", "ground_lambda1", "lambda<n>" / "lambda:<n>"
/// (lambda-basis index) and "product:<n>" (atomic product-basis index).
inline InitialState parse_initial_state(std::string_view text) {
  auto number = [&](std::string_view digits) {
    Eigen::Index value = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || value < 0 || digits.empty())
      throw Error(ErrorKind::BadConfig, "bad initial state '" + std::string(text) + "'");
    return value;
  };
  if (text == "mixed") return {InitialState::Kind::mixed_qubit, 0};
  if (text == "singlet") return {InitialState::Kind::lambda, 0};
  if (text == "ground_lambda1") return {InitialState::Kind::lambda, 1};
  if (text.starts_with("lambda:")) return {InitialState::Kind::lambda, number(text.substr(7))};
  if (text.starts_with("lambda")) return {InitialState::Kind::lambda, number(text.substr(6))};
  if (text.starts_with("product:")) return {InitialState::Kind::product, number(text.substr(8))};
  throw Error(ErrorKind::BadConfig, "bad initial state '" + std::string(text) + "'");
}

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::one_qubit;
  double omega = 1.0;
  double gamma = 1.0;  // per-channel decay rate, the unit of every other parameter
  double delta_lambda = 10.0;  // one qubit: lambda_1 - lambda_0
  double coupling_j = 5.0;     // two qubits
  bool truncate = true;        // two qubits: 8-dim single-excitation model
  double t_max = 100.0;
  double dt = 0.0;  // 0 selects default_time_step
  InitialState initial;
  ComplexMatrix qubit_rotation;  // one qubit: columns are |lambda_0>, |lambda_1>; empty = identity
};

inline void validate(const ScenarioConfig& cfg) {
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(cfg.omega) || cfg.omega < 0.0) throw Error(ErrorKind::BadConfig, "omega must be finite and >= 0");
  if (!finite(cfg.gamma) || cfg.gamma <= 0.0) throw Error(ErrorKind::BadConfig, "gamma must be positive");
  if (!finite(cfg.delta_lambda)) throw Error(ErrorKind::BadConfig, "delta_lambda must be finite");
  if (!finite(cfg.t_max) || cfg.t_max <= 0.0) throw Error(ErrorKind::BadConfig, "t_max must be positive");
  if (!finite(cfg.dt) || cfg.dt < 0.0) throw Error(ErrorKind::BadConfig, "dt must be positive (or 0 for auto)");
  if (cfg.kind == ScenarioKind::two_qubit_heisenberg && (!finite(cfg.coupling_j) || cfg.coupling_j == 0.0))
    throw Error(ErrorKind::BadConfig, "Heisenberg coupling J must be finite and nonzero");
}

/// A time-independent cooling problem ready for simulation, in "model
/// coordinates": the atomic product basis for full models, the lambda basis
/// for the truncated two-qubit model.
struct CoolingModel {
  SystemSpec spec;
  LambdaBasis basis;
  ComplexMatrix hamiltonian;
  ResetOperatorSet resets;
  ComplexVector target;
  ComplexMatrix lambda_frame;  // model-coordinate columns |lambda_0> .. |lambda_{2^(N+1)-1}>
  ComplexMatrix from_full;     // isometry from the product basis into model coordinates (adjoint applied)
  bool truncated = false;

  Eigen::Index dim() const { return hamiltonian.rows(); }
  Liouvillian liouvillian() const { return assemble_liouvillian(hamiltonian, resets); }

  /// <lambda_a| rho |lambda_b> for the listed lambda states.
  ComplexMatrix in_lambda_basis(const ComplexMatrix& rho) const {
    return lambda_frame.adjoint() * rho * lambda_frame;
  }

  ComplexMatrix ground_projector() const {
    const auto q = static_cast<Eigen::Index>(basis.dim_qubit());
    const ComplexMatrix g = lambda_frame.leftCols(q);
    return g * g.adjoint();
  }

  DensityMatrix initial_state(const InitialState& init) const {
    const auto q = static_cast<Eigen::Index>(basis.dim_qubit());
    switch (init.kind) {
      case InitialState::Kind::mixed_qubit:
        return DensityMatrix(ground_projector() / static_cast<double>(q));
      case InitialState::Kind::lambda:
        if (init.index >= lambda_frame.cols())
          throw Error(ErrorKind::BadConfig, "lambda index out of range");
        return DensityMatrix::pure(lambda_frame.col(init.index));
      case InitialState::Kind::product: {
        if (init.index >= from_full.cols()) throw Error(ErrorKind::BadConfig, "product index out of range");
        const ComplexVector psi = from_full.col(init.index);
        if (std::abs(psi.norm() - 1.0) > 1e-10)
          throw Error(ErrorKind::BadConfig, "product state lies outside the truncated subspace");
        return DensityMatrix::pure(psi);
      }
    }
    throw Error(ErrorKind::BadConfig, "unknown initial state");
  }

  double time_step(double requested) const {
    return requested > 0.0 ? requested : default_time_step(hamiltonian, spec.decay.max_channel_rate());
  }
};

/// J (sx(x)sx + sy(x)sy + sz(x)sz) on two qubits, |0> = g0.
inline ComplexMatrix heisenberg_interaction(double j) {
  ComplexMatrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, -kI, kI, 0;
  sz << 1, 0, 0, -1;
  return j * (kron(sx, sx) + kron(sy, sy) + kron(sz, sz));
}

namespace detail {

// Laser detuning putting |lambda_k> on resonance with its partner.
inline double resonant_detuning(const LambdaBasis& basis, const ComplexMatrix& h_int, Eigen::Index k) {
  const ComplexVector p = basis.partner(k);
  return basis.qubit_eigenvalues(k) - (p.adjoint() * h_int * p)(0, 0).real();
}

inline CoolingModel finish_full_model(SystemSpec spec, LambdaBasis basis) {
  CoolingModel m;
  m.hamiltonian = interaction_picture_hamiltonian(spec);
  m.resets = reset_operators(spec);
  m.target = basis.ground();
  m.lambda_frame = basis.states;
  m.from_full = ComplexMatrix::Identity(m.hamiltonian.rows(), m.hamiltonian.cols());
  m.spec = std::move(spec);
  m.basis = std::move(basis);
  return m;
}

}  // namespace detail

/// One atom whose qubit interaction has eigenstates |lambda_0>, |lambda_1>
/// (columns of cfg.qubit_rotation) with lambda_1 - lambda_0 = delta_lambda.
/// A single laser is tuned to resonance with |lambda_1>; the target is |lambda_0>.
inline CoolingModel build_one_qubit_scenario(const ScenarioConfig& cfg) {
  validate(cfg);
  if (cfg.kind != ScenarioKind::one_qubit) throw Error(ErrorKind::BadConfig, "not a one-qubit configuration");
  ComplexMatrix u = cfg.qubit_rotation.size() ? cfg.qubit_rotation : ComplexMatrix::Identity(2, 2);
  if (u.rows() != 2 || u.cols() != 2 || max_abs(u.adjoint() * u - ComplexMatrix::Identity(2, 2)) > 1e-10)
    throw Error(ErrorKind::BadConfig, "qubit rotation must be a 2x2 unitary");

  RealVector lam(2);
  lam << -0.5 * cfg.delta_lambda, 0.5 * cfg.delta_lambda;
  SystemSpec spec;
  spec.n_atoms = 1;
  spec.interaction = u * lam.cast<Complex>().asDiagonal() * u.adjoint();
  spec.decay = DecaySpec::uniform(cfg.gamma);
  LambdaBasis basis = lambda_basis_from_eigenpairs(1, lam, u);
  spec.lasers = {LaserSpec{cfg.omega, detail::resonant_detuning(basis, embed_interaction(spec), 1)}};
  return detail::finish_full_model(std::move(spec), std::move(basis));
}

/// Two atoms with a Heisenberg interaction; the degenerate triplet needs only
/// one laser frequency. Truncated mode keeps |lambda_0> .. |lambda_7>.
inline CoolingModel build_two_qubit_scenario(const ScenarioConfig& cfg) {
  validate(cfg);
  if (cfg.kind != ScenarioKind::two_qubit_heisenberg)
    throw Error(ErrorKind::BadConfig, "not a two-qubit configuration");
  SystemSpec spec;
  spec.n_atoms = 2;
  spec.interaction = heisenberg_interaction(cfg.coupling_j);
  spec.decay = DecaySpec::uniform(cfg.gamma);
  LambdaBasis basis = build_lambda_basis(spec);
  const std::vector<double> detunings = distinct_detunings(choose_detunings(basis, embed_interaction(spec)));
  for (double d : detunings) spec.lasers.push_back({cfg.omega, d});

  CoolingModel full = detail::finish_full_model(std::move(spec), std::move(basis));
  if (!cfg.truncate) return full;

  const ComplexMatrix b = full.basis.states;  // 16 x 8
  CoolingModel m = full;
  m.hamiltonian = b.adjoint() * full.hamiltonian * b;
  m.resets = compress(full.resets, b);
  m.target = ComplexVector::Unit(b.cols(), 0);
  m.lambda_frame = ComplexMatrix::Identity(b.cols(), b.cols());
  m.from_full = b.adjoint();
  m.truncated = true;
  return m;
}

inline CoolingModel build_scenario(const ScenarioConfig& cfg) {
  return cfg.kind == ScenarioKind::one_qubit ? build_one_qubit_scenario(cfg) : build_two_qubit_scenario(cfg);
}

struct SimulationOptions {
  std::size_t max_samples = 2000;  // stored time points, roughly
  bool keep_states = false;
};

/// Integrates the scenario from its configured initial state, recording the
/// target fidelity and the total excited-state population.
inline Trajectory simulate(const CoolingModel& model, const ScenarioConfig& cfg, SimulationOptions opt = {}) {
  IntegrateOptions io;
  io.t_max = cfg.t_max;
  io.dt = model.time_step(cfg.dt);
  const auto steps = static_cast<std::size_t>(std::ceil(io.t_max / io.dt));
  io.sample_every = opt.max_samples ? std::max<std::size_t>(1, steps / opt.max_samples) : 1;
  io.keep_states = opt.keep_states;
  io.observables.push_back(population("fidelity", model.target));
  const ComplexMatrix excited =
      ComplexMatrix::Identity(model.dim(), model.dim()) - model.ground_projector();
  io.observables.push_back({"excited_population", [excited](const ComplexMatrix& rho) {
                              return (excited * rho).trace().real();
                            }});
  return integrate(model.hamiltonian, model.resets, model.initial_state(cfg.initial), io);
}

inline Trajectory fidelity_vs_time(const ScenarioConfig& cfg, SimulationOptions opt = {}) {
  if (cfg.kind != ScenarioKind::two_qubit_heisenberg)
    throw Error(ErrorKind::BadConfig, "fidelity_vs_time expects a two-qubit configuration");
  return simulate(build_two_qubit_scenario(cfg), cfg, opt);
}

/// Steady-state fidelity with the target from the Liouvillian null space.
inline double steady_fidelity(const CoolingModel& model) {
  return fidelity(steady_state(model.liouvillian()).rho, model.target);
}

struct SweepTable {
  std::vector<std::string> axes;     // leading columns that span the grid
  std::vector<std::string> columns;  // all column names, axes first
  std::vector<std::vector<double>> rows;
  std::string provenance;
};

namespace detail {

// Runs fn(i) for i in [0, n) on `jobs` threads; results land in index order.
template <class T>
std::vector<T> parallel_map(std::size_t n, unsigned jobs, const std::function<T(std::size_t)>& fn) {
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  auto worker = [&](unsigned w, unsigned stride) {
    for (std::size_t i = w; i < n; i += stride) {
      try {
        slots[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (jobs == 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(worker, w, jobs);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace detail

/// One-qubit steady fidelity over an (Omega, Delta_lambda) grid, closed form
/// next to the null-space solve.
inline SweepTable sweep_fidelity_vs_detuning(const std::vector<double>& omegas, const std::vector<double>& deltas,
                                             double gamma = 1.0, unsigned jobs = 1) {
  SweepTable table;
  table.axes = {"omega", "delta_lambda"};
  table.columns = {"omega", "delta_lambda", "fidelity_formula", "fidelity_numeric"};
  table.provenance = "fidelity_formula: closed form; fidelity_numeric: Liouvillian null space";
  const std::size_t n = omegas.size() * deltas.size();
  table.rows = detail::parallel_map<std::vector<double>>(n, jobs, [&](std::size_t i) {
    const double omega = omegas[i / deltas.size()];
    const double delta = deltas[i % deltas.size()];
    ScenarioConfig cfg;
    cfg.omega = omega;
    cfg.gamma = gamma;
    cfg.delta_lambda = delta;
    const double numeric = steady_fidelity(build_one_qubit_scenario(cfg));
    return std::vector<double>{omega, delta, fidelity_formula(omega, gamma, delta), numeric};
  });
  return table;
}

/// Cooling rate fitted to a one-qubit trajectory started in |lambda_1>.
/// The horizon is 12 slowest-mode lifetimes.
inline double simulated_cooling_rate(double omega, double gamma, double delta_lambda) {
  ScenarioConfig cfg;
  cfg.omega = omega;
  cfg.gamma = gamma;
  cfg.delta_lambda = delta_lambda;
  cfg.initial = {InitialState::Kind::lambda, 1};
  const CoolingModel model = build_one_qubit_scenario(cfg);
  const Liouvillian liouv = model.liouvillian();
  const double f_ss = fidelity(steady_state(liouv).rho, model.target);
  cfg.t_max = 12.0 / slowest_relaxation_rate(liouv);
  const Trajectory traj = simulate(model, cfg, {4000, false});
  return cooling_rate_fit(traj, f_ss);
}

/// Cooling rate against Omega at a fixed large detuning: the large-detuning
/// closed form next to a fit to simulated dynamics.
inline SweepTable sweep_rate_vs_omega(const std::vector<double>& omegas, double delta_lambda, double gamma = 1.0,
                                      unsigned jobs = 1) {
  for (double omega : omegas)
    if (std::abs(delta_lambda) < 10.0 * std::max(omega, gamma))
      throw Error(ErrorKind::BadConfig, "delta_lambda must be at least 10 max(Omega, Gamma)");
  SweepTable table;
  table.axes = {"omega"};
  table.columns = {"omega", "rate_formula", "rate_fit"};
  table.provenance = "rate_formula: large-detuning closed form; rate_fit: simulated trajectory";
  table.rows = detail::parallel_map<std::vector<double>>(omegas.size(), jobs, [&](std::size_t i) {
    const double omega = omegas[i];
    return std::vector<double>{omega, cooling_rate_large_detuning(omega, gamma),
                               simulated_cooling_rate(omega, gamma, delta_lambda)};
  });
  return table;
}

}  // namespace qcool
