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

// Physical model of N four-level atoms: qubit ground states g0, g1 and
// auxiliary excited states e0, e1, an interaction acting on the qubits, and a
// set of cooling lasers driving g_j <-> e_j.
//
// Product-basis ordering: atom 1 is the most significant digit, and each atom
// is ordered (g0, g1, e0, e1). Qubit-space ordering is the same with |0> = g0,
// |1> = g1. Energies and rates are in units of the per-channel decay rate, and
// hbar = 1.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcool/linalg.hpp"

namespace qcool {

enum class Level : int { g0 = 0, g1 = 1, e0 = 2, e1 = 3 };

inline Level parse_level(std::string_view label) {
  if (label == "g0") return Level::g0;
  if (label == "g1") return Level::g1;
  if (label == "e0") return Level::e0;
  if (label == "e1") return Level::e1;
  throw Error(ErrorKind::BadLabel, "unknown atomic level '" + std::string(label) + "'");
}

inline std::size_t qubit_dim(int n_atoms) { return std::size_t{1} << n_atoms; }
inline std::size_t full_dim(int n_atoms) { return std::size_t{1} << (2 * n_atoms); }

inline std::size_t atom_basis_index(std::span<const Level> configuration) {
  std::size_t index = 0;
  for (Level level : configuration) {
    const int digit = static_cast<int>(level);
    if (digit < 0 || digit > 3) throw Error(ErrorKind::BadLabel, "level out of range");
    index = 4 * index + static_cast<std::size_t>(digit);
  }
  return index;
}

inline std::size_t atom_basis_index(std::span<const std::string_view> labels) {
  std::vector<Level> levels;
  levels.reserve(labels.size());
  for (auto label : labels) levels.push_back(parse_level(label));
  return atom_basis_index(levels);
}

/// Product-basis index of the all-ground configuration encoding `qubit_index`.
inline std::size_t ground_index(std::size_t qubit_index, int n_atoms) {
  std::size_t index = 0;
  for (int atom = 0; atom < n_atoms; ++atom) {
    const std::size_t bit = (qubit_index >> (n_atoms - 1 - atom)) & 1u;
    index = 4 * index + bit;
  }
  return index;
}

struct LaserSpec {
  double rabi = 0.0;      // Omega, shared by every g_j <-> e_j transition of every atom
  double detuning = 0.0;  // Delta_k = w~ - w - w_k
};

struct DecaySpec {
  // gamma_jk[j][k]: rate of e_k -> g_j on each atom.
  std::array<std::array<double, 2>, 2> gamma_jk{};

  static DecaySpec uniform(double rate) {
    DecaySpec d;
    for (auto& row : d.gamma_jk) row.fill(rate);
    return d;
  }

  /// Total decay rate out of e_k.
  double total_from(int excited) const { return gamma_jk[0][excited] + gamma_jk[1][excited]; }

  double max_channel_rate() const {
    double m = 0.0;
    for (const auto& row : gamma_jk)
      for (double g : row) m = std::max(m, g);
    return m;
  }
};

struct SystemSpec {
  int n_atoms = 1;
  double omega_g = 0.0;    // energy of g0 and g1
  double omega_e = 100.0;  // energy of e0 and e1
  ComplexMatrix interaction;  // 2^N x 2^N, acts on the qubit manifold
  DecaySpec decay;
  std::vector<LaserSpec> lasers;
};

inline void validate(const SystemSpec& spec) {
  if (spec.n_atoms < 1 || spec.n_atoms > 6)
    throw Error(ErrorKind::BadConfig, "n_atoms must be in [1, 6]");
  const auto q = static_cast<Eigen::Index>(qubit_dim(spec.n_atoms));
  if (spec.interaction.rows() != q || spec.interaction.cols() != q)
    throw Error(ErrorKind::DimensionMismatch,
                "interaction must be " + std::to_string(q) + "x" + std::to_string(q));
  if (hermiticity_error(spec.interaction) > 1e-10 * std::max(1.0, max_abs(spec.interaction)))
    throw Error(ErrorKind::NotHermitian, "interaction Hamiltonian is not Hermitian");
  if (!(spec.omega_e > spec.omega_g))
    throw Error(ErrorKind::BadConfig, "excited energy must exceed ground energy");
  for (const auto& row : spec.decay.gamma_jk)
    for (double g : row)
      if (!std::isfinite(g) || g < 0.0) throw Error(ErrorKind::BadConfig, "decay rates must be finite and >= 0");
  for (const auto& laser : spec.lasers) {
    if (!std::isfinite(laser.rabi) || laser.rabi < 0.0)
      throw Error(ErrorKind::BadConfig, "Rabi frequency must be finite and >= 0");
    if (!std::isfinite(laser.detuning)) throw Error(ErrorKind::BadConfig, "detuning must be finite");
  }
}

/// I (x) ... (x) op (x) ... (x) I with op (4x4) on `atom` (0-based).
inline ComplexMatrix single_atom_operator(int n_atoms, int atom, const ComplexMatrix& op) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  const ComplexMatrix id = ComplexMatrix::Identity(4, 4);
  for (int a = 0; a < n_atoms; ++a) out = kron(out, a == atom ? op : id);
  return out;
}

/// |to><from| on a single atom.
inline ComplexMatrix atom_transition(Level to, Level from) {
  ComplexMatrix op = ComplexMatrix::Zero(4, 4);
  op(static_cast<int>(to), static_cast<int>(from)) = 1.0;
  return op;
}

/// sum_i sum_j |e_j>_i <g_j|
inline ComplexMatrix excitation_operator(int n_atoms) {
  const ComplexMatrix one = atom_transition(Level::e0, Level::g0) + atom_transition(Level::e1, Level::g1);
  const auto d = static_cast<Eigen::Index>(full_dim(n_atoms));
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (int atom = 0; atom < n_atoms; ++atom) out += single_atom_operator(n_atoms, atom, one);
  return out;
}

/// Number of excited atoms, sum_i sum_j |e_j>_i <e_j|.
inline ComplexMatrix excitation_number(int n_atoms) {
  const ComplexMatrix one = atom_transition(Level::e0, Level::e0) + atom_transition(Level::e1, Level::e1);
  const auto d = static_cast<Eigen::Index>(full_dim(n_atoms));
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (int atom = 0; atom < n_atoms; ++atom) out += single_atom_operator(n_atoms, atom, one);
  return out;
}

/// Isometry 4^N x 2^N mapping qubit states onto the all-ground configurations.
inline ComplexMatrix ground_isometry(int n_atoms) {
  const auto q = qubit_dim(n_atoms);
  ComplexMatrix v = ComplexMatrix::Zero(static_cast<Eigen::Index>(full_dim(n_atoms)),
                                        static_cast<Eigen::Index>(q));
  for (std::size_t n = 0; n < q; ++n)
    v(static_cast<Eigen::Index>(ground_index(n, n_atoms)), static_cast<Eigen::Index>(n)) = 1.0;
  return v;
}

inline ComplexMatrix build_free_hamiltonian(const SystemSpec& spec) {
  validate(spec);
  const int n = spec.n_atoms;
  const auto d = static_cast<Eigen::Index>(full_dim(n));
  const ComplexMatrix excited = excitation_number(n);
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const double n_exc = excited(k, k).real();
    h(k, k) = (n - n_exc) * spec.omega_g + n_exc * spec.omega_e;
  }
  return h;
}

/// The qubit interaction on the ground manifold, zero on every configuration
/// with an excited atom. A nonzero excited-sector interaction would be added
/// here; the cooling scheme treats it as zero.
inline ComplexMatrix embed_interaction(const SystemSpec& spec) {
  validate(spec);
  const ComplexMatrix v = ground_isometry(spec.n_atoms);
  return v * spec.interaction * v.adjoint();
}

/// Eigenstates of the interaction on the qubit manifold, extended by the
/// laser-coupled partner states (1/sqrt N) sum_i sum_j |e_j>_i<g_j| |lambda_n>.
struct LambdaBasis {
  int n_atoms = 1;
  RealVector qubit_eigenvalues;  // ascending
  ComplexMatrix qubit_states;    // 2^N x 2^N, columns |lambda_n>
  ComplexMatrix states;          // 4^N x 2^(N+1), columns |lambda_m> in the product basis

  std::size_t dim_qubit() const { return qubit_dim(n_atoms); }
  ComplexVector state(Eigen::Index m) const { return states.col(m); }
  ComplexVector ground() const { return states.col(0); }
  ComplexVector partner(Eigen::Index n) const {
    return states.col(static_cast<Eigen::Index>(dim_qubit()) + n);
  }
  double ground_gap() const {
    return qubit_eigenvalues.size() > 1 ? qubit_eigenvalues(1) - qubit_eigenvalues(0) : INFINITY;
  }
};

/// Builds the basis from given qubit eigenpairs without diagonalizing, so an
/// explicit (possibly degenerate) choice of |lambda_n> is honored.
inline LambdaBasis lambda_basis_from_eigenpairs(int n_atoms, RealVector eigenvalues,
                                                ComplexMatrix qubit_states) {
  const auto q = static_cast<Eigen::Index>(qubit_dim(n_atoms));
  if (eigenvalues.size() != q || qubit_states.rows() != q || qubit_states.cols() != q)
    throw Error(ErrorKind::DimensionMismatch, "eigenpairs do not match the qubit dimension");
  LambdaBasis basis;
  basis.n_atoms = n_atoms;
  basis.qubit_eigenvalues = std::move(eigenvalues);
  basis.qubit_states = std::move(qubit_states);

  const ComplexMatrix grounds = ground_isometry(n_atoms) * basis.qubit_states;
  const ComplexMatrix partners =
      excitation_operator(n_atoms) * grounds / std::sqrt(static_cast<double>(n_atoms));
  basis.states.resize(grounds.rows(), 2 * q);
  basis.states << grounds, partners;

  const ComplexMatrix gram = basis.states.adjoint() * basis.states;
  const double defect = max_abs(gram - ComplexMatrix::Identity(2 * q, 2 * q));
  if (defect > 1e-10)
    throw Error(ErrorKind::InvalidState,
                "lambda basis is not orthonormal (defect " + std::to_string(defect) + ")");
  return basis;
}

inline LambdaBasis build_lambda_basis(const SystemSpec& spec) {
  validate(spec);
  HermitianEigen eig = hermitian_eigen(spec.interaction);
  const RealVector& lam = eig.values;
  if (lam.size() > 1 && lam(1) - lam(0) <= 1e-9 * std::max(1.0, lam.cwiseAbs().maxCoeff()))
    throw Error(ErrorKind::DegenerateGround,
                "lowest interaction eigenvalue is degenerate; the cooling target is not unique");
  return lambda_basis_from_eigenpairs(spec.n_atoms, std::move(eig.values), std::move(eig.vectors));
}

/// Laser drive in the lab frame (rotating-wave form):
/// sum_k (Omega_k/2) e^{-i w_k t} sum_i sum_j |e_j>_i<g_j| + h.c.,
/// with laser frequency w_k = w~ - w - Delta_k.
inline ComplexMatrix build_laser_hamiltonian(const SystemSpec& spec, double t) {
  validate(spec);
  const ComplexMatrix raise = excitation_operator(spec.n_atoms);
  Complex amplitude = 0.0;
  for (const auto& laser : spec.lasers) {
    const double w_laser = spec.omega_e - spec.omega_g - laser.detuning;
    amplitude += 0.5 * laser.rabi * std::exp(-kI * w_laser * t);
  }
  const ComplexMatrix up = amplitude * raise;
  return up + up.adjoint();
}

/// Interaction plus drive in the frame rotating with the free Hamiltonian;
/// the optical frequency drops out and each laser carries e^{i Delta_k t}.
inline ComplexMatrix free_frame_hamiltonian(const SystemSpec& spec, double t) {
  validate(spec);
  Complex amplitude = 0.0;
  for (const auto& laser : spec.lasers) amplitude += 0.5 * laser.rabi * std::exp(kI * laser.detuning * t);
  const ComplexMatrix up = amplitude * excitation_operator(spec.n_atoms);
  return embed_interaction(spec) + up + up.adjoint();
}

/// Lab-frame H_Free + H_Int + H_Laser(t).
inline ComplexMatrix lab_hamiltonian(const SystemSpec& spec, double t) {
  return build_free_hamiltonian(spec) + embed_interaction(spec) + build_laser_hamiltonian(spec, t);
}

/// Collapses detunings that agree to within `tolerance` (sorted ascending).
inline std::vector<double> distinct_detunings(std::vector<double> detunings, double tolerance = 1e-9) {
  std::sort(detunings.begin(), detunings.end());
  std::vector<double> out;
  for (double d : detunings)
    if (out.empty() || std::abs(d - out.back()) > tolerance * std::max(1.0, std::abs(d))) out.push_back(d);
  return out;
}

struct SingleDrive {
  double rabi = 0.0;
  double detuning = 0.0;
};

/// Lasers sharing one frequency add coherently; more than one distinct
/// frequency cannot be removed by a single rotating frame.
inline SingleDrive single_frequency_drive(const SystemSpec& spec) {
  SingleDrive drive;
  if (spec.lasers.empty()) return drive;
  std::vector<double> detunings;
  for (const auto& laser : spec.lasers) detunings.push_back(laser.detuning);
  if (distinct_detunings(detunings).size() > 1)
    throw Error(ErrorKind::MultipleFrequencies,
                "lasers carry more than one frequency; use the time-dependent path");
  drive.detuning = spec.lasers.front().detuning;
  for (const auto& laser : spec.lasers) drive.rabi += laser.rabi;
  return drive;
}

/// Time-independent Hamiltonian in the frame H_0 = H_Free - Delta * N_exc:
///   sum_i sum_j (Omega/2)(|e_j>_i<g_j| + h.c.) + H_Int + Delta * (N_exc - 1).
/// Energies are measured from the single-excitation sector, so in the lambda
/// basis the qubit states sit at lambda_n - Delta and their partners at zero.
inline ComplexMatrix interaction_picture_hamiltonian(const SystemSpec& spec) {
  validate(spec);
  const SingleDrive drive = single_frequency_drive(spec);
  const int n = spec.n_atoms;
  const auto d = static_cast<Eigen::Index>(full_dim(n));
  const ComplexMatrix up = 0.5 * drive.rabi * excitation_operator(n);
  return up + up.adjoint() + embed_interaction(spec) +
         drive.detuning * (excitation_number(n) - ComplexMatrix::Identity(d, d));
}

/// chi(t) = sum_k (sqrt(N) Omega_k / 2) e^{-i (w~ - w - Delta_k) t}, the matrix
/// element <lambda_{2^N+n}| H_Laser(t) |lambda_n> shared by every n.
inline Complex drive_coefficient(const SystemSpec& spec, double t) {
  validate(spec);
  const double root_n = std::sqrt(static_cast<double>(spec.n_atoms));
  Complex chi = 0.0;
  for (const auto& laser : spec.lasers)
    chi += 0.5 * root_n * laser.rabi *
           std::exp(-kI * (spec.omega_e - spec.omega_g - laser.detuning) * t);
  return chi;
}

inline void require_unique_ground(const LambdaBasis& basis) {
  const RealVector& lam = basis.qubit_eigenvalues;
  if (lam.size() > 1 && basis.ground_gap() <= 1e-9 * std::max(1.0, lam.cwiseAbs().maxCoeff()))
    throw Error(ErrorKind::DegenerateGround, "ground state of the interaction is degenerate");
}

/// Detunings Delta_k (k = 1 .. 2^N - 1) that put laser k on resonance with the
/// |lambda_k> <-> |lambda_{2^N+k}> transition, leaving only |lambda_0> detuned:
/// Delta_k = lambda_k - <lambda_{2^N+k}| H_Int |lambda_{2^N+k}>.
inline std::vector<double> choose_detunings(const LambdaBasis& basis, const ComplexMatrix& interaction_full) {
  require_unique_ground(basis);
  if (interaction_full.rows() != basis.states.rows())
    throw Error(ErrorKind::DimensionMismatch, "interaction does not act on the full atomic space");
  const auto q = static_cast<Eigen::Index>(basis.dim_qubit());
  std::vector<double> out;
  for (Eigen::Index k = 1; k < q; ++k) {
    const ComplexVector p = basis.partner(k);
    const double shift = (p.adjoint() * interaction_full * p)(0, 0).real();
    out.push_back(basis.qubit_eigenvalues(k) - shift);
  }
  return out;
}

/// min_k |E_{2^N} - E_0 - (E_{2^N+k} - E_k)| / max(sqrt(N) Omega, Gamma), with
/// Gamma the largest per-channel decay rate. Values >> 1 mean the ground state
/// is the only one that escapes resonant driving by a wide margin.
inline double cooling_condition_margin(const LambdaBasis& basis, const SystemSpec& spec) {
  const ComplexMatrix h_int = embed_interaction(spec);
  const auto q = static_cast<Eigen::Index>(basis.dim_qubit());
  auto shift = [&](Eigen::Index n) {
    const ComplexVector p = basis.partner(n);
    return (p.adjoint() * h_int * p)(0, 0).real();
  };
  double omega = 0.0;
  for (const auto& laser : spec.lasers) omega = std::max(omega, laser.rabi);
  const double scale = std::max(std::sqrt(static_cast<double>(spec.n_atoms)) * omega,
                                spec.decay.max_channel_rate());
  if (scale <= 0.0) throw Error(ErrorKind::BadConfig, "margin undefined without drive or decay");
  double margin = INFINITY;
  const double lam0 = basis.qubit_eigenvalues(0);
  for (Eigen::Index k = 1; k < q; ++k) {
    const double offset = shift(0) - shift(k) + basis.qubit_eigenvalues(k) - lam0;
    margin = std::min(margin, std::abs(offset) / scale);
  }
  return margin;
}

}  // namespace qcool
