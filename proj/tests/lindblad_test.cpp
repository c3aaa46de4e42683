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

#include "qcool/lindblad.hpp"
#include "qcool/scenarios.hpp"
#include "support.hpp"

namespace qcool {
namespace {

using testing::Gen;

SystemSpec random_spec(Gen& gen, int n_atoms) {
  SystemSpec spec;
  spec.n_atoms = n_atoms;
  spec.interaction = gen.hermitian(static_cast<Eigen::Index>(qubit_dim(n_atoms)), 2.0);
  for (auto& row : spec.decay.gamma_jk)
    for (double& g : row) g = gen.uniform(0.1, 1.5);
  spec.lasers = {LaserSpec{gen.uniform(0.1, 2.0), gen.uniform(-3.0, 3.0)}};
  return spec;
}

TEST(ResetOperators, OrderingAndRates) {
  SystemSpec spec;
  spec.n_atoms = 2;
  spec.interaction = ComplexMatrix::Zero(4, 4);
  spec.decay.gamma_jk = {{{0.1, 0.2}, {0.3, 0.4}}};
  const ResetOperatorSet set = reset_operators(spec);
  ASSERT_EQ(set.size(), 8u);
  EXPECT_EQ(set.dim, 16);
  const ResetOperator& r = set.operators[5];  // atom 1, j = 0, k = 1
  EXPECT_EQ(r.atom, 1);
  EXPECT_EQ(r.ground, 0);
  EXPECT_EQ(r.excited, 1);
  EXPECT_DOUBLE_EQ(r.rate, 0.2);
  const std::array<Level, 2> from{Level::g1, Level::e1}, to{Level::g1, Level::g0};
  EXPECT_EQ(r.op(atom_basis_index(to), atom_basis_index(from)), Complex(1.0, 0.0));
  EXPECT_DOUBLE_EQ(r.op.cwiseAbs().sum(), 4.0);  // identity on the 4 levels of atom 0
}

TEST(Dissipator, TracelessAndHermitianOnRandomStates) {
  Gen gen(21);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = gen.integer(1, 2);
    const SystemSpec spec = random_spec(gen, n);
    const ResetOperatorSet ops = reset_operators(spec);
    const DensityMatrix rho = gen.state(ops.dim, gen.integer(1, 4));
    const ComplexMatrix d = dissipator(rho, ops);
    EXPECT_LT(std::abs(d.trace()), 1e-10);
    EXPECT_LT(hermiticity_error(d), 1e-12);
  }
}

TEST(Dissipator, RejectsWrongDimension) {
  SystemSpec spec;
  spec.interaction = ComplexMatrix::Zero(2, 2);
  try {
    dissipator(DensityMatrix::maximally_mixed(3), reset_operators(spec));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(MasterRhs, MatchesTheTextbookForm) {
  Gen gen(22);
  const SystemSpec spec = random_spec(gen, 1);
  const ResetOperatorSet ops = reset_operators(spec);
  const ComplexMatrix h = interaction_picture_hamiltonian(spec);
  const ComplexMatrix rho = gen.state(4).matrix();
  ComplexMatrix expected = -kI * (h * rho - rho * h);
  for (const auto& r : ops.operators) {
    const ComplexMatrix rr = r.op.adjoint() * r.op;
    expected += r.rate * (r.op * rho * r.op.adjoint() - 0.5 * (rr * rho + rho * rr));
  }
  EXPECT_LT(max_abs(master_rhs(h, rho, ops) - expected), 1e-13);
}

TEST(Liouvillian, AgreesWithRhsOnRandomStates) {
  Gen gen(23);
  for (int n = 1; n <= 2; ++n) {
    const SystemSpec spec = random_spec(gen, n);
    const ResetOperatorSet ops = reset_operators(spec);
    const ComplexMatrix h = interaction_picture_hamiltonian(spec);
    const Liouvillian l = assemble_liouvillian(h, ops);
    EXPECT_EQ(l.matrix.rows(), ops.dim * ops.dim);
    for (int trial = 0; trial < 20; ++trial) {
      const DensityMatrix rho = gen.state(ops.dim);
      EXPECT_LT(max_abs(l.apply(rho.matrix()) - master_rhs(h, rho, ops)), 1e-12);
    }
  }
}

TEST(Liouvillian, TracePreservingRowSum) {
  // tr(L(X)) = 0 for every X means the trace functional is a left null vector.
  Gen gen(24);
  const SystemSpec spec = random_spec(gen, 2);
  const Liouvillian l = assemble_liouvillian(interaction_picture_hamiltonian(spec), reset_operators(spec));
  const ComplexVector id = vec(ComplexMatrix::Identity(16, 16));
  EXPECT_LT((id.adjoint() * l.matrix).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Compress, MatrixElementsInTheGivenBasis) {
  Gen gen(25);
  const SystemSpec spec = random_spec(gen, 1);
  const ResetOperatorSet ops = reset_operators(spec);
  const ComplexMatrix b = gen.unitary(4).leftCols(3);
  const ResetOperatorSet c = compress(ops, b);
  EXPECT_EQ(c.dim, 3);
  for (std::size_t k = 0; k < ops.size(); ++k) {
    for (Eigen::Index i = 0; i < 3; ++i)
      for (Eigen::Index j = 0; j < 3; ++j) {
        const Complex element = (b.col(i).adjoint() * ops.operators[k].op * b.col(j))(0, 0);
        EXPECT_LT(std::abs(c.operators[k].op(i, j) - element), 1e-14);
      }
    EXPECT_EQ(c.operators[k].rate, ops.operators[k].rate);
  }
}

TEST(Integrate, UndrivenExcitedStateDecaysExponentially) {
  const double gamma = 0.8;
  SystemSpec spec;
  spec.interaction = ComplexMatrix::Zero(2, 2);
  spec.decay = DecaySpec::uniform(gamma / 2.0);  // two channels out of e0
  const std::array<Level, 1> e0{Level::e0};
  ComplexVector psi = ComplexVector::Zero(4);
  psi(static_cast<Eigen::Index>(atom_basis_index(e0))) = 1.0;
  IntegrateOptions opt;
  opt.t_max = 3.0;
  opt.dt = 0.01;
  opt.observables = {population("excited", psi)};
  const Trajectory traj =
      integrate(ComplexMatrix(ComplexMatrix::Zero(4, 4)), reset_operators(spec), DensityMatrix::pure(psi), opt);
  const auto& p = traj.observable("excited");
  for (std::size_t k = 0; k < p.size(); k += 50) EXPECT_NEAR(p[k], std::exp(-gamma * traj.times[k]), 1e-9);
  EXPECT_NEAR(p.back(), std::exp(-gamma * 3.0), 1e-9);
  // The decay is split evenly between the two ground levels.
  const ComplexMatrix& rho = traj.states.back().matrix();
  EXPECT_NEAR(rho(0, 0).real(), rho(1, 1).real(), 1e-12);
}

TEST(Integrate, SamplingAndFinalTime) {
  Gen gen(26);
  const SystemSpec spec = random_spec(gen, 1);
  IntegrateOptions opt;
  opt.t_max = 1.05;
  opt.dt = 0.1;
  opt.sample_every = 3;
  const Trajectory traj = integrate(interaction_picture_hamiltonian(spec), reset_operators(spec),
                                    DensityMatrix::maximally_mixed(4), opt);
  // 11 steps, the last one shortened; samples at steps 0, 3, 6, 9 and 11.
  ASSERT_EQ(traj.times.size(), 5u);
  EXPECT_DOUBLE_EQ(traj.times.back(), 1.05);
  EXPECT_NEAR(traj.times[1], 0.3, 1e-15);
  EXPECT_EQ(traj.states.size(), 5u);
}

TEST(Integrate, StatesStayPhysical) {
  Gen gen(27);
  for (int trial = 0; trial < 5; ++trial) {
    const SystemSpec spec = random_spec(gen, 2);
    const ComplexMatrix h = interaction_picture_hamiltonian(spec);
    IntegrateOptions opt;
    opt.t_max = 5.0;
    opt.dt = default_time_step(h, spec.decay.max_channel_rate());
    const Trajectory traj = integrate(h, reset_operators(spec), gen.state(16, 2), opt);
    for (const auto& rho : traj.states) {
      const StateDefects d = inspect_state(rho.matrix());
      EXPECT_LE(d.trace_error, 1e-9);
      EXPECT_LE(d.hermiticity, 1e-10);
      EXPECT_GE(d.min_eigenvalue, -1e-9);
    }
  }
}

TEST(Integrate, OversizedStepIsReported) {
  Gen gen(28);
  const SystemSpec spec = random_spec(gen, 1);
  IntegrateOptions opt;
  opt.t_max = 50.0;
  opt.dt = 2.0;
  const ComplexMatrix h = 20.0 * interaction_picture_hamiltonian(spec);
  try {
    integrate(h, reset_operators(spec), DensityMatrix::maximally_mixed(4), opt);
    FAIL() << "expected StepTooLarge";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::StepTooLarge);
    EXPECT_TRUE(e.is_numerical());
  }
}

TEST(Integrate, FourthOrderConvergence) {
  ScenarioConfig cfg;
  cfg.omega = 1.0;
  cfg.delta_lambda = 3.0;
  const CoolingModel model = build_one_qubit_scenario(cfg);
  const DensityMatrix rho0 = model.initial_state({InitialState::Kind::lambda, 1});
  auto final_state = [&](double dt) {
    IntegrateOptions opt;
    opt.t_max = 4.0;
    opt.dt = dt;
    opt.sample_every = 1000000;
    return integrate(model.hamiltonian, model.resets, rho0, opt).states.back().matrix();
  };
  const ComplexMatrix reference = final_state(0.2 / 64);
  const double e1 = max_abs(final_state(0.2) - reference);
  const double e2 = max_abs(final_state(0.1) - reference);
  EXPECT_GE(std::log2(e1 / e2), 3.5) << e1 << " " << e2;
}

TEST(DefaultTimeStep, ResolvesTheFastestScale) {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 0) = 50.0;
  EXPECT_DOUBLE_EQ(default_time_step(h, 1.0), 0.002);
  EXPECT_DOUBLE_EQ(default_time_step(ComplexMatrix::Zero(2, 2), 0.5), 0.02);
}

}  // namespace
}  // namespace qcool
