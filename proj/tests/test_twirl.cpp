// Copyright 2026 The depofold Authors
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
#include <set>

#include "depofold/twirl.hpp"
#include "oracles.hpp"

namespace depofold {
namespace {

TEST(TwirlTable, Examples) {
  const auto table = twirl_table(GateKind::CZ);
  EXPECT_EQ(table[0].pre, (std::array{Pauli::I, Pauli::I}));
  EXPECT_EQ(table[0].post, (std::array{Pauli::I, Pauli::I}));
  // pre (X, I) sits at index 1
  EXPECT_EQ(table[1].pre, (std::array{Pauli::X, Pauli::I}));
  EXPECT_EQ(table[1].post, (std::array{Pauli::X, Pauli::Z}));
  EXPECT_THROW(twirl_table(GateKind::RZZ), std::invalid_argument);
  EXPECT_THROW(twirl_table(GateKind::SX), std::invalid_argument);
}

TEST(TwirlTable, EveryFrameIsIdentityPreserving) {
  const auto table = twirl_table(GateKind::CZ);
  std::set<std::pair<int, int>> pres;
  const oracle::Mat cz = oracle::gate_unitary(Gate::cz(0, 1), 2);
  auto pm = [](Pauli p) {
    switch (p) {
      case Pauli::X: return oracle::px();
      case Pauli::Y: return oracle::py();
      case Pauli::Z: return oracle::pz();
      default: return oracle::id2();
    }
  };
  for (const auto& f : table) {
    pres.insert({static_cast<int>(f.pre[0]), static_cast<int>(f.pre[1])});
    EXPECT_LT(phase_free_distance(frame_unitary(GateKind::CZ, f), two_qubit_matrix(Gate::cz(0, 1))), 1e-12);
    const oracle::Mat pre = oracle::kron(pm(f.pre[1]), pm(f.pre[0]));
    const oracle::Mat post = oracle::kron(pm(f.post[1]), pm(f.post[0]));
    EXPECT_LT(oracle::phase_free(post * cz * pre, cz), 1e-12);
  }
  EXPECT_EQ(pres.size(), 16u);
}

TEST(PauliGates, MatchPaulisUpToPhase) {
  for (Pauli p : {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z}) {
    Matrix2cd u = Matrix2cd::Identity();
    for (const auto& g : pauli_gates(p, 0)) u = gate_matrix(g) * u;
    EXPECT_LT(phase_free_distance(u, pauli_matrix(p)), 1e-12);
  }
}

TEST(TwirlCircuit, NoTwoQubitGatesUnchanged) {
  const Circuit c(2, {Gate::sx(0), Gate::rz(1, 0.3)}, {0});
  EXPECT_EQ(twirl_circuit(c, Rng(1)), c);
}

TEST(TwirlCircuit, PreservesUnitaryProperty) {
  Rng rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(2));
    const Circuit c(n, oracle::random_gates(rng, n, 12), {0});
    const Circuit t = twirl_circuit(c, rng.split(trial));
    EXPECT_LT(oracle::phase_free(oracle::circuit_unitary(t.gates(), n), oracle::circuit_unitary(c.gates(), n)), 1e-9);
    EXPECT_EQ(t.count_2q(), c.count_2q());
  }
}

TEST(TwirlCircuit, DeterministicAndFrameWrapsInjected) {
  const Circuit base(2, {Gate::sx(0), Gate::cz(0, 1), Gate::cz(0, 1), Gate::sx(1)}, {0});
  const Circuit c = inject_coherent(base, 0.15);
  EXPECT_EQ(twirl_circuit(c, Rng(5)), twirl_circuit(c, Rng(5)));
  bool differs = false;
  for (std::uint64_t s = 0; s < 20; ++s) differs |= !(twirl_circuit(c, Rng(s)) == twirl_circuit(c, Rng(5)));
  EXPECT_TRUE(differs);
  const auto& g = twirl_circuit(c, Rng(9)).gates();
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g[i].kind == GateKind::CZ) {
      ASSERT_LT(i + 2, g.size());
      EXPECT_TRUE(g[i + 1].injected);
      EXPECT_TRUE(g[i + 2].injected);
    }
}

TEST(TwirlCircuit, FrameAverageIsPauliChannel) {
  // Averaging CZ + coherent RX over all 16 frames leaves a Pauli channel: in
  // the Pauli transfer matrix every off-diagonal entry vanishes after removing CZ.
  const Gate rx0 = Gate::rx(0, 0.3), rx1 = Gate::rx(1, 0.3);
  const oracle::Mat cz = oracle::gate_unitary(Gate::cz(0, 1), 2);
  const oracle::Mat noisy = oracle::gate_unitary(rx1, 2) * oracle::gate_unitary(rx0, 2) * cz;
  const auto table = twirl_table(GateKind::CZ);
  auto pm = [](Pauli p) {
    switch (p) {
      case Pauli::X: return oracle::px();
      case Pauli::Y: return oracle::py();
      case Pauli::Z: return oracle::pz();
      default: return oracle::id2();
    }
  };
  std::vector<oracle::Mat> paulis;
  for (Pauli a : {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z})
    for (Pauli b : {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z}) paulis.push_back(oracle::kron(pm(a), pm(b)));
  // channel E(rho) = avg_f post noisy pre rho (...)^dag, then undo the ideal CZ
  Eigen::MatrixXd ptm = Eigen::MatrixXd::Zero(16, 16);
  for (int j = 0; j < 16; ++j) {
    oracle::Mat out = oracle::Mat::Zero(4, 4);
    for (const auto& f : table) {
      const oracle::Mat k = cz.adjoint() * oracle::kron(pm(f.post[1]), pm(f.post[0])) * noisy *
                            oracle::kron(pm(f.pre[1]), pm(f.pre[0]));
      out += k * paulis[j] * k.adjoint() / 16.0;
    }
    for (int i = 0; i < 16; ++i) ptm(i, j) = (paulis[i] * out).trace().real() / 4;
  }
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      if (i != j) EXPECT_NEAR(ptm(i, j), 0.0, 1e-12);
}

TEST(TwirlEnsemble, NoiselessSingleTwirl) {
  const Circuit c(2, {Gate::sx(0), Gate::cz(0, 1), Gate::sx(1), Gate::cz(0, 1)}, {1});
  const double ideal = exact_measured_expectation(c);
  const std::uint64_t shots = 200000;
  const double e = twirl_ensemble_estimate(c, NoiseModel::noiseless(), 1, shots, 3);
  EXPECT_NEAR(e, ideal, 5 * std::sqrt((1 - ideal * ideal + 1e-12) / shots) + 1e-12);
  EXPECT_THROW(twirl_ensemble_estimate(c, NoiseModel::noiseless(), 0, shots, 3), std::invalid_argument);
  EXPECT_EQ(kDefaultTwirls, 250);
}

TEST(TwirlEnsemble, CoherentOnlySpreadComparableToRawBias) {
  const Circuit c(2, {Gate::sx(0), Gate::sx(1), Gate::cz(0, 1), Gate::cz(0, 1), Gate::cz(0, 1), Gate::cz(0, 1),
                      Gate::sx(0)},
                  {0});
  NoiseModel m;
  m.coherent_angle_rad = 0.15;
  SimulatedBackend raw(m);
  const double ideal = exact_measured_expectation(c);
  const double bias = std::abs(raw.expectation(c) - ideal);
  ASSERT_GT(bias, 0.05);
  std::vector<double> runs;
  for (std::uint64_t s = 0; s < 12; ++s) runs.push_back(twirl_ensemble_estimate(c, m, kDefaultTwirls, 50000, s));
  double mean = 0, var = 0;
  for (double r : runs) mean += r / runs.size();
  for (double r : runs) var += (r - mean) * (r - mean) / (runs.size() - 1);
  EXPECT_LE(std::sqrt(var), bias);
}

}  // namespace
}  // namespace depofold
