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
#include <numbers>

#include "depofold/simulator.hpp"
#include "oracles.hpp"

namespace depofold {
namespace {

constexpr double kPi = std::numbers::pi;

// Gate-by-gate dense evolution with local depolarizers after every gate.
oracle::Mat depolarizing_oracle(const Circuit& c, double p1, double p2, bool rz_error = true) {
  const int n = c.n_qubits();
  const auto d = Eigen::Index(1) << n;
  oracle::Mat rho = oracle::Mat::Zero(d, d);
  rho(0, 0) = 1;
  const double local = 1 - std::sqrt(1 - p2);
  for (const Gate& g : c.executed_gates()) {
    const oracle::Mat u = oracle::gate_unitary(g, n);
    rho = u * rho * u.adjoint();
    if (g.arity() == 1 && (g.kind != GateKind::RZ || rz_error)) rho = oracle::depolarize(rho, p1, g.q0(), n);
    if (g.arity() == 2) rho = oracle::depolarize(oracle::depolarize(rho, local, g.q0(), n), local, g.q1(), n);
  }
  return rho;
}

TEST(RunDensity, Trivial) {
  const Circuit empty(2, {}, {0, 1});
  const auto rho = run_density(empty, NoiseModel::noiseless());
  EXPECT_EQ(rho.matrix()(0, 0), std::complex<double>(1));
  EXPECT_NEAR(rho.matrix().norm(), 1.0, 1e-15);

  const auto one = run_density(Circuit(1, {Gate::x(0)}, {0}), NoiseModel::noiseless());
  EXPECT_NEAR(one.matrix()(1, 1).real(), 1.0, 1e-15);
  EXPECT_NEAR(one.matrix()(0, 0).real(), 0.0, 1e-15);

  const auto noisy = run_density(Circuit(1, {Gate::x(0)}, {0}), NoiseModel::depolarizing_only(0.1, 0));
  EXPECT_NEAR((noisy.matrix()(0, 0) - noisy.matrix()(1, 1)).real(), -0.9, 1e-14);
}

TEST(RunDensity, QubitCap) {
  const Circuit c(11, {}, {0});
  EXPECT_THROW(run_density(c, NoiseModel::noiseless()), ResourceLimitError);
  EXPECT_NO_THROW(run_density(Circuit(3, {}, {0}), NoiseModel::noiseless(), 3));
  EXPECT_THROW(run_density(Circuit(4, {}, {0}), NoiseModel::noiseless(), 3), ResourceLimitError);
}

TEST(RunDensity, MatchesDepolarizingOracle) {
  Rng rng(100);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(3));
    const Circuit c(n, oracle::random_gates(rng, n, 15), {0});
    const double p1 = rng.uniform(0, 0.1), p2 = rng.uniform(0, 0.2);
    for (bool rz : {true, false}) {
      NoiseModel m = NoiseModel::depolarizing_only(p1, p2);
      m.rz_error = rz;
      EXPECT_LT((run_density(c, m).matrix() - depolarizing_oracle(c, p1, p2, rz)).norm(), 1e-12);
    }
  }
}

TEST(RunDensity, JointDepolarizerVariant) {
  NoiseModel m = NoiseModel::depolarizing_only(0, 0.3);
  m.joint_2q_depol = true;
  const Circuit c(2, {Gate::sx(0), Gate::cz(0, 1)}, {0, 1});
  const oracle::Mat u = oracle::circuit_unitary(c.gates(), 2);
  oracle::Mat rho = oracle::Mat::Zero(4, 4);
  rho(0, 0) = 1;
  rho = u * rho * u.adjoint();
  const oracle::Mat want = 0.7 * rho + 0.3 * oracle::Mat::Identity(4, 4) / 4.0;
  EXPECT_LT((run_density(c, m).matrix() - want).norm(), 1e-13);
}

TEST(RunDensity, IdleQubitGetsThermalNoise) {
  NoiseModel m;
  m.t1_us = 10;
  m.t2_us = 10;
  m.dur_1q_us = 0.5;
  m.dur_2q_us = 2.0;
  // q1 is excited first, then idles through three layers: X(q0) twice (0.5 each) then a CZ layer elsewhere.
  const Circuit c(3, {Gate::x(1), Gate::x(0), Gate::x(0), Gate::cz(0, 2)}, {1});
  const auto layers = schedule(c.gates(), 3, m);
  ASSERT_EQ(layers.size(), 3u);
  EXPECT_EQ(layers[0].duration_us, 0.5);
  EXPECT_EQ(layers[2].duration_us, 2.0);
  const auto rho = run_density(c, m);
  // q1 idles in layers 1 and 2 for 2.5 us total
  const auto p = probabilities(rho, c.measured());
  EXPECT_NEAR(p[1], std::exp(-2.5 / 10), 1e-12);
}

TEST(Schedule, InjectedGatesTakeNoTime) {
  NoiseModel m = kingston_default();
  const Circuit c = inject_coherent(Circuit(2, {Gate::cz(0, 1), Gate::sx(0)}, {0}), 0.15);
  const auto layers = schedule(c.gates(), 2, m);
  ASSERT_EQ(layers.size(), 2u);
  EXPECT_EQ(layers[0].gates.size(), 3u);
  EXPECT_EQ(layers[0].duration_us, m.dur_2q_us);
}

TEST(RunDensity, ValidStatesUnderKingstonProperty) {
  Rng rng(200);
  NoiseModel m = scale(kingston_default(), 20);
  m.coherent_angle_rad = 0.15;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(4));
    const Circuit c = inject_coherent(Circuit(n, oracle::random_gates(rng, n, 12), {0}), 0.15);
    EXPECT_TRUE(run_density(c, m).is_valid()) << "trial " << trial;
  }
}

TEST(Probabilities, Examples) {
  const auto zero = probabilities(DensityMatrixd(2), std::vector<int>{0, 1});
  EXPECT_EQ(zero, (std::vector<double>{1, 0, 0, 0}));
  const auto mixed = probabilities(DensityMatrixd::maximally_mixed(3), std::vector<int>{1});
  EXPECT_NEAR(mixed[0], 0.5, 1e-15);
  VectorXcd bell = VectorXcd::Zero(4);
  bell(0) = bell(3) = 1 / std::sqrt(2.0);
  const auto b = probabilities(DensityMatrixd::pure(2, bell), std::vector<int>{0, 1});
  EXPECT_NEAR(b[0], 0.5, 1e-15);
  EXPECT_NEAR(b[1], 0.0, 1e-15);
  EXPECT_NEAR(b[2], 0.0, 1e-15);
  EXPECT_NEAR(b[3], 0.5, 1e-15);
}

TEST(Probabilities, BitOrderFollowsMeasuredList) {
  const auto rho = run_density(Circuit(3, {Gate::x(2)}, {2, 0}), NoiseModel::noiseless());
  const auto p = probabilities(rho, std::vector<int>{2, 0});
  EXPECT_NEAR(p[1], 1.0, 1e-15);
}

TEST(ExactExpectation, Examples) {
  EXPECT_EQ(exact_expectation(Circuit(1, {}, {0}), {Pauli::Z, 0}), 1.0);
  EXPECT_NEAR(exact_expectation(Circuit(1, {Gate::x(0)}, {0}), {Pauli::Z, 0}), -1.0, 1e-15);
  EXPECT_NEAR(exact_expectation(Circuit(1, ry_basis_gates(0, kPi / 3), {0}), {Pauli::Z, 0}), 0.5, 1e-12);
  EXPECT_NEAR(exact_expectation(Circuit(1, ry_basis_gates(0, kPi / 3), {0}), {Pauli::X, 0}), std::sin(kPi / 3),
              1e-12);
}

TEST(ExactExpectation, AgreesWithMeasuredBasisChangeProperty) {
  Rng rng(300);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(4));
    const PauliTerm t{std::array{Pauli::X, Pauli::Y, Pauli::Z}[rng.below(3)],
                      static_cast<int>(rng.below(static_cast<std::uint64_t>(n)))};
    const Circuit c = Circuit(n, oracle::random_gates(rng, n, 10), {0}).with_observable(t);
    const double a = exact_expectation(c, t);
    EXPECT_NEAR(exact_measured_expectation(c), a, 1e-12);
    EXPECT_NEAR(expectation_from_probabilities(probabilities(run_density(c, NoiseModel::noiseless()), c.measured()), 0),
                a, 1e-12);
    // dense oracle
    const oracle::Mat u = oracle::circuit_unitary(c.gates(), n);
    const oracle::Mat pm = t.op == Pauli::X ? oracle::px() : t.op == Pauli::Y ? oracle::py() : oracle::pz();
    const oracle::Mat o = u.adjoint() * oracle::embed1(pm, t.qubit, n) * u;
    EXPECT_NEAR(o(0, 0).real(), a, 1e-12);
  }
}

TEST(ExpectationFromProbabilities, ReadoutAttenuation) {
  const std::vector<double> p = {0.8, 0.2};
  EXPECT_NEAR(expectation_from_probabilities(p, 0.0), 0.6, 1e-15);
  EXPECT_NEAR(expectation_from_probabilities(p, 7.32e-3), 0.6 * 0.98536, 1e-15);
  EXPECT_THROW(expectation_from_probabilities(std::vector<double>{0.5, 0.3, 0.2}, 0), std::invalid_argument);
}

TEST(Sampling, Deterministic) {
  const std::vector<double> p = {1.0, 0.0};
  const auto c = sample_counts(p, 1000, 0.0, false, Rng(1));
  EXPECT_EQ(c.counts[0], 1000u);
  for (auto r : sample_records(p, 100, 0.0, false, Rng(1))) EXPECT_EQ(r.bits, 0u);
}

TEST(Sampling, BinomialBounds) {
  const std::vector<double> p = {0.5, 0.5};
  const std::uint64_t n = 1'000'000;
  const auto c = sample_counts(p, n, 0.0, false, Rng(2));
  EXPECT_NEAR(static_cast<double>(c.counts[0]) / n, 0.5, 5 * 0.0005);
  const auto r = sample_counts(std::vector<double>{1.0, 0.0}, n, 0.5, true, Rng(3));
  EXPECT_NEAR(r.signed_mean(), 0.0, 5 / std::sqrt(static_cast<double>(n)));
}

TEST(Sampling, ThreadIndependentAndRecordsMatchCounts) {
  const std::vector<double> p = {0.1, 0.2, 0.3, 0.4};
  const std::uint64_t n = 300'001;
  const Rng rng(77);
  const auto a = sample_counts(p, n, 0.05, true, rng, 1);
  const auto b = sample_counts(p, n, 0.05, true, rng, 4);
  EXPECT_EQ(a, b);
  const auto recs = sample_records(p, n, 0.05, true, rng);
  EXPECT_EQ(tally(recs, 2), a);
  EXPECT_EQ(a.total(), n);
  EXPECT_EQ(sample_records(p, 1000, 0.05, true, rng), sample_records(p, 1000, 0.05, true, rng));
}

TEST(Sampling, ReadoutTwirlSignCancels) {
  // Measurement-only noise: twirled signed mean and untwirled mean agree in expectation.
  const std::vector<double> p = {0.7, 0.3};
  const std::uint64_t n = 1'000'000;
  const double want = (0.7 - 0.3) * (1 - 2 * 0.05);
  const double sigma = std::sqrt((1 - want * want) / n);
  EXPECT_NEAR(sample_counts(p, n, 0.05, true, Rng(4)).signed_mean(), want, 5 * sigma);
  EXPECT_NEAR(sample_counts(p, n, 0.05, false, Rng(5)).signed_mean(), want, 5 * sigma);
}

TEST(ShotCounts, SignBookkeeping) {
  ShotCounts c(1);
  // mask 1, bit 1 contributes (-1)(-1) = +1
  c.counts[(1u << 1) | 1u] = 1;
  EXPECT_EQ(c.signed_mean(), 1.0);
  ShotCounts d(1);
  d.counts[(1u << 1) | 0u] = 1;
  EXPECT_EQ(d.signed_mean(), -1.0);
  EXPECT_THROW(ShotCounts(1).signed_mean(), std::invalid_argument);
  EXPECT_THROW(c += ShotCounts(2), std::invalid_argument);
}

TEST(Backend, CachesAndScales) {
  SimulatedBackend b(kingston_default());
  const Circuit c(2, {Gate::sx(0), Gate::cz(0, 1), Gate::sx(0)}, {0});
  const double e1 = b.expectation(c);
  EXPECT_EQ(b.expectation(c), e1);
  EXPECT_LT(std::abs(b.expectation(c, 5.0)), std::abs(e1) + 1e-15);
  EXPECT_EQ(b.noise_at(1.0), b.noise());
  EXPECT_EQ(b.noise_at(3.0).p_2q, 3 * b.noise().p_2q);
}

}  // namespace
}  // namespace depofold
