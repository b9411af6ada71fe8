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

#include "depofold/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "depofold/rng.hpp"

namespace depofold {

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(what) + ": probability outside [0, 1]");
}

MatrixXcd superop_from_kraus(int d, const std::vector<MatrixXcd>& kraus) {
  MatrixXcd s = MatrixXcd::Zero(d * d, d * d);
  for (const auto& k : kraus)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int a2 = 0; a2 < d; ++a2)
          for (int b2 = 0; b2 < d; ++b2) s(a * d + b, a2 * d + b2) += k(a, a2) * std::conj(k(b, b2));
  return s;
}

MatrixXcd kron(const MatrixXcd& hi, const MatrixXcd& lo) {
  MatrixXcd out(hi.rows() * lo.rows(), hi.cols() * lo.cols());
  for (Eigen::Index i = 0; i < hi.rows(); ++i)
    for (Eigen::Index j = 0; j < hi.cols(); ++j)
      out.block(i * lo.rows(), j * lo.cols(), lo.rows(), lo.cols()) = hi(i, j) * lo;
  return out;
}

}  // namespace

void NoiseModel::validate() const {
  check_probability(p_2q, "p_2q");
  check_probability(p_1q, "p_1q");
  check_probability(p_readout, "p_readout");
  if (!(t1_us > 0) || !(t2_us > 0)) throw std::invalid_argument("T1 and T2 must be positive");
  if (t2_us > 2 * t1_us * (1 + 1e-12)) throw std::invalid_argument("T2 must not exceed 2 T1");
  if (!(dur_1q_us > 0) || !(dur_2q_us > 0)) throw std::invalid_argument("gate durations must be positive");
  if (!(multiplier >= 0)) throw std::invalid_argument("multiplier must be non-negative");
  if (!std::isfinite(coherent_angle_rad)) throw std::invalid_argument("coherent angle must be finite");
}

NoiseModel NoiseModel::readout_only(double p_readout) {
  NoiseModel m;
  m.p_readout = p_readout;
  return m;
}

NoiseModel NoiseModel::depolarizing_only(double p_1q, double p_2q) {
  NoiseModel m;
  m.p_1q = p_1q;
  m.p_2q = p_2q;
  return m;
}

NoiseModel kingston_default() {
  NoiseModel m;
  m.p_2q = 2.07e-3;
  m.p_1q = 2.25e-4;
  m.p_readout = 7.32e-3;
  m.t1_us = 270.0;
  m.t2_us = 143.0;
  m.dur_2q_us = 6.8e-2;
  m.dur_1q_us = 6.8e-3;
  m.multiplier = 1.0;
  m.coherent_angle_rad = 0.0;
  return m;
}

NoiseModel scale(const NoiseModel& m, double k) {
  if (!(k >= 0)) throw std::invalid_argument("scale: multiplier must be non-negative");
  NoiseModel out = m;
  auto scaled = [&](double p) {
    const double v = p * k;
    if (v > 1.0) {
      out.clamped = true;
      return 1.0;
    }
    return v;
  };
  out.p_2q = scaled(m.p_2q);
  out.p_1q = scaled(m.p_1q);
  out.p_readout = scaled(m.p_readout);
  const double inf = std::numeric_limits<double>::infinity();
  out.t1_us = k > 0 ? m.t1_us / k : inf;
  out.t2_us = k > 0 ? m.t2_us / k : inf;
  out.multiplier = m.multiplier * k;
  return out;
}

Channel Channel::from_kraus(int arity, std::vector<MatrixXcd> kraus) {
  const int d = 1 << arity;
  for (const auto& k : kraus)
    if (k.rows() != d || k.cols() != d) throw std::invalid_argument("Channel: Kraus operator has wrong size");
  Channel c;
  c.arity = arity;
  c.superop = superop_from_kraus(d, kraus);
  c.kraus = std::move(kraus);
  return c;
}

Channel Channel::identity(int arity) {
  const int d = 1 << arity;
  return from_kraus(arity, {MatrixXcd::Identity(d, d)});
}

Channel Channel::after(const Channel& first) const {
  if (first.arity != arity) throw std::invalid_argument("Channel::after: arity mismatch");
  std::vector<MatrixXcd> ks;
  ks.reserve(kraus.size() * first.kraus.size());
  for (const auto& a : kraus)
    for (const auto& b : first.kraus) ks.push_back(a * b);
  Channel c;
  c.arity = arity;
  c.kraus = std::move(ks);
  c.superop = superop * first.superop;
  return c;
}

Channel Channel::product(const Channel& lo, const Channel& hi) {
  if (lo.arity != 1 || hi.arity != 1) throw std::invalid_argument("Channel::product: expects one-qubit channels");
  std::vector<MatrixXcd> ks;
  for (const auto& h : hi.kraus)
    for (const auto& l : lo.kraus) ks.push_back(kron(h, l));
  return from_kraus(2, std::move(ks));
}

bool Channel::is_identity(double tol) const {
  const auto n = superop.rows();
  return (superop - MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() <= tol;
}

double Channel::trace_preservation_error() const {
  const int d = 1 << arity;
  MatrixXcd sum = MatrixXcd::Zero(d, d);
  for (const auto& k : kraus) sum += k.adjoint() * k;
  return (sum - MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
}

Channel depolarizing_1q(double p) {
  check_probability(p, "depolarizing_1q");
  const double w0 = std::sqrt(1.0 - 0.75 * p);
  const double w = std::sqrt(p / 4.0);
  return Channel::from_kraus(1, {MatrixXcd(w0 * Matrix2cd::Identity()), MatrixXcd(w * pauli_x<double>()),
                                 MatrixXcd(w * pauli_y<double>()), MatrixXcd(w * pauli_z<double>())});
}

double local_rate_for_two_qubit_error(double p_2q) {
  check_probability(p_2q, "two_qubit_error");
  return 1.0 - std::sqrt(1.0 - p_2q);
}

Channel two_qubit_error(double p_2q) {
  const Channel local = depolarizing_1q(local_rate_for_two_qubit_error(p_2q));
  return Channel::product(local, local);
}

Channel joint_depolarizing_2q(double p) {
  check_probability(p, "joint_depolarizing_2q");
  const Matrix2cd paulis[4] = {Matrix2cd::Identity(), pauli_x<double>(), pauli_y<double>(), pauli_z<double>()};
  std::vector<MatrixXcd> ks;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double w = (i == 0 && j == 0) ? std::sqrt(1.0 - 15.0 * p / 16.0) : std::sqrt(p / 16.0);
      ks.push_back(w * kron2(paulis[i], paulis[j]));
    }
  return Channel::from_kraus(2, std::move(ks));
}

Channel thermal_channel(double t1_us, double t2_us, double duration_us) {
  if (!(t1_us > 0) || !(t2_us > 0)) throw std::invalid_argument("thermal_channel: T1 and T2 must be positive");
  if (t2_us > 2 * t1_us * (1 + 1e-12)) throw std::invalid_argument("thermal_channel: T2 > 2 T1");
  if (!(duration_us >= 0)) throw std::invalid_argument("thermal_channel: negative duration");
  const double gamma = std::isinf(duration_us) ? 1.0 : -std::expm1(-duration_us / t1_us);
  // 1/T_phi = 1/T2 - 1/(2 T1); the phase-damping Kraus pair scales coherences by exp(-t/T_phi).
  const double rate_phi = std::max(0.0, 1.0 / t2_us - 0.5 / t1_us);
  const double lambda = std::isinf(duration_us) ? (rate_phi > 0 ? 1.0 : 0.0) : -std::expm1(-2.0 * duration_us * rate_phi);

  Matrix2cd a0 = Matrix2cd::Zero(), a1 = Matrix2cd::Zero();
  a0(0, 0) = 1.0;
  a0(1, 1) = std::sqrt(1.0 - gamma);
  a1(0, 1) = std::sqrt(gamma);
  Matrix2cd d0 = Matrix2cd::Zero(), d1 = Matrix2cd::Zero();
  d0(0, 0) = 1.0;
  d0(1, 1) = std::sqrt(1.0 - lambda);
  d1(1, 1) = std::sqrt(lambda);
  const Channel damping = Channel::from_kraus(1, {MatrixXcd(a0), MatrixXcd(a1)});
  const Channel dephasing = Channel::from_kraus(1, {MatrixXcd(d0), MatrixXcd(d1)});
  return dephasing.after(damping);
}

int readout_flip(double p_ro, int bit, Rng& rng) {
  check_probability(p_ro, "readout_flip");
  return (p_ro > 0 && rng.uniform() < p_ro) ? bit ^ 1 : bit;
}

Circuit inject_coherent(const Circuit& c, double angle) {
  if (angle == 0.0) return c;
  std::vector<Gate> gates;
  gates.reserve(c.gates().size() + 2 * c.count_2q());
  for (const Gate& g : c.gates()) {
    gates.push_back(g);
    if (g.arity() == 2 && !g.injected) {
      for (int q : g.qubits) {
        Gate e = Gate::rx(q, angle);
        e.injected = true;
        gates.push_back(e);
      }
    }
  }
  return c.with_gates(std::move(gates));
}

}  // namespace depofold
