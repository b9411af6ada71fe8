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

// Brute-force references and random generators shared by the tests. Nothing
// here calls into the library's matrix code.

#ifndef DEPOFOLD_TESTS_ORACLES_HPP_
#define DEPOFOLD_TESTS_ORACLES_HPP_

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "depofold/circuit.hpp"
#include "depofold/rng.hpp"

namespace oracle {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using depofold::Gate;
using depofold::GateKind;

inline constexpr double kPi = std::numbers::pi;

inline Mat mat2(cd a, cd b, cd c, cd d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

inline Mat id2() { return Mat::Identity(2, 2); }
inline Mat px() { return mat2(0, 1, 1, 0); }
inline Mat py() { return mat2(0, cd(0, -1), cd(0, 1), 0); }
inline Mat pz() { return mat2(1, 0, 0, -1); }

/// exp(-i theta/2 P) = cos(theta/2) I - i sin(theta/2) P.
inline Mat rotation(const Mat& p, double theta) {
  return std::cos(theta / 2) * Mat::Identity(p.rows(), p.cols()) - cd(0, 1) * std::sin(theta / 2) * p;
}

/// Standard Kronecker product, `a` on the more significant bits.
inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Operator acting with `op` on qubit q of n (qubit k is bit k).
inline Mat embed1(const Mat& op, int q, int n) {
  Mat out = Mat::Identity(1, 1);
  for (int k = n - 1; k >= 0; --k) out = kron(out, k == q ? op : id2());
  return out;
}

inline Mat zz(int a, int b, int n) { return embed1(pz(), a, n) * embed1(pz(), b, n); }

inline Mat gate_unitary(const Gate& g, int n) {
  const int q = g.q0();
  switch (g.kind) {
    case GateKind::RX: return embed1(rotation(px(), g.angle), q, n);
    case GateKind::RZ: return embed1(rotation(pz(), g.angle), q, n);
    // SX = exp(i pi/4) RX(pi/2)
    case GateKind::SX: return embed1(std::polar(1.0, kPi / 4) * rotation(px(), kPi / 2), q, n);
    case GateKind::SXdg: return embed1(std::polar(1.0, -kPi / 4) * rotation(px(), -kPi / 2), q, n);
    case GateKind::X: return embed1(px(), q, n);
    case GateKind::CZ: {
      const Mat dim_id = Mat::Identity(Eigen::Index(1) << n, Eigen::Index(1) << n);
      return 0.5 * (dim_id + embed1(pz(), q, n) + embed1(pz(), g.q1(), n) - zz(q, g.q1(), n));
    }
    case GateKind::RZZ: {
      const Eigen::Index d = Eigen::Index(1) << n;
      return std::cos(g.angle / 2) * Mat::Identity(d, d) - cd(0, 1) * std::sin(g.angle / 2) * zz(q, g.q1(), n);
    }
  }
  return {};
}

inline Mat circuit_unitary(const std::vector<Gate>& gates, int n) {
  Mat u = Mat::Identity(Eigen::Index(1) << n, Eigen::Index(1) << n);
  for (const auto& g : gates) u = gate_unitary(g, n) * u;
  return u;
}

inline double phase_free(const Mat& a, const Mat& b) {
  const cd overlap = (b.adjoint() * a).trace();
  const cd phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cd(1);
  return (a - phase * b).norm();
}

/// Dense depolarizer on qubit q: (1 - p) rho + p/4 sum_P P rho P^dag (Pauli average = I/2 replacement).
inline Mat depolarize(const Mat& rho, double p, int q, int n) {
  Mat acc = (1 - 3 * p / 4) * rho;
  for (const Mat& pm : {px(), py(), pz()}) {
    const Mat e = embed1(pm, q, n);
    acc += p / 4 * e * rho * e.adjoint();
  }
  return acc;
}

inline double normal(depofold::Rng& rng) {
  const double u1 = 1.0 - rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2 * std::log(u1)) * std::cos(2 * kPi * u2);
}

/// Haar-ish random unitary via QR of a complex Gaussian matrix.
inline Mat random_unitary(int dim, depofold::Rng& rng) {
  Mat g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = cd(normal(rng), normal(rng));
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
  return q;
}

/// Random mixed state as W W^dag / tr.
inline Mat random_density(int dim, depofold::Rng& rng) {
  Mat w(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) w(i, j) = cd(normal(rng), normal(rng));
  Mat rho = w * w.adjoint();
  return rho / rho.trace();
}

inline Gate random_gate(depofold::Rng& rng, int n) {
  static constexpr GateKind kinds[] = {GateKind::RX, GateKind::RZ, GateKind::RZZ, GateKind::SX,
                                       GateKind::SXdg, GateKind::X, GateKind::CZ};
  for (;;) {
    const GateKind k = kinds[rng.below(7)];
    if (depofold::arity(k) == 2 && n < 2) continue;
    Gate g;
    g.kind = k;
    g.qubits[0] = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    if (depofold::arity(k) == 2) {
      do g.qubits[1] = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      while (g.qubits[1] == g.qubits[0]);
    }
    if (depofold::has_angle(k)) g.angle = rng.uniform(-2 * kPi, 2 * kPi);
    return g;
  }
}

inline std::vector<Gate> random_gates(depofold::Rng& rng, int n, int count) {
  std::vector<Gate> gates;
  for (int i = 0; i < count; ++i) gates.push_back(random_gate(rng, n));
  return gates;
}

/// Circuit in the ansatz gate set (RZ, SX, CZ only).
inline std::vector<Gate> random_native_gates(depofold::Rng& rng, int n, int count) {
  std::vector<Gate> gates;
  for (int i = 0; i < count; ++i) {
    const auto pick = rng.below(n > 1 ? 3 : 2);
    const int q = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    if (pick == 0) gates.push_back(Gate::rz(q, rng.uniform(0, 2 * kPi)));
    if (pick == 1) gates.push_back(Gate::sx(q));
    if (pick == 2) {
      int r;
      do r = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      while (r == q);
      gates.push_back(Gate::cz(q, r));
    }
  }
  return gates;
}

}  // namespace oracle

#endif  // DEPOFOLD_TESTS_ORACLES_HPP_
