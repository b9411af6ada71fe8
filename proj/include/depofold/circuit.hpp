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

#ifndef DEPOFOLD_CIRCUIT_HPP_
#define DEPOFOLD_CIRCUIT_HPP_

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "depofold/linalg.hpp"

namespace depofold {

/// Hardware basis gate set. SXdg is carried natively so that every gate has a
/// single-gate inverse with the same error weight.
enum class GateKind { RX, RZ, RZZ, SX, SXdg, X, CZ };

enum class Pauli { I, X, Y, Z };

std::string_view to_string(GateKind kind);
GateKind gate_kind_from_string(std::string_view name);
char to_char(Pauli p);
Pauli pauli_from_char(char c);

constexpr int arity(GateKind kind) { return (kind == GateKind::CZ || kind == GateKind::RZZ) ? 2 : 1; }
constexpr bool has_angle(GateKind kind) {
  return kind == GateKind::RX || kind == GateKind::RZ || kind == GateKind::RZZ;
}

struct Gate {
  GateKind kind = GateKind::X;
  std::array<int, 2> qubits{-1, -1};
  double angle = 0.0;
  /// Coherent-error rotation added by inject_coherent. Such gates take no
  /// schedule time, carry no incoherent error and are ignored by gate counting.
  bool injected = false;

  int arity() const { return depofold::arity(kind); }
  int q0() const { return qubits[0]; }
  int q1() const { return qubits[1]; }
  bool acts_on(int q) const { return qubits[0] == q || (arity() == 2 && qubits[1] == q); }

  static Gate rx(int q, double a) { return {GateKind::RX, {q, -1}, a}; }
  static Gate rz(int q, double a) { return {GateKind::RZ, {q, -1}, a}; }
  static Gate rzz(int a, int b, double t) { return {GateKind::RZZ, {a, b}, t}; }
  static Gate sx(int q) { return {GateKind::SX, {q, -1}, 0.0}; }
  static Gate sxdg(int q) { return {GateKind::SXdg, {q, -1}, 0.0}; }
  static Gate x(int q) { return {GateKind::X, {q, -1}, 0.0}; }
  static Gate cz(int a, int b) { return {GateKind::CZ, {a, b}, 0.0}; }

  friend bool operator==(const Gate&, const Gate&) = default;
};

/// Weight-1 Pauli observable.
struct PauliTerm {
  Pauli op = Pauli::Z;
  int qubit = 0;
  friend bool operator==(const PauliTerm&, const PauliTerm&) = default;
};

/// Ordered gate sequence over `n_qubits`, followed by per-qubit basis-change
/// gates and a computational-basis measurement of `measured`.
class Circuit {
 public:
  Circuit() = default;
  Circuit(int n_qubits, std::vector<Gate> gates, std::vector<int> measured,
          std::vector<Gate> basis_change = {});

  int n_qubits() const { return n_qubits_; }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::vector<int>& measured() const { return measured_; }
  const std::vector<Gate>& basis_change() const { return basis_change_; }

  /// Gate counts excluding injected gates (H1 and H2 for a target circuit).
  std::size_t count_1q() const;
  std::size_t count_2q() const;

  Circuit with_gates(std::vector<Gate> gates) const;
  Circuit with_measurement(std::vector<int> measured, std::vector<Gate> basis_change) const;
  /// Measures the weight-1 observable `term`: measured = {term.qubit} plus its basis change.
  Circuit with_observable(PauliTerm term) const;

  /// Gates followed by the basis-change gates.
  std::vector<Gate> executed_gates() const;

  /// Hash over gate kinds, qubits and the measurement setup; angles are ignored.
  std::uint64_t structure_hash() const;
  /// Hash over everything including the exact angle bits.
  std::uint64_t content_hash() const;

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  void validate() const;

  int n_qubits_ = 0;
  std::vector<Gate> gates_;
  std::vector<int> measured_;
  std::vector<Gate> basis_change_;
};

struct GateClassification {
  std::vector<std::size_t> pool_1q;
  std::vector<std::size_t> pool_2q;
  std::vector<std::size_t> excluded;
  std::vector<std::size_t> companion;
};

Matrix2cd gate_matrix(const Gate& g);
/// Diagonal of a two-qubit gate in the local basis |b_q1 b_q0>, index = b_q0 + 2 b_q1.
std::array<std::complex<double>, 4> gate_diagonal(const Gate& g);

Gate inverse(const Gate& g);

/// Hardware-efficient ansatz: per layer RY then RZ on every qubit followed by a
/// linear CZ chain, plus a final RY/RZ layer. Needs 2 * n_qubits * (layers + 1)
/// parameters, ordered [RY(q0..), RZ(q0..)] per rotation layer. Measures all qubits.
Circuit build_efficient_su2(int n_qubits, int layers, std::span<const double> params);
std::size_t efficient_su2_param_count(int n_qubits, int layers);

/// RY(theta) in the basis set: RZ(pi), SX, RZ(pi - theta), SX (fixed structure).
std::vector<Gate> ry_basis_gates(int qubit, double theta);

/// RZ/SX sequence (at most 5 gates) equal to `u` up to global phase.
std::vector<Gate> decompose_one_qubit(const Matrix2cd& u, int qubit = 0);

Circuit invert(const Circuit& c);
GateClassification classify_gates(const Circuit& c);
Circuit fold(const Circuit& c, int factor);
std::vector<Gate> pauli_basis_change(Pauli pauli, int qubit);

}  // namespace depofold

#endif  // DEPOFOLD_CIRCUIT_HPP_
