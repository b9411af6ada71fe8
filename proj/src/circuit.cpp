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

#include "depofold/circuit.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "depofold/rng.hpp"

namespace depofold {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kElideTol = 1e-12;

std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) { return mix64(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6))); }

std::uint64_t hash_gate(std::uint64_t h, const Gate& g, bool with_angle) {
  h = hash_combine(h, static_cast<std::uint64_t>(g.kind));
  h = hash_combine(h, static_cast<std::uint64_t>(g.qubits[0] + 1));
  h = hash_combine(h, static_cast<std::uint64_t>(g.qubits[1] + 1));
  h = hash_combine(h, g.injected ? 1 : 0);
  if (with_angle) h = hash_combine(h, std::bit_cast<std::uint64_t>(g.angle));
  return h;
}

void check_gate(const Gate& g, int n_qubits) {
  const int a = g.arity();
  if (g.qubits[0] < 0 || g.qubits[0] >= n_qubits)
    throw std::invalid_argument("gate qubit index out of range");
  if (a == 2) {
    if (g.qubits[1] < 0 || g.qubits[1] >= n_qubits)
      throw std::invalid_argument("gate qubit index out of range");
    if (g.qubits[0] == g.qubits[1]) throw std::invalid_argument("two-qubit gate on a single qubit");
  } else if (g.qubits[1] != -1) {
    throw std::invalid_argument("one-qubit gate with a second qubit index");
  }
  if (!std::isfinite(g.angle)) throw std::invalid_argument("non-finite gate angle");
}

void push_rz(std::vector<Gate>& out, int q, double angle) {
  const double a = wrap_angle(angle);
  if (std::abs(a) > kElideTol) out.push_back(Gate::rz(q, a));
}

}  // namespace

std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::RX: return "rx";
    case GateKind::RZ: return "rz";
    case GateKind::RZZ: return "rzz";
    case GateKind::SX: return "sx";
    case GateKind::SXdg: return "sxdg";
    case GateKind::X: return "x";
    case GateKind::CZ: return "cz";
  }
  return "?";
}

GateKind gate_kind_from_string(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  for (GateKind k : {GateKind::RX, GateKind::RZ, GateKind::RZZ, GateKind::SX, GateKind::SXdg, GateKind::X,
                     GateKind::CZ}) {
    if (to_string(k) == lower) return k;
  }
  throw std::invalid_argument("unknown gate kind: " + std::string(name));
}

char to_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

Pauli pauli_from_char(char c) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
  }
  throw std::invalid_argument(std::string("unknown Pauli label: ") + c);
}

Circuit::Circuit(int n_qubits, std::vector<Gate> gates, std::vector<int> measured,
                 std::vector<Gate> basis_change)
    : n_qubits_(n_qubits),
      gates_(std::move(gates)),
      measured_(std::move(measured)),
      basis_change_(std::move(basis_change)) {
  std::sort(measured_.begin(), measured_.end());
  measured_.erase(std::unique(measured_.begin(), measured_.end()), measured_.end());
  validate();
}

void Circuit::validate() const {
  if (n_qubits_ < 1) throw std::invalid_argument("circuit needs at least one qubit");
  if (measured_.empty()) throw std::invalid_argument("circuit needs at least one measured qubit");
  for (int q : measured_)
    if (q < 0 || q >= n_qubits_) throw std::invalid_argument("measured qubit out of range");
  for (const Gate& g : gates_) check_gate(g, n_qubits_);
  for (const Gate& g : basis_change_) {
    check_gate(g, n_qubits_);
    if (g.arity() != 1) throw std::invalid_argument("basis change must be one-qubit gates");
    if (!std::binary_search(measured_.begin(), measured_.end(), g.q0()))
      throw std::invalid_argument("basis change on an unmeasured qubit");
  }
}

std::size_t Circuit::count_1q() const {
  return static_cast<std::size_t>(
      std::count_if(gates_.begin(), gates_.end(), [](const Gate& g) { return !g.injected && g.arity() == 1; }));
}

std::size_t Circuit::count_2q() const {
  return static_cast<std::size_t>(
      std::count_if(gates_.begin(), gates_.end(), [](const Gate& g) { return !g.injected && g.arity() == 2; }));
}

Circuit Circuit::with_gates(std::vector<Gate> gates) const {
  return Circuit(n_qubits_, std::move(gates), measured_, basis_change_);
}

Circuit Circuit::with_measurement(std::vector<int> measured, std::vector<Gate> basis_change) const {
  return Circuit(n_qubits_, gates_, std::move(measured), std::move(basis_change));
}

Circuit Circuit::with_observable(PauliTerm term) const {
  return with_measurement({term.qubit}, pauli_basis_change(term.op, term.qubit));
}

std::vector<Gate> Circuit::executed_gates() const {
  std::vector<Gate> out = gates_;
  out.insert(out.end(), basis_change_.begin(), basis_change_.end());
  return out;
}

std::uint64_t Circuit::structure_hash() const {
  std::uint64_t h = hash_combine(0x5eed, static_cast<std::uint64_t>(n_qubits_));
  for (const Gate& g : gates_) h = hash_gate(h, g, false);
  h = hash_combine(h, 0xb7);
  for (const Gate& g : basis_change_) h = hash_gate(h, g, true);
  h = hash_combine(h, 0x3a);
  for (int q : measured_) h = hash_combine(h, static_cast<std::uint64_t>(q));
  return h;
}

std::uint64_t Circuit::content_hash() const {
  std::uint64_t h = hash_combine(0xc0de, static_cast<std::uint64_t>(n_qubits_));
  for (const Gate& g : gates_) h = hash_gate(h, g, true);
  h = hash_combine(h, 0xb7);
  for (const Gate& g : basis_change_) h = hash_gate(h, g, true);
  h = hash_combine(h, 0x3a);
  for (int q : measured_) h = hash_combine(h, static_cast<std::uint64_t>(q));
  return h;
}

Matrix2cd gate_matrix(const Gate& g) {
  switch (g.kind) {
    case GateKind::RX: return rx_matrix(g.angle);
    case GateKind::RZ: return rz_matrix(g.angle);
    case GateKind::SX: return sx_matrix<double>();
    case GateKind::SXdg: return sx_matrix<double>().adjoint();
    case GateKind::X: return pauli_x<double>();
    default: throw std::invalid_argument("gate_matrix: not a one-qubit gate");
  }
}

std::array<std::complex<double>, 4> gate_diagonal(const Gate& g) {
  switch (g.kind) {
    case GateKind::CZ: return {1.0, 1.0, 1.0, -1.0};
    case GateKind::RZZ: {
      const auto even = std::polar(1.0, -g.angle / 2);
      const auto odd = std::polar(1.0, g.angle / 2);
      return {even, odd, odd, even};
    }
    default: throw std::invalid_argument("gate_diagonal: not a two-qubit gate");
  }
}

Gate inverse(const Gate& g) {
  Gate out = g;
  switch (g.kind) {
    case GateKind::RX:
    case GateKind::RZ:
    case GateKind::RZZ: out.angle = -g.angle; break;
    case GateKind::SX: out.kind = GateKind::SXdg; break;
    case GateKind::SXdg: out.kind = GateKind::SX; break;
    case GateKind::X:
    case GateKind::CZ: break;
  }
  return out;
}

std::size_t efficient_su2_param_count(int n_qubits, int layers) {
  return static_cast<std::size_t>(2 * n_qubits * (layers + 1));
}

std::vector<Gate> ry_basis_gates(int qubit, double theta) {
  // RY(t) = SX . RZ(-t) . SXdg and SXdg = RZ(pi) . SX . RZ(pi), all up to phase.
  return {Gate::rz(qubit, kPi), Gate::sx(qubit), Gate::rz(qubit, wrap_angle(kPi - theta)), Gate::sx(qubit)};
}

Circuit build_efficient_su2(int n_qubits, int layers, std::span<const double> params) {
  if (n_qubits < 1 || layers < 0) throw std::invalid_argument("build_efficient_su2: bad dimensions");
  if (params.size() != efficient_su2_param_count(n_qubits, layers))
    throw std::invalid_argument("build_efficient_su2: expected " +
                                std::to_string(efficient_su2_param_count(n_qubits, layers)) + " parameters, got " +
                                std::to_string(params.size()));
  std::vector<Gate> gates;
  std::size_t k = 0;
  auto rotation_layer = [&] {
    for (int q = 0; q < n_qubits; ++q) {
      auto ry = ry_basis_gates(q, params[k + static_cast<std::size_t>(q)]);
      gates.insert(gates.end(), ry.begin(), ry.end());
    }
    for (int q = 0; q < n_qubits; ++q) gates.push_back(Gate::rz(q, params[k + static_cast<std::size_t>(n_qubits + q)]));
    k += static_cast<std::size_t>(2 * n_qubits);
  };
  for (int l = 0; l < layers; ++l) {
    rotation_layer();
    for (int q = 0; q + 1 < n_qubits; ++q) gates.push_back(Gate::cz(q, q + 1));
  }
  rotation_layer();
  std::vector<int> measured(static_cast<std::size_t>(n_qubits));
  for (int q = 0; q < n_qubits; ++q) measured[static_cast<std::size_t>(q)] = q;
  return Circuit(n_qubits, std::move(gates), std::move(measured));
}

std::vector<Gate> decompose_one_qubit(const Matrix2cd& u, int qubit) {
  if (!is_unitary(u, 1e-10)) throw std::invalid_argument("decompose_one_qubit: matrix is not unitary");
  // ZYZ Euler angles of the SU(2) representative: u ~ RZ(phi) RY(theta) RZ(lambda).
  const Matrix2cd v = u / std::sqrt(u.determinant());
  const double theta = 2 * std::atan2(std::abs(v(1, 0)), std::abs(v(0, 0)));
  double sum = 0, diff = 0;
  if (std::abs(v(1, 1)) > 1e-12) sum = 2 * std::arg(v(1, 1));
  if (std::abs(v(1, 0)) > 1e-12) diff = 2 * std::arg(v(1, 0));
  const double phi = (sum + diff) / 2;
  const double lambda = (sum - diff) / 2;

  std::vector<Gate> out;
  if (std::abs(wrap_angle(theta)) <= kElideTol) {
    push_rz(out, qubit, phi + lambda);
    return out;
  }
  // RY(theta) = SX . RZ(pi - theta) . SX . RZ(pi); emitted in time order.
  push_rz(out, qubit, lambda + kPi);
  out.push_back(Gate::sx(qubit));
  push_rz(out, qubit, kPi - theta);
  out.push_back(Gate::sx(qubit));
  push_rz(out, qubit, phi);
  return out;
}

Circuit invert(const Circuit& c) {
  std::vector<Gate> gates;
  gates.reserve(c.gates().size());
  for (auto it = c.gates().rbegin(); it != c.gates().rend(); ++it) gates.push_back(inverse(*it));
  return c.with_gates(std::move(gates));
}

GateClassification classify_gates(const Circuit& c) {
  GateClassification out;
  std::vector<char> relevant(static_cast<std::size_t>(c.n_qubits()), 0);
  for (int q : c.measured()) relevant[static_cast<std::size_t>(q)] = 1;

  const auto& gates = c.gates();
  for (std::size_t i = gates.size(); i-- > 0;) {
    const Gate& g = gates[i];
    if (g.injected) continue;
    if (g.arity() == 1) {
      (relevant[static_cast<std::size_t>(g.q0())] ? out.pool_1q : out.excluded).push_back(i);
      continue;
    }
    const bool a = relevant[static_cast<std::size_t>(g.q0())];
    const bool b = relevant[static_cast<std::size_t>(g.q1())];
    if (!a && !b) {
      out.excluded.push_back(i);
      continue;
    }
    // A qubit outside the relevant set here is terminal: unmeasured and untouched
    // by any later in-cone gate.
    (a && b ? out.pool_2q : out.companion).push_back(i);
    relevant[static_cast<std::size_t>(g.q0())] = 1;
    relevant[static_cast<std::size_t>(g.q1())] = 1;
  }
  for (auto* list : {&out.pool_1q, &out.pool_2q, &out.excluded, &out.companion})
    std::reverse(list->begin(), list->end());
  return out;
}

Circuit fold(const Circuit& c, int factor) {
  if (factor < 1 || factor % 2 == 0) throw std::invalid_argument("fold: factor must be a positive odd integer");
  const Circuit inv = invert(c);
  std::vector<Gate> gates;
  gates.reserve(c.gates().size() * static_cast<std::size_t>(factor));
  gates.insert(gates.end(), c.gates().begin(), c.gates().end());
  for (int k = 0; k < (factor - 1) / 2; ++k) {
    gates.insert(gates.end(), inv.gates().begin(), inv.gates().end());
    gates.insert(gates.end(), c.gates().begin(), c.gates().end());
  }
  return c.with_gates(std::move(gates));
}

std::vector<Gate> pauli_basis_change(Pauli pauli, int qubit) {
  switch (pauli) {
    case Pauli::Z: return {};
    case Pauli::X: return {Gate::rz(qubit, kPi / 2), Gate::sx(qubit)};
    case Pauli::Y: return {Gate::sx(qubit)};
    case Pauli::I: break;
  }
  throw std::invalid_argument("pauli_basis_change: identity has no measurement basis");
}

}  // namespace depofold
