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

#include "depofold/twirl.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

#include "depofold/mitigation.hpp"

namespace depofold {

namespace {

constexpr std::array<Pauli, 4> kPaulis = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};

Matrix4cd pair_matrix(const std::array<Pauli, 2>& p) { return kron2(pauli_matrix(p[1]), pauli_matrix(p[0])); }

}  // namespace

Matrix2cd pauli_matrix(Pauli p) {
  switch (p) {
    case Pauli::I: return Matrix2cd::Identity();
    case Pauli::X: return pauli_x<double>();
    case Pauli::Y: return pauli_y<double>();
    case Pauli::Z: return pauli_z<double>();
  }
  return Matrix2cd::Identity();
}

Matrix4cd two_qubit_matrix(const Gate& g) {
  const auto d = gate_diagonal(g);
  Matrix4cd u = Matrix4cd::Zero();
  for (int i = 0; i < 4; ++i) u(i, i) = d[static_cast<std::size_t>(i)];
  return u;
}

Matrix4cd frame_unitary(GateKind kind, const TwirlFrame& frame) {
  const Matrix4cd u = two_qubit_matrix(Gate{kind, {0, 1}, 0.0});
  return pair_matrix(frame.post) * u * pair_matrix(frame.pre);
}

std::array<TwirlFrame, 16> twirl_table(GateKind kind) {
  if (kind != GateKind::CZ) throw std::invalid_argument("twirl_table: only CZ is twirled");
  const Matrix4cd u = two_qubit_matrix(Gate{kind, {0, 1}, 0.0});
  std::array<TwirlFrame, 16> table;
  for (int i = 0; i < 16; ++i) {
    TwirlFrame f;
    f.pre = {kPaulis[static_cast<std::size_t>(i % 4)], kPaulis[static_cast<std::size_t>(i / 4)]};
    // post must undo U pre U^dag, which is itself a Pauli pair for a Clifford U.
    const Matrix4cd conj = u * pair_matrix(f.pre) * u.adjoint();
    bool found = false;
    for (int j = 0; j < 16 && !found; ++j) {
      const std::array<Pauli, 2> cand = {kPaulis[static_cast<std::size_t>(j % 4)], kPaulis[static_cast<std::size_t>(j / 4)]};
      if (phase_free_distance(pair_matrix(cand), conj) < 1e-12) {
        f.post = cand;
        found = true;
      }
    }
    if (!found) throw std::logic_error("twirl_table: gate is not Clifford");
    table[static_cast<std::size_t>(i)] = f;
  }
  return table;
}

std::vector<Gate> pauli_gates(Pauli p, int qubit) {
  constexpr double pi = std::numbers::pi;
  switch (p) {
    case Pauli::I: return {};
    case Pauli::X: return {Gate::x(qubit)};
    case Pauli::Z: return {Gate::rz(qubit, pi)};
    case Pauli::Y: return {Gate::rz(qubit, pi), Gate::x(qubit)};
  }
  return {};
}

Circuit twirl_circuit(const Circuit& c, Rng rng) {
  static const auto cz_table = twirl_table(GateKind::CZ);
  const auto& gates = c.gates();
  std::vector<Gate> out;
  out.reserve(gates.size() * 2);
  auto emit = [&](const std::array<Pauli, 2>& pair, const Gate& g) {
    for (int k = 0; k < 2; ++k) {
      auto ps = pauli_gates(pair[static_cast<std::size_t>(k)], g.qubits[static_cast<std::size_t>(k)]);
      out.insert(out.end(), ps.begin(), ps.end());
    }
  };
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const Gate& g = gates[i];
    if (g.kind != GateKind::CZ || g.injected) {
      out.push_back(g);
      continue;
    }
    const TwirlFrame& f = cz_table[rng.below(16)];
    emit(f.pre, g);
    out.push_back(g);
    while (i + 1 < gates.size() && gates[i + 1].injected) out.push_back(gates[++i]);
    emit(f.post, g);
  }
  return c.with_gates(std::move(out));
}

ShotCounts sample_twirled(SimulatedBackend& backend, const Circuit& c, int n_twirls, std::uint64_t shots,
                          bool twirl_readout, const Rng& rng, double noise_factor) {
  const double p_ro = backend.noise_at(noise_factor).p_readout;
  if (n_twirls <= 0)
    return sample_counts(backend.probabilities(c, noise_factor), shots, p_ro, twirl_readout, rng, backend.threads);
  const Circuit prepared = backend.prepare(c);
  const auto parts = split_shots(shots, std::min<std::uint64_t>(static_cast<std::uint64_t>(n_twirls), shots));
  ShotCounts total(static_cast<int>(c.measured().size()));
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (parts[k] == 0) continue;
    const Circuit instance = twirl_circuit(prepared, rng.split("frame", k));
    const auto p = backend.prepared_probabilities(instance, noise_factor);
    total += sample_counts(p, parts[k], p_ro, twirl_readout, rng.split("shots", k), backend.threads);
  }
  return total;
}

double twirl_ensemble_estimate(const Circuit& c, const NoiseModel& m, int n_twirls, std::uint64_t shots,
                               std::uint64_t seed, bool twirl_readout) {
  if (n_twirls < 1) throw std::invalid_argument("twirl_ensemble_estimate: need at least one twirl");
  SimulatedBackend backend(m);
  return sample_twirled(backend, c, n_twirls, shots, twirl_readout, Rng::keyed(seed, "twirl-ensemble"))
      .signed_mean();
}

}  // namespace depofold
