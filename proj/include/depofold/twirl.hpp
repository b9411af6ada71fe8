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

#ifndef DEPOFOLD_TWIRL_HPP_
#define DEPOFOLD_TWIRL_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include "depofold/circuit.hpp"
#include "depofold/noise.hpp"
#include "depofold/rng.hpp"
#include "depofold/simulator.hpp"

namespace depofold {

/// Paulis applied before and after a two-qubit gate; index 0 is the gate's first qubit.
struct TwirlFrame {
  std::array<Pauli, 2> pre{Pauli::I, Pauli::I};
  std::array<Pauli, 2> post{Pauli::I, Pauli::I};
  friend bool operator==(const TwirlFrame&, const TwirlFrame&) = default;
};

inline constexpr int kDefaultTwirls = 250;

Matrix2cd pauli_matrix(Pauli p);
/// Unitary of (post) . U . (pre) with U the gate's 4x4 matrix.
Matrix4cd frame_unitary(GateKind kind, const TwirlFrame& frame);
Matrix4cd two_qubit_matrix(const Gate& g);

/// The 16 frames of `kind`, indexed by pre[0] + 4 pre[1].
std::array<TwirlFrame, 16> twirl_table(GateKind kind);

/// Native gates for a single Pauli: X -> X, Z -> RZ(pi), Y -> RZ(pi) then X.
std::vector<Gate> pauli_gates(Pauli p, int qubit);

/// Wraps every CZ (together with any injected rotations right after it) in a
/// uniformly drawn frame.
Circuit twirl_circuit(const Circuit& c, Rng rng);

/// Samples `n_twirls` twirled instances of backend.prepare(c), splitting shots
/// as split_shots does. n_twirls = 0 samples the circuit untwirled.
ShotCounts sample_twirled(SimulatedBackend& backend, const Circuit& c, int n_twirls, std::uint64_t shots,
                          bool twirl_readout, const Rng& rng, double noise_factor = 1.0);

/// Signed mean over a twirled ensemble on a fresh backend for `m`.
double twirl_ensemble_estimate(const Circuit& c, const NoiseModel& m, int n_twirls, std::uint64_t shots,
                               std::uint64_t seed, bool twirl_readout = true);

}  // namespace depofold

#endif  // DEPOFOLD_TWIRL_HPP_
