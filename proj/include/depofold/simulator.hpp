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

#ifndef DEPOFOLD_SIMULATOR_HPP_
#define DEPOFOLD_SIMULATOR_HPP_

#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "depofold/circuit.hpp"
#include "depofold/density_matrix.hpp"
#include "depofold/noise.hpp"
#include "depofold/rng.hpp"

namespace depofold {

class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultQubitCap = 10;

struct ScheduledLayer {
  std::vector<std::size_t> gates;
  double duration_us = 0.0;
};

/// Greedy ASAP layering of `gates`. Injected gates join the layer of the
/// preceding gate on their qubit and add no duration.
std::vector<ScheduledLayer> schedule(std::span<const Gate> gates, int n_qubits, const NoiseModel& m);

/// Final pre-measurement state of `c` (basis change included) under `m`.
/// Coherent errors are expected to be already present as injected gates.
DensityMatrixd run_density(const Circuit& c, const NoiseModel& m, int qubit_cap = kDefaultQubitCap);

/// Outcome distribution of the measured qubits; bit j of a pattern is measured()[j].
std::vector<double> probabilities(const DensityMatrixd& rho, std::span<const int> measured);

/// Noiseless <term> after the gates of `c` (its basis change is not applied).
double exact_expectation(const Circuit& c, PauliTerm term);
/// Noiseless expectation of Z on every measured qubit, after the basis change.
double exact_measured_expectation(const Circuit& c);

/// Parity expectation of a pattern distribution including symmetric readout error.
double expectation_from_probabilities(std::span<const double> probs, double p_readout);

struct ShotRecord {
  std::uint32_t bits = 0;
  std::uint32_t twirl_mask = 0;
  friend bool operator==(const ShotRecord&, const ShotRecord&) = default;
};

/// Aggregated shots. Entry (mask << n_measured) | bits counts shots with that
/// recorded outcome and readout-twirl mask.
struct ShotCounts {
  int n_measured = 1;
  std::vector<std::uint64_t> counts;

  explicit ShotCounts(int n_measured_ = 1)
      : n_measured(n_measured_), counts(std::size_t(1) << (2 * n_measured_), 0) {}

  std::uint64_t total() const;
  /// Mean of gamma * (-1)^{<s, x>} with s covering every measured bit.
  double signed_mean() const;
  ShotCounts& operator+=(const ShotCounts& other);
  friend bool operator==(const ShotCounts&, const ShotCounts&) = default;
};

ShotCounts tally(std::span<const ShotRecord> records, int n_measured);

inline constexpr std::size_t kShotBlock = 65536;

/// Draws `shots` outcomes by inverse CDF. With `twirl_readout` each shot gets a
/// uniform mask that flips the bits ahead of the readout error. Shot block b
/// draws from rng.split(b), so the result does not depend on `threads`.
ShotCounts sample_counts(std::span<const double> probs, std::uint64_t shots, double p_readout, bool twirl_readout,
                         const Rng& rng, int threads = 1);
std::vector<ShotRecord> sample_records(std::span<const double> probs, std::uint64_t shots, double p_readout,
                                       bool twirl_readout, const Rng& rng);

/// Noisy executor with a per-circuit probability cache. Coherent error from the
/// model is injected before simulation; `noise_factor` scales the model.
class SimulatedBackend {
 public:
  explicit SimulatedBackend(NoiseModel m, int qubit_cap = kDefaultQubitCap);

  const NoiseModel& noise() const { return noise_; }
  NoiseModel noise_at(double noise_factor) const;

  /// Circuit actually simulated: coherent rotations injected.
  Circuit prepare(const Circuit& c) const;

  std::vector<double> probabilities(const Circuit& c, double noise_factor = 1.0);
  /// As probabilities() for a circuit that already went through prepare().
  std::vector<double> prepared_probabilities(const Circuit& prepared, double noise_factor = 1.0);
  ShotCounts sample(const Circuit& c, std::uint64_t shots, bool twirl_readout, const Rng& rng,
                    double noise_factor = 1.0);
  /// Exact noisy parity expectation including readout error.
  double expectation(const Circuit& c, double noise_factor = 1.0);

  int threads = 1;

 private:
  NoiseModel noise_;
  int qubit_cap_;
  std::mutex mutex_;
  std::map<std::pair<std::uint64_t, double>, std::vector<double>> cache_;
};

}  // namespace depofold

#endif  // DEPOFOLD_SIMULATOR_HPP_
