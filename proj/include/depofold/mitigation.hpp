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

#ifndef DEPOFOLD_MITIGATION_HPP_
#define DEPOFOLD_MITIGATION_HPP_

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "depofold/circuit.hpp"
#include "depofold/rng.hpp"
#include "depofold/simulator.hpp"

namespace depofold {

class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateCircuitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EstimationResult {
  double mean = 1.0;
  std::uint64_t shots = 0;
};

struct DepolarizationEstimate {
  double p_hat = 0.0;
  std::vector<EstimationResult> per_circuit;
  std::uint64_t total_shots = 0;
  bool negative() const { return p_hat < 0; }
};

struct MitigatedValue {
  double value = 0.0;
  std::string method;
  double raw = 0.0;
  std::uint64_t shots_used = 0;
  std::optional<double> predicted_variance;
  double p_hat = std::numeric_limits<double>::quiet_NaN();
  /// Set when an inversion hit the singularity guard and the raw value was used.
  bool fallback = false;
};

/// Sample means at noise factors 1, 3 and 5.
struct ZnePoints {
  double x1 = 0.0;
  double x3 = 0.0;
  double x5 = 0.0;
  std::uint64_t shots_per_point = 0;
};

inline constexpr std::array<int, 3> kZneFactors = {1, 3, 5};
inline constexpr double kSingularityGuard = 1e-9;

/// Even split with the remainder going to the first parts.
std::vector<std::uint64_t> split_shots(std::uint64_t total, std::uint64_t parts = 3);

/// ceil(n / 2): half of a pool, rounding an odd half up.
constexpr std::size_t half_rounded_up(std::size_t n) { return (n + 1) / 2; }

/// Prefix that prepares the +1 eigenstate of the measured observable, so that an
/// identity core followed by the basis change returns the all-zero pattern.
std::vector<Gate> observable_preparation(const Circuit& c);

/// Estimation circuit: half of each gate pool (original order kept) followed by
/// its inverse and the companion gates. Angles of the selected rotations are redrawn.
Circuit rida_generate(const Circuit& c, Rng rng);

DepolarizationEstimate estimate_p(std::span<const EstimationResult> results);
/// raw / (1 - p_hat); throws SingularityError when p_hat >= 1 - 1e-9.
MitigatedValue depolarizing_invert(double raw, double p_hat);

/// One random SU(2) rotation per qubit, in the basis set.
std::vector<Gate> random_rotation_layer(int n_qubits, Rng& rng);
/// layer, core gates, inverse of layer.
Circuit wrap_with_rotation_layer(const Circuit& core, std::span<const Gate> layer);
/// The two-qubit gates of c in order, optionally sandwiched by a rotation layer.
Circuit cnot_only_estimation(const Circuit& c, bool with_rotations, Rng rng);

double quadratic_zne(const ZnePoints& pts);

enum class ExpZneBranch { Monotone, FirstInMiddle, LastInMiddle, Symmetric, Flat, FirstPairFlat, LastPairFlat };

struct ExpZneFit {
  double value = 0.0;
  ExpZneBranch branch = ExpZneBranch::Flat;
  /// Decay ratio (x3 - x5) / (x1 - x3) on the monotone branch, NaN elsewhere.
  double u = std::numeric_limits<double>::quiet_NaN();
};

ExpZneFit exponential_zne_fit(const ZnePoints& pts);
double exponential_zne(const ZnePoints& pts);

/// f(D1) / f(D0) with the readout-twirl sign applied per shot.
double trex_estimate(const ShotCounts& raw, const ShotCounts& calibration);
double trex_estimate(std::span<const ShotRecord> raw, std::span<const ShotRecord> calibration, int n_measured);

struct PipelineOptions {
  std::uint64_t n_est_circuits = 50;
  std::uint64_t est_shots_total = 10'000'000;
  std::uint64_t target_shots = 10'000'000;
  bool twirl_readout = true;
  /// Pauli-twirled instances per executed circuit; 0 disables gate twirling.
  int n_twirls = 0;
  /// Amplify noise by scaling the model instead of folding.
  bool scale_noise_model = false;
  /// Use the rotation-layer variant of the CNOT-only estimation circuits.
  bool cnot_rotations = false;
};

/// Key shared by circuits whose estimation circuits are interchangeable.
std::uint64_t estimation_class_key(const Circuit& c);

/// Stream used for the i-th estimation or calibration circuit of a class.
Rng estimation_stream(std::uint64_t seed, std::uint64_t class_key, std::uint64_t index);
/// Stream used to sample a target circuit at a noise factor.
Rng target_stream(std::uint64_t seed, std::string_view method, const Circuit& target, int factor);

/// Thread-safe memo keyed by (method, class, noise factor). Values are pure
/// functions of their key and seed, so results do not depend on cache use.
template <typename Value>
class Memo {
 public:
  template <typename Make>
  Value get(const std::string& method, std::uint64_t class_key, int factor, Make&& make) {
    const auto key = std::make_tuple(method, class_key, factor);
    {
      std::lock_guard lock(mutex_);
      if (auto it = entries_.find(key); it != entries_.end()) return it->second;
    }
    Value v = make();
    std::lock_guard lock(mutex_);
    return entries_.emplace(key, std::move(v)).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<std::string, std::uint64_t, int>, Value> entries_;
};

struct EstimationCache {
  Memo<DepolarizationEstimate> estimates;
  Memo<ShotCounts> calibrations;
};

DepolarizationEstimate rida_estimate_p(const Circuit& target, SimulatedBackend& backend, const PipelineOptions& opt,
                                       std::uint64_t seed);
/// Measurement-only calibration circuit for the measured qubits of `target`.
Circuit calibration_circuit(const Circuit& target);
/// Calibration shots drawn on the same per-class streams and shot split as the
/// RIDA estimation circuits.
ShotCounts calibration_counts(const Circuit& target, SimulatedBackend& backend, const PipelineOptions& opt,
                              std::uint64_t seed, std::uint64_t total_shots, double noise_factor = 1.0);

MitigatedValue raw_estimate(const Circuit& target, SimulatedBackend& backend, const PipelineOptions& opt,
                            std::uint64_t seed);
MitigatedValue rida_pipeline(const Circuit& target, SimulatedBackend& backend, const PipelineOptions& opt,
                             std::uint64_t seed, EstimationCache* cache = nullptr);
/// Readout-only mitigation at the unamplified noise level.
MitigatedValue trex_pipeline(const Circuit& target, SimulatedBackend& backend, const PipelineOptions& opt,
                             std::uint64_t seed, EstimationCache* cache = nullptr);
MitigatedValue ezne_trex_pipeline(const Circuit& target, SimulatedBackend& backend, const PipelineOptions& opt,
                                  std::uint64_t seed, EstimationCache* cache = nullptr);
MitigatedValue cnot_qzne_pipeline(const Circuit& target, SimulatedBackend& backend, const PipelineOptions& opt,
                                  std::uint64_t seed, EstimationCache* cache = nullptr);

}  // namespace depofold

#endif  // DEPOFOLD_MITIGATION_HPP_
