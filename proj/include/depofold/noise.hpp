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

#ifndef DEPOFOLD_NOISE_HPP_
#define DEPOFOLD_NOISE_HPP_

#include <limits>
#include <vector>

#include "depofold/circuit.hpp"
#include "depofold/linalg.hpp"

namespace depofold {

class Rng;

/// Error parameters of the simulated device. Times are in microseconds; an
/// infinite T1/T2 disables thermal relaxation.
struct NoiseModel {
  double p_2q = 0.0;
  double p_1q = 0.0;
  double p_readout = 0.0;
  double t1_us = std::numeric_limits<double>::infinity();
  double t2_us = std::numeric_limits<double>::infinity();
  double dur_2q_us = 6.8e-2;
  double dur_1q_us = 6.8e-3;
  double multiplier = 1.0;
  double coherent_angle_rad = 0.0;
  /// Set when scaling pushed a probability above 1 and it was clamped.
  bool clamped = false;
  /// Apply the one-qubit gate error to RZ gates as well.
  bool rz_error = true;
  /// Model the two-qubit error as one joint two-qubit depolarizer instead of two local ones.
  bool joint_2q_depol = false;

  bool thermal_enabled() const { return std::isfinite(t1_us) || std::isfinite(t2_us); }
  /// Throws std::invalid_argument when a field is out of its physical range.
  void validate() const;

  static NoiseModel noiseless() { return {}; }
  static NoiseModel readout_only(double p_readout);
  static NoiseModel depolarizing_only(double p_1q, double p_2q);

  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

/// Median IBM Kingston figures; one-qubit gate time is a tenth of the two-qubit time.
NoiseModel kingston_default();

/// Multiplies the error probabilities by k (clamped to 1) and divides T1/T2 by k.
NoiseModel scale(const NoiseModel& m, double k);

/// Completely positive map on one or two qubits, stored both as Kraus operators
/// and as its superoperator. For an output entry (a, b) of the local d x d
/// block the row index is a * d + b; two-qubit local index is b_first + 2 b_second.
struct Channel {
  int arity = 1;
  std::vector<MatrixXcd> kraus;
  MatrixXcd superop;

  static Channel from_kraus(int arity, std::vector<MatrixXcd> kraus);
  static Channel identity(int arity);
  /// this after first.
  Channel after(const Channel& first) const;
  /// Independent product channel: `lo` on the first qubit, `hi` on the second.
  static Channel product(const Channel& lo, const Channel& hi);

  bool is_identity(double tol = 0.0) const;
  /// Max deviation of sum K^dag K from the identity.
  double trace_preservation_error() const;
};

/// rho -> (1 - p) rho + p Tr_q(rho) (x) I/2 on the target qubit.
Channel depolarizing_1q(double p);
/// Two independent local depolarizers with p' = 1 - sqrt(1 - p_2q).
Channel two_qubit_error(double p_2q);
double local_rate_for_two_qubit_error(double p_2q);
/// rho -> (1 - p) rho + p Tr(rho) I/4 on a qubit pair.
Channel joint_depolarizing_2q(double p);
/// Amplitude damping towards |0> composed with pure dephasing for an idle span.
Channel thermal_channel(double t1_us, double t2_us, double duration_us);

/// Symmetric classical bit flip with probability p_ro.
int readout_flip(double p_ro, int bit, Rng& rng);

/// Inserts RX(angle) on both qubits right after every two-qubit gate.
Circuit inject_coherent(const Circuit& c, double angle);

}  // namespace depofold

#endif  // DEPOFOLD_NOISE_HPP_
