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

#ifndef DEPOFOLD_HARNESS_HPP_
#define DEPOFOLD_HARNESS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "depofold/circuit.hpp"
#include "depofold/mitigation.hpp"
#include "depofold/noise.hpp"

namespace depofold {

enum class Method { Raw, Rida, TrexEzne, CnotQzne, CnotQzneRot };

std::string_view to_string(Method m);
/// Accepts both dash and underscore spellings.
Method method_from_string(std::string_view name);

struct ExperimentConfig {
  std::vector<int> qubits{4};
  int layers = 12;
  std::vector<double> multipliers{1.0};
  std::vector<std::uint64_t> shots{std::uint64_t(1) << 17};
  int n_strings = 100;
  std::vector<Method> methods{Method::Raw, Method::Rida, Method::TrexEzne, Method::CnotQzne};
  bool coherent = false;
  double coherent_angle_rad = 0.15;
  /// Pauli-twirled instances per circuit when `coherent` is set.
  int twirls = 250;
  std::uint64_t est_circuits = 10;
  std::uint64_t est_shots = 1'000'000;
  bool twirl_readout = true;
  bool scale_noise_model = false;
  NoiseModel base_noise = kingston_default();
  std::uint64_t master_seed = 1;
  /// Record wall time per row; off gives byte-identical output across runs.
  bool record_timing = true;
  int threads = 1;

  void validate() const;
  NoiseModel noise_for(double multiplier) const;
  PipelineOptions pipeline_options(std::uint64_t target_shots) const;
};

struct TargetCase {
  std::vector<double> params;
  PauliTerm term;
  /// Value the optimizer aimed at.
  double target = 0.0;
  /// Achieved noiseless expectation; the reference for RMSE.
  double truth = 0.0;
  double residual = 0.0;
  int attempts = 1;
};

struct TargetOptions {
  double tolerance = 1e-6;
  int max_passes = 200;
  int max_attempts = 8;
  /// Draw targets from shuffled equal-width strata of [-1, 1] (jittered inside each).
  bool stratified = true;
  int threads = 1;
};

struct TargetBatch {
  std::vector<TargetCase> cases;
  /// Cases dropped after max_attempts optimizer failures.
  int skipped = 0;
};

/// Noiseless <term> of the ansatz with `params`, by direct statevector evolution.
double ansatz_expectation(int n_qubits, int layers, std::span<const double> params, PauliTerm term);

/// Coordinate descent on |<term> - target|: per angle, a coarse scan followed by
/// golden-section refinement. Returns the final residual.
double fit_ansatz(int n_qubits, int layers, std::vector<double>& params, PauliTerm term, double target,
                  const TargetOptions& opt = {});

TargetBatch generate_targets(int n_qubits, int layers, int count, std::uint64_t seed, const TargetOptions& opt = {});

/// Ansatz circuit of a case, measuring its observable.
Circuit target_circuit(const TargetCase& tc, int n_qubits, int layers);

double rmse(std::span<const double> estimates, std::span<const double> truths);

struct ResultRow {
  int qubits = 0;
  double multiplier = 1.0;
  std::uint64_t shots = 0;
  std::string method;
  double rmse = 0.0;
  double mean_p_hat = 0.0;
  double wall_time_s = 0.0;
  int fallbacks = 0;
  int cases = 0;
};

struct CaseValue {
  int qubits = 0;
  double multiplier = 1.0;
  std::uint64_t shots = 0;
  std::string method;
  std::size_t case_index = 0;
  double truth = 0.0;
  MitigatedValue value;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::vector<CaseValue> cases;
  int skipped_targets = 0;
};

MitigatedValue run_method(Method method, const Circuit& target, SimulatedBackend& backend, const PipelineOptions& opt,
                          std::uint64_t seed, EstimationCache* cache);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

std::string format_double(double v);
std::string rows_to_csv(const std::vector<ResultRow>& rows);

/// Depolarization probability minimising sum (raw_i / (1 - p) - truth_i)^2.
double optimal_p(std::span<const double> raw, std::span<const double> truths);

struct ConvergenceRow {
  std::size_t subset_size = 0;
  /// Mean over resamples of |mean(subset) - p_opt|.
  double mean_abs_error = 0.0;
  double rmse = 0.0;
};

/// Resamples subsets (without replacement) of `pool` for each size and
/// compares their mean with `p_opt`.
std::vector<ConvergenceRow> convergence_study(std::span<const double> pool, double p_opt,
                                              std::span<const std::size_t> subset_sizes, std::size_t resamples,
                                              std::uint64_t seed);

}  // namespace depofold

#endif  // DEPOFOLD_HARNESS_HPP_
