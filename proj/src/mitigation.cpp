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

#include "depofold/mitigation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "depofold/twirl.hpp"

namespace depofold {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

std::uint64_t zne_index(int factor, std::uint64_t i) { return (static_cast<std::uint64_t>(factor) << 32) | i; }

double inverted_or_raw(double raw, double p_hat, bool& fallback) {
  try {
    return depolarizing_invert(raw, p_hat).value;
  } catch (const SingularityError&) {
    fallback = true;
    return raw;
  }
}

DepolarizationEstimate sample_estimation_set(SimulatedBackend& backend, const std::vector<Circuit>& circuits,
                                             std::uint64_t total_shots, const PipelineOptions& opt,
                                             const std::vector<Rng>& streams, double noise_factor) {
  const auto parts = split_shots(total_shots, circuits.size());
  std::vector<EstimationResult> results;
  results.reserve(circuits.size());
  for (std::size_t i = 0; i < circuits.size(); ++i) {
    const ShotCounts counts =
        sample_twirled(backend, circuits[i], opt.n_twirls, parts[i], opt.twirl_readout, streams[i], noise_factor);
    results.push_back({counts.signed_mean(), parts[i]});
  }
  return estimate_p(results);
}

}  // namespace

std::vector<std::uint64_t> split_shots(std::uint64_t total, std::uint64_t parts) {
  if (parts == 0) throw std::invalid_argument("split_shots: need at least one part");
  if (total < parts) throw std::invalid_argument("split_shots: fewer shots than parts");
  std::vector<std::uint64_t> out(parts, total / parts);
  for (std::uint64_t i = 0; i < total % parts; ++i) ++out[i];
  return out;
}

std::vector<Gate> observable_preparation(const Circuit& c) {
  std::vector<Gate> out;
  const auto& b = c.basis_change();
  for (auto it = b.rbegin(); it != b.rend(); ++it) out.push_back(inverse(*it));
  return out;
}

Circuit rida_generate(const Circuit& c, Rng rng) {
  const GateClassification cls = classify_gates(c);
  if (cls.pool_1q.empty() && cls.pool_2q.empty())
    throw DegenerateCircuitError("rida_generate: no gate of the circuit reaches the measured qubits");

  std::vector<std::size_t> selected;
  for (const auto* pool : {&cls.pool_1q, &cls.pool_2q})
    for (std::size_t k : rng.choose_sorted(pool->size(), half_rounded_up(pool->size())))
      selected.push_back((*pool)[k]);
  std::sort(selected.begin(), selected.end());

  std::vector<Gate> half;
  half.reserve(selected.size());
  for (std::size_t idx : selected) {
    Gate g = c.gates()[idx];
    if (has_angle(g.kind)) g.angle = rng.uniform(0.0, kTwoPi);
    half.push_back(g);
  }

  std::vector<Gate> gates = observable_preparation(c);
  gates.insert(gates.end(), half.begin(), half.end());
  for (auto it = half.rbegin(); it != half.rend(); ++it) gates.push_back(inverse(*it));
  for (std::size_t idx : cls.companion) {
    const Gate& g = c.gates()[idx];
    gates.push_back(g.kind == GateKind::RZZ ? Gate::cz(g.q0(), g.q1()) : g);
  }
  return c.with_gates(std::move(gates));
}

DepolarizationEstimate estimate_p(std::span<const EstimationResult> results) {
  if (results.empty()) throw std::invalid_argument("estimate_p: no estimation results");
  double weighted = 0;
  std::uint64_t total = 0;
  for (const auto& r : results) {
    if (r.shots == 0) throw std::invalid_argument("estimate_p: estimation circuit without shots");
    weighted += static_cast<double>(r.shots) * r.mean;
    total += r.shots;
  }
  DepolarizationEstimate e;
  e.per_circuit.assign(results.begin(), results.end());
  e.total_shots = total;
  e.p_hat = 1.0 - weighted / static_cast<double>(total);
  return e;
}

MitigatedValue depolarizing_invert(double raw, double p_hat) {
  if (!std::isfinite(p_hat) || p_hat >= 1.0 - kSingularityGuard)
    throw SingularityError("depolarizing_invert: estimated depolarization too close to 1");
  MitigatedValue v;
  v.value = raw / (1.0 - p_hat);
  v.raw = raw;
  v.p_hat = p_hat;
  v.method = "depolarizing-inversion";
  return v;
}

std::vector<Gate> random_rotation_layer(int n_qubits, Rng& rng) {
  std::vector<Gate> out;
  for (int q = 0; q < n_qubits; ++q) {
    const Matrix2cd u = rz_matrix(rng.uniform(0.0, kTwoPi)) * ry_matrix(rng.uniform(0.0, std::numbers::pi)) *
                        rz_matrix(rng.uniform(0.0, kTwoPi));
    auto gates = decompose_one_qubit(u, q);
    out.insert(out.end(), gates.begin(), gates.end());
  }
  return out;
}

Circuit wrap_with_rotation_layer(const Circuit& core, std::span<const Gate> layer) {
  std::vector<Gate> gates(layer.begin(), layer.end());
  gates.insert(gates.end(), core.gates().begin(), core.gates().end());
  for (auto it = layer.rbegin(); it != layer.rend(); ++it) gates.push_back(inverse(*it));
  return core.with_gates(std::move(gates));
}

Circuit cnot_only_estimation(const Circuit& c, bool with_rotations, Rng rng) {
  std::vector<Gate> entanglers;
  for (const Gate& g : c.gates())
    if (g.arity() == 2 && !g.injected) entanglers.push_back(g);
  Circuit core = c.with_gates(std::move(entanglers));
  if (with_rotations) core = wrap_with_rotation_layer(core, random_rotation_layer(c.n_qubits(), rng));
  std::vector<Gate> gates = observable_preparation(c);
  gates.insert(gates.end(), core.gates().begin(), core.gates().end());
  return c.with_gates(std::move(gates));
}

double quadratic_zne(const ZnePoints& pts) { return (15.0 * pts.x1 - 10.0 * pts.x3 + 3.0 * pts.x5) / 8.0; }

ExpZneFit exponential_zne_fit(const ZnePoints& pts) {
  const double x1 = pts.x1, x3 = pts.x3, x5 = pts.x5;
  const double d1 = x1 - x3, d2 = x3 - x5;
  auto strictly_between = [](double v, double a, double b) { return (a < v && v < b) || (b < v && v < a); };
  ExpZneFit fit;
  if (d1 == 0 && d2 == 0) {
    fit.value = x1;
    fit.branch = ExpZneBranch::Flat;
  } else if (d1 != 0 && d2 != 0 && (d1 > 0) == (d2 > 0)) {
    fit.u = d2 / d1;
    fit.value = x1 + d1 / (fit.u + std::sqrt(fit.u));
    fit.branch = ExpZneBranch::Monotone;
  } else if (x1 == x5) {
    fit.value = x1;
    fit.branch = ExpZneBranch::Symmetric;
  } else if (strictly_between(x1, x3, x5)) {
    fit.value = (x1 + x3) / 2;
    fit.branch = ExpZneBranch::FirstInMiddle;
  } else if (strictly_between(x5, x1, x3)) {
    fit.value = (3 * x1 - x3) / 2;
    fit.branch = ExpZneBranch::LastInMiddle;
  } else if (d1 == 0) {
    // x1 = x3 != x5: the decay ratio is unbounded and the fit saturates at x1.
    fit.value = x1;
    fit.branch = ExpZneBranch::FirstPairFlat;
  } else {
    // x3 = x5 != x1: no decay ratio; fall back to the linear extrapolation.
    fit.value = (3 * x1 - x3) / 2;
    fit.branch = ExpZneBranch::LastPairFlat;
  }
  return fit;
}

double exponential_zne(const ZnePoints& pts) { return exponential_zne_fit(pts).value; }

double trex_estimate(const ShotCounts& raw, const ShotCounts& calibration) {
  const double f0 = calibration.signed_mean();
  if (f0 == 0.0) throw SingularityError("trex_estimate: calibration expectation is zero");
  return raw.signed_mean() / f0;
}

double trex_estimate(std::span<const ShotRecord> raw, std::span<const ShotRecord> calibration, int n_measured) {
  if (raw.empty() || calibration.empty()) throw std::invalid_argument("trex_estimate: empty shot set");
  return trex_estimate(tally(raw, n_measured), tally(calibration, n_measured));
}

std::uint64_t estimation_class_key(const Circuit& c) { return c.structure_hash(); }

Rng estimation_stream(std::uint64_t seed, std::uint64_t class_key, std::uint64_t index) {
  return Rng::keyed(seed, "estimation-shots", class_key, index);
}

Rng target_stream(std::uint64_t seed, std::string_view method, const Circuit& target, int factor) {
  return Rng::keyed(seed, method, target.content_hash(), static_cast<std::uint64_t>(factor));
}

DepolarizationEstimate rida_estimate_p(const Circuit& target, SimulatedBackend& backend, const PipelineOptions& opt,
                                       std::uint64_t seed) {
  const std::uint64_t key = estimation_class_key(target);
  std::vector<Circuit> circuits;
  std::vector<Rng> streams;
  for (std::uint64_t i = 0; i < opt.n_est_circuits; ++i) {
    circuits.push_back(rida_generate(target, Rng::keyed(seed, "rida-circuit", key, i)));
    streams.push_back(estimation_stream(seed, key, i));
  }
  return sample_estimation_set(backend, circuits, opt.est_shots_total, opt, streams, 1.0);
}

Circuit calibration_circuit(const Circuit& target) { return Circuit(target.n_qubits(), {}, target.measured()); }

ShotCounts calibration_counts(const Circuit& target, SimulatedBackend& backend, const PipelineOptions& opt,
                              std::uint64_t seed, std::uint64_t total_shots, double noise_factor) {
  const std::uint64_t key = estimation_class_key(target);
  const Circuit calib = calibration_circuit(target);
  const auto parts = split_shots(total_shots, opt.n_est_circuits);
  ShotCounts total(static_cast<int>(target.measured().size()));
  for (std::uint64_t i = 0; i < opt.n_est_circuits; ++i)
    total += sample_twirled(backend, calib, opt.n_twirls, parts[i], opt.twirl_readout, estimation_stream(seed, key, i),
                            noise_factor);
  return total;
}

MitigatedValue raw_estimate(const Circuit& target, SimulatedBackend& backend, const PipelineOptions& opt,
                            std::uint64_t seed) {
  const ShotCounts counts =
      sample_twirled(backend, target, opt.n_twirls, opt.target_shots, false, target_stream(seed, "raw", target, 1));
  MitigatedValue v;
  v.method = "raw";
  v.raw = v.value = counts.signed_mean();
  v.shots_used = opt.target_shots;
  v.predicted_variance = (1.0 - v.raw * v.raw) / static_cast<double>(opt.target_shots);
  return v;
}

MitigatedValue rida_pipeline(const Circuit& target, SimulatedBackend& backend, const PipelineOptions& opt,
                             std::uint64_t seed, EstimationCache* cache) {
  auto make = [&] { return rida_estimate_p(target, backend, opt, seed); };
  const DepolarizationEstimate est =
      cache ? cache->estimates.get("rida", estimation_class_key(target), 1, make) : make();
  const ShotCounts counts = sample_twirled(backend, target, opt.n_twirls, opt.target_shots, opt.twirl_readout,
                                           target_stream(seed, "target", target, 1));
  MitigatedValue v;
  v.method = "rida";
  v.raw = counts.signed_mean();
  v.p_hat = est.p_hat;
  v.value = inverted_or_raw(v.raw, est.p_hat, v.fallback);
  v.shots_used = opt.target_shots + est.total_shots;
  if (!v.fallback)
    v.predicted_variance =
        (1.0 - v.raw * v.raw) / (static_cast<double>(opt.target_shots) * (1 - est.p_hat) * (1 - est.p_hat));
  return v;
}

MitigatedValue trex_pipeline(const Circuit& target, SimulatedBackend& backend, const PipelineOptions& opt,
                             std::uint64_t seed, EstimationCache* cache) {
  auto make = [&] { return calibration_counts(target, backend, opt, seed, opt.est_shots_total); };
  const ShotCounts calib =
      cache ? cache->calibrations.get("trex", estimation_class_key(target), 1, make) : make();
  const ShotCounts counts = sample_twirled(backend, target, opt.n_twirls, opt.target_shots, opt.twirl_readout,
                                           target_stream(seed, "target", target, 1));
  MitigatedValue v;
  v.method = "trex";
  v.raw = counts.signed_mean();
  v.p_hat = 1.0 - calib.signed_mean();
  v.shots_used = opt.target_shots + opt.est_shots_total;
  try {
    v.value = trex_estimate(counts, calib);
  } catch (const SingularityError&) {
    v.value = v.raw;
    v.fallback = true;
  }
  return v;
}

MitigatedValue ezne_trex_pipeline(const Circuit& target, SimulatedBackend& backend, const PipelineOptions& opt,
                                  std::uint64_t seed, EstimationCache* cache) {
  const auto target_parts = split_shots(opt.target_shots, kZneFactors.size());
  const auto calib_parts = split_shots(opt.est_shots_total, kZneFactors.size());
  const std::uint64_t key = estimation_class_key(target);
  std::array<double, 3> x{};
  MitigatedValue v;
  v.method = "trex_ezne";
  for (std::size_t k = 0; k < kZneFactors.size(); ++k) {
    const int factor = kZneFactors[k];
    const double noise_factor = opt.scale_noise_model ? factor : 1.0;
    const Circuit circuit = opt.scale_noise_model ? target : fold(target, factor);
    // Folding leaves readout untouched, so one calibration serves every factor.
    const int calib_factor = opt.scale_noise_model ? factor : 1;
    const std::uint64_t calib_shots = opt.scale_noise_model ? calib_parts[k] : opt.est_shots_total;
    auto make = [&] { return calibration_counts(target, backend, opt, seed, calib_shots, noise_factor); };
    const ShotCounts calib = cache ? cache->calibrations.get("trex", key, calib_factor, make) : make();
    const ShotCounts counts = sample_twirled(backend, circuit, opt.n_twirls, target_parts[k], opt.twirl_readout,
                                             target_stream(seed, "zne", target, factor), noise_factor);
    if (k == 0) v.raw = counts.signed_mean();
    try {
      x[k] = trex_estimate(counts, calib);
    } catch (const SingularityError&) {
      x[k] = counts.signed_mean();
      v.fallback = true;
    }
  }
  v.value = exponential_zne({x[0], x[1], x[2], target_parts[0]});
  v.shots_used = opt.target_shots + opt.est_shots_total;
  return v;
}

MitigatedValue cnot_qzne_pipeline(const Circuit& target, SimulatedBackend& backend, const PipelineOptions& opt,
                                  std::uint64_t seed, EstimationCache* cache) {
  const auto target_parts = split_shots(opt.target_shots, kZneFactors.size());
  const auto est_parts = split_shots(opt.est_shots_total, kZneFactors.size());
  const std::uint64_t key = estimation_class_key(target);
  const std::string tag = opt.cnot_rotations ? "cnot_qzne_rot" : "cnot_qzne";
  std::array<double, 3> x{};
  MitigatedValue v;
  v.method = tag;
  for (std::size_t k = 0; k < kZneFactors.size(); ++k) {
    const int factor = kZneFactors[k];
    const double noise_factor = opt.scale_noise_model ? factor : 1.0;
    const Circuit circuit = opt.scale_noise_model ? target : fold(target, factor);
    auto make = [&] {
      std::vector<Circuit> circuits;
      std::vector<Rng> streams;
      for (std::uint64_t i = 0; i < opt.n_est_circuits; ++i) {
        circuits.push_back(
            cnot_only_estimation(circuit, opt.cnot_rotations, Rng::keyed(seed, "cnot-circuit", key, zne_index(factor, i))));
        streams.push_back(Rng::keyed(seed, "cnot-shots", key, zne_index(factor, i)));
      }
      return sample_estimation_set(backend, circuits, est_parts[k], opt, streams, noise_factor);
    };
    const DepolarizationEstimate est = cache ? cache->estimates.get(tag, key, factor, make) : make();
    const ShotCounts counts = sample_twirled(backend, circuit, opt.n_twirls, target_parts[k], opt.twirl_readout,
                                             target_stream(seed, "zne", target, factor), noise_factor);
    const double raw = counts.signed_mean();
    if (k == 0) {
      v.raw = raw;
      v.p_hat = est.p_hat;
    }
    x[k] = inverted_or_raw(raw, est.p_hat, v.fallback);
  }
  v.value = quadratic_zne({x[0], x[1], x[2], target_parts[0]});
  v.shots_used = opt.target_shots + opt.est_shots_total;
  return v;
}

}  // namespace depofold
