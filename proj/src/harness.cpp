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

#include "depofold/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "depofold/density_matrix.hpp"
#include "depofold/parallel.hpp"
#include "depofold/simulator.hpp"

namespace depofold {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
constexpr double kInvPhi = 0.6180339887498949;
constexpr int kScanPoints = 16;

std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[rng.below(i)]);
  return idx;
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Raw: return "raw";
    case Method::Rida: return "rida";
    case Method::TrexEzne: return "trex_ezne";
    case Method::CnotQzne: return "cnot_qzne";
    case Method::CnotQzneRot: return "cnot_qzne_rot";
  }
  return "?";
}

Method method_from_string(std::string_view name) {
  std::string s(name);
  for (char& c : s)
    if (c == '-') c = '_';
  if (s == "raw") return Method::Raw;
  if (s == "rida") return Method::Rida;
  if (s == "trex_ezne" || s == "ezne_trex") return Method::TrexEzne;
  if (s == "cnot_qzne") return Method::CnotQzne;
  if (s == "cnot_qzne_rot") return Method::CnotQzneRot;
  throw std::invalid_argument("unknown method: " + std::string(name));
}

void ExperimentConfig::validate() const {
  if (qubits.empty() || multipliers.empty() || shots.empty() || methods.empty())
    throw std::invalid_argument("ExperimentConfig: empty sweep axis");
  for (int n : qubits)
    if (n < 1 || n > kDefaultQubitCap) throw std::invalid_argument("ExperimentConfig: qubit count out of range");
  for (double m : multipliers)
    if (!(m >= 0)) throw std::invalid_argument("ExperimentConfig: negative multiplier");
  for (auto s : shots)
    if (s < 3) throw std::invalid_argument("ExperimentConfig: need at least 3 target shots");
  if (layers < 0) throw std::invalid_argument("ExperimentConfig: negative layer count");
  if (n_strings < 1) throw std::invalid_argument("ExperimentConfig: need at least one string");
  if (est_circuits < 1 || est_shots < 3 * est_circuits)
    throw std::invalid_argument("ExperimentConfig: need at least 3 estimation shots per estimation circuit");
  if (twirls < 0) throw std::invalid_argument("ExperimentConfig: negative twirl count");
  base_noise.validate();
}

NoiseModel ExperimentConfig::noise_for(double multiplier) const {
  NoiseModel m = scale(base_noise, multiplier);
  if (coherent) m.coherent_angle_rad = coherent_angle_rad;
  return m;
}

PipelineOptions ExperimentConfig::pipeline_options(std::uint64_t target_shots) const {
  PipelineOptions opt;
  opt.n_est_circuits = est_circuits;
  opt.est_shots_total = est_shots;
  opt.target_shots = target_shots;
  opt.twirl_readout = twirl_readout;
  opt.n_twirls = coherent ? twirls : 0;
  opt.scale_noise_model = scale_noise_model;
  return opt;
}

double ansatz_expectation(int n_qubits, int layers, std::span<const double> params, PauliTerm term) {
  if (params.size() != efficient_su2_param_count(n_qubits, layers))
    throw std::invalid_argument("ansatz_expectation: parameter count mismatch");
  StateVectord psi(n_qubits);
  const auto cz = gate_diagonal(Gate::cz(0, 1));
  std::size_t k = 0;
  for (int l = 0; l <= layers; ++l) {
    for (int q = 0; q < n_qubits; ++q) psi.apply_unitary(ry_matrix(params[k + static_cast<std::size_t>(q)]), q);
    for (int q = 0; q < n_qubits; ++q)
      psi.apply_unitary(rz_matrix(params[k + static_cast<std::size_t>(n_qubits + q)]), q);
    k += static_cast<std::size_t>(2 * n_qubits);
    if (l < layers)
      for (int q = 0; q + 1 < n_qubits; ++q) psi.apply_diagonal(cz, q, q + 1);
  }
  switch (term.op) {
    case Pauli::I: return 1.0;
    case Pauli::X: return psi.expectation(pauli_x<double>(), term.qubit);
    case Pauli::Y: return psi.expectation(pauli_y<double>(), term.qubit);
    case Pauli::Z: return psi.expectation_z(term.qubit);
  }
  return 0.0;
}

double fit_ansatz(int n_qubits, int layers, std::vector<double>& params, PauliTerm term, double target,
                  const TargetOptions& opt) {
  auto loss = [&](std::size_t j, double theta) {
    const double saved = params[j];
    params[j] = theta;
    const double v = std::abs(ansatz_expectation(n_qubits, layers, params, term) - target);
    params[j] = saved;
    return v;
  };
  double residual = std::abs(ansatz_expectation(n_qubits, layers, params, term) - target);
  for (int pass = 0; pass < opt.max_passes && residual > opt.tolerance; ++pass) {
    for (std::size_t j = 0; j < params.size() && residual > opt.tolerance; ++j) {
      const double start = params[j];
      const double step = kTwoPi / kScanPoints;
      double best = start, best_loss = residual;
      for (int k = 1; k < kScanPoints; ++k) {
        const double th = start + k * step;
        const double l = loss(j, th);
        if (l < best_loss) best = th, best_loss = l;
      }
      double a = best - step, b = best + step;
      double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
      double fc = loss(j, c), fd = loss(j, d);
      while (b - a > 1e-12) {
        if (fc < fd) {
          b = d, d = c, fd = fc;
          c = b - kInvPhi * (b - a);
          fc = loss(j, c);
        } else {
          a = c, c = d, fc = fd;
          d = a + kInvPhi * (b - a);
          fd = loss(j, d);
        }
      }
      const double mid = (a + b) / 2;
      const double fm = loss(j, mid);
      if (fm < best_loss) best = mid, best_loss = fm;
      params[j] = wrap_angle(best);
      residual = std::abs(ansatz_expectation(n_qubits, layers, params, term) - target);
    }
  }
  return residual;
}

Circuit target_circuit(const TargetCase& tc, int n_qubits, int layers) {
  return build_efficient_su2(n_qubits, layers, tc.params).with_observable(tc.term);
}

TargetBatch generate_targets(int n_qubits, int layers, int count, std::uint64_t seed, const TargetOptions& opt) {
  if (count < 1) throw std::invalid_argument("generate_targets: count must be positive");
  Rng rng = Rng::keyed(seed, "targets", static_cast<std::uint64_t>(n_qubits), static_cast<std::uint64_t>(layers));
  Rng value_rng = rng.split("values");
  std::vector<double> values(static_cast<std::size_t>(count));
  if (opt.stratified) {
    const auto strata = shuffled_indices(values.size(), value_rng);
    for (std::size_t k = 0; k < values.size(); ++k)
      values[k] = -1.0 + 2.0 * (static_cast<double>(strata[k]) + value_rng.uniform()) / count;
  } else {
    for (auto& v : values) v = value_rng.uniform(-1.0, 1.0);
  }

  const std::size_t n_params = efficient_su2_param_count(n_qubits, layers);
  std::vector<TargetCase> cases(values.size());
  std::vector<char> ok(values.size(), 0);
  parallel_for(values.size(), opt.threads, [&](std::size_t k) {
    Rng case_rng = rng.split("case", k);
    TargetCase tc;
    tc.target = values[k];
    tc.term.qubit = static_cast<int>(case_rng.below(static_cast<std::uint64_t>(n_qubits)));
    tc.term.op = std::array{Pauli::X, Pauli::Y, Pauli::Z}[case_rng.below(3)];
    for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
      Rng init = case_rng.split("init", static_cast<std::uint64_t>(attempt));
      tc.params.assign(n_params, 0.0);
      for (auto& p : tc.params) p = init.uniform(-std::numbers::pi, std::numbers::pi);
      tc.attempts = attempt + 1;
      if (fit_ansatz(n_qubits, layers, tc.params, tc.term, tc.target, opt) > opt.tolerance) continue;
      tc.truth = exact_expectation(build_efficient_su2(n_qubits, layers, tc.params), tc.term);
      tc.residual = std::abs(tc.truth - tc.target);
      if (tc.residual <= 1e-5) {
        ok[k] = 1;
        break;
      }
    }
    cases[k] = std::move(tc);
  });

  TargetBatch batch;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    if (ok[k])
      batch.cases.push_back(std::move(cases[k]));
    else
      ++batch.skipped;
  }
  return batch;
}

double rmse(std::span<const double> estimates, std::span<const double> truths) {
  if (estimates.size() != truths.size()) throw std::invalid_argument("rmse: length mismatch");
  if (estimates.empty()) throw std::invalid_argument("rmse: empty input");
  double acc = 0;
  for (std::size_t i = 0; i < estimates.size(); ++i) acc += (estimates[i] - truths[i]) * (estimates[i] - truths[i]);
  return std::sqrt(acc / static_cast<double>(estimates.size()));
}

MitigatedValue run_method(Method method, const Circuit& target, SimulatedBackend& backend, const PipelineOptions& opt,
                          std::uint64_t seed, EstimationCache* cache) {
  switch (method) {
    case Method::Raw: return raw_estimate(target, backend, opt, seed);
    case Method::Rida: return rida_pipeline(target, backend, opt, seed, cache);
    case Method::TrexEzne: return ezne_trex_pipeline(target, backend, opt, seed, cache);
    case Method::CnotQzne:
    case Method::CnotQzneRot: {
      PipelineOptions o = opt;
      o.cnot_rotations = method == Method::CnotQzneRot;
      return cnot_qzne_pipeline(target, backend, o, seed, cache);
    }
  }
  throw std::invalid_argument("run_method: unknown method");
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult result;
  for (int n : cfg.qubits) {
    TargetOptions topt;
    topt.threads = cfg.threads;
    const TargetBatch batch =
        generate_targets(n, cfg.layers, cfg.n_strings, Rng::keyed(cfg.master_seed, "targets").key(), topt);
    result.skipped_targets += batch.skipped;
    std::vector<Circuit> circuits;
    std::vector<double> truths;
    for (const auto& tc : batch.cases) {
      circuits.push_back(target_circuit(tc, n, cfg.layers));
      truths.push_back(tc.truth);
    }
    if (circuits.empty()) throw std::runtime_error("run_experiment: every target failed to converge");

    for (std::size_t mi = 0; mi < cfg.multipliers.size(); ++mi) {
      SimulatedBackend backend(cfg.noise_for(cfg.multipliers[mi]));
      EstimationCache cache;
      const std::uint64_t seed =
          Rng::keyed(cfg.master_seed, "pipeline", static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(mi)).key();
      for (std::uint64_t shots : cfg.shots) {
        const PipelineOptions opt = cfg.pipeline_options(shots);
        for (Method method : cfg.methods) {
          const auto t0 = std::chrono::steady_clock::now();
          std::vector<MitigatedValue> values(circuits.size());
          parallel_for(circuits.size(), cfg.threads, [&](std::size_t k) {
            values[k] = run_method(method, circuits[k], backend, opt, seed, &cache);
          });
          const auto t1 = std::chrono::steady_clock::now();

          ResultRow row;
          row.qubits = n;
          row.multiplier = cfg.multipliers[mi];
          row.shots = shots;
          row.method = std::string(to_string(method));
          row.cases = static_cast<int>(values.size());
          std::vector<double> est;
          double p_sum = 0;
          int p_count = 0;
          for (std::size_t k = 0; k < values.size(); ++k) {
            est.push_back(values[k].value);
            if (values[k].fallback) ++row.fallbacks;
            if (std::isfinite(values[k].p_hat)) p_sum += values[k].p_hat, ++p_count;
            result.cases.push_back({n, row.multiplier, shots, row.method, k, truths[k], values[k]});
          }
          row.rmse = rmse(est, truths);
          row.mean_p_hat = p_count > 0 ? p_sum / p_count : std::numeric_limits<double>::quiet_NaN();
          row.wall_time_s = cfg.record_timing ? std::chrono::duration<double>(t1 - t0).count() : 0.0;
          result.rows.push_back(row);
        }
      }
    }
  }
  return result;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << "qubits,multiplier,shots,method,rmse,mean_p_hat,wall_time_s,fallbacks,cases\n";
  for (const auto& r : rows)
    out << r.qubits << ',' << format_double(r.multiplier) << ',' << r.shots << ',' << r.method << ','
        << format_double(r.rmse) << ',' << format_double(r.mean_p_hat) << ',' << format_double(r.wall_time_s) << ','
        << r.fallbacks << ',' << r.cases << '\n';
  return out.str();
}

double optimal_p(std::span<const double> raw, std::span<const double> truths) {
  if (raw.size() != truths.size() || raw.empty()) throw std::invalid_argument("optimal_p: bad input lengths");
  double rt = 0, rr = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) rt += raw[i] * truths[i], rr += raw[i] * raw[i];
  if (rr == 0 || rt == 0) throw SingularityError("optimal_p: raw values carry no signal");
  return 1.0 - rr / rt;
}

std::vector<ConvergenceRow> convergence_study(std::span<const double> pool, double p_opt,
                                              std::span<const std::size_t> subset_sizes, std::size_t resamples,
                                              std::uint64_t seed) {
  if (pool.empty()) throw std::invalid_argument("convergence_study: empty pool");
  if (resamples < 1) throw std::invalid_argument("convergence_study: need at least one resample");
  std::vector<ConvergenceRow> out;
  for (std::size_t size : subset_sizes) {
    if (size < 1 || size > pool.size()) throw std::invalid_argument("convergence_study: subset size out of range");
    Rng rng = Rng::keyed(seed, "convergence", size);
    double abs_sum = 0, sq_sum = 0;
    for (std::size_t r = 0; r < resamples; ++r) {
      double mean = 0;
      for (std::size_t i : rng.choose_sorted(pool.size(), size)) mean += pool[i];
      mean /= static_cast<double>(size);
      const double err = std::abs(mean - p_opt);
      abs_sum += err;
      sq_sum += err * err;
    }
    out.push_back({size, abs_sum / static_cast<double>(resamples), std::sqrt(sq_sum / static_cast<double>(resamples))});
  }
  return out;
}

}  // namespace depofold
