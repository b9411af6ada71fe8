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

// depofold command-line driver.

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "depofold/analytics.hpp"
#include "depofold/harness.hpp"
#include "depofold/json_io.hpp"
#include "depofold/mitigation.hpp"
#include "depofold/simulator.hpp"
#include "depofold/twirl.hpp"

namespace {

using namespace depofold;

struct CommonFlags {
  std::string config;
  std::string out;
  bool strict = false;
  std::optional<double> multiplier;
  std::optional<double> coherent_angle;
  bool no_rz_error = false;
  bool joint_2q_depol = false;
  std::optional<int> twirls;
  std::optional<std::string> twirl_readout;
  std::optional<std::uint64_t> est_circuits;
  std::optional<std::uint64_t> est_shots;
  std::vector<std::uint64_t> shots;
  std::optional<std::uint64_t> seed;
  std::string method = "rida";
  bool scale_noise_model = false;
  int threads = 1;
};

ExperimentConfig load_config(const CommonFlags& f) {
  ExperimentConfig cfg;
  if (!f.config.empty()) cfg = config_from_json(Json::parse(read_file(f.config)));
  if (f.multiplier) cfg.multipliers = {*f.multiplier};
  if (f.coherent_angle) {
    cfg.coherent = *f.coherent_angle != 0.0;
    cfg.coherent_angle_rad = *f.coherent_angle;
  }
  if (f.no_rz_error) cfg.base_noise.rz_error = false;
  if (f.joint_2q_depol) cfg.base_noise.joint_2q_depol = true;
  if (f.twirls) cfg.twirls = *f.twirls;
  if (f.twirl_readout) cfg.twirl_readout = *f.twirl_readout == "on";
  if (f.est_circuits) cfg.est_circuits = *f.est_circuits;
  if (f.est_shots) cfg.est_shots = *f.est_shots;
  if (!f.shots.empty()) cfg.shots = f.shots;
  if (f.seed) cfg.master_seed = *f.seed;
  if (f.scale_noise_model) cfg.scale_noise_model = true;
  if (f.threads > 1) cfg.threads = f.threads;
  return cfg;
}

void emit(const CommonFlags& f, const std::string& text) {
  if (f.out.empty())
    std::cout << text;
  else
    write_file(f.out, text);
}

Circuit load_circuit(const std::string& path) { return circuit_from_json(Json::parse(read_file(path))); }

int cmd_targets(const CommonFlags& f, int qubits, int layers, int count) {
  const ExperimentConfig cfg = load_config(f);
  TargetOptions opt;
  opt.threads = cfg.threads;
  const TargetBatch batch = generate_targets(qubits, layers, count, cfg.master_seed, opt);
  Json cases = Json::array();
  for (const auto& tc : batch.cases) cases.push_back(to_json(tc));
  Json j{{"n_qubits", qubits}, {"layers", layers}, {"skipped", batch.skipped}, {"cases", cases}};
  emit(f, j.dump(2) + "\n");
  if (batch.skipped > 0) std::cerr << "warning: " << batch.skipped << " target(s) failed to converge\n";
  return batch.skipped > 0 && f.strict ? 2 : 0;
}

int cmd_simulate(const CommonFlags& f, const std::string& circuit_path) {
  const ExperimentConfig cfg = load_config(f);
  const Circuit c = load_circuit(circuit_path);
  SimulatedBackend backend(cfg.noise_for(cfg.multipliers.front()));
  const auto probs = backend.probabilities(c);
  Json dist = Json::object();
  const int m = static_cast<int>(c.measured().size());
  for (std::size_t k = 0; k < probs.size(); ++k) {
    std::string key(static_cast<std::size_t>(m), '0');
    for (int b = 0; b < m; ++b)
      if (k >> b & 1) key[static_cast<std::size_t>(m - 1 - b)] = '1';
    dist[key] = probs[k];
  }
  Json j{{"measured", c.measured()}, {"probabilities", dist}, {"expectation", backend.expectation(c)}};
  if (!f.shots.empty()) {
    const auto counts = backend.sample(c, cfg.shots.front(), false, Rng::keyed(cfg.master_seed, "simulate"));
    std::vector<std::uint64_t> per_pattern(probs.size(), 0);
    for (std::size_t k = 0; k < counts.counts.size(); ++k) per_pattern[k & (probs.size() - 1)] += counts.counts[k];
    j["shots"] = cfg.shots.front();
    j["counts"] = per_pattern;
    j["sampled_expectation"] = counts.signed_mean();
  }
  emit(f, j.dump(2) + "\n");
  return 0;
}

int cmd_estimate_p(const CommonFlags& f, const std::string& circuit_path) {
  const ExperimentConfig cfg = load_config(f);
  const Circuit c = load_circuit(circuit_path);
  SimulatedBackend backend(cfg.noise_for(cfg.multipliers.front()));
  backend.threads = cfg.threads;
  const DepolarizationEstimate est =
      rida_estimate_p(c, backend, cfg.pipeline_options(cfg.shots.front()), cfg.master_seed);
  emit(f, to_json(est).dump(2) + "\n");
  if (est.negative()) std::cerr << "warning: negative depolarization estimate\n";
  return 0;
}

int cmd_mitigate(const CommonFlags& f, const std::string& circuit_path) {
  const ExperimentConfig cfg = load_config(f);
  const Circuit c = load_circuit(circuit_path);
  SimulatedBackend backend(cfg.noise_for(cfg.multipliers.front()));
  backend.threads = cfg.threads;
  const MitigatedValue v = run_method(method_from_string(f.method), c, backend,
                                      cfg.pipeline_options(cfg.shots.front()), cfg.master_seed, nullptr);
  emit(f, to_json(v).dump(2) + "\n");
  if (v.fallback) std::cerr << "warning: singular inversion, raw value reported\n";
  return v.fallback && f.strict ? 2 : 0;
}

int cmd_sweep(const CommonFlags& f, const std::string& cases_out) {
  const ExperimentConfig cfg = load_config(f);
  const ExperimentResult result = run_experiment(cfg);
  emit(f, rows_to_csv(result.rows));
  int fallbacks = 0;
  for (const auto& r : result.rows) fallbacks += r.fallbacks;
  if (!cases_out.empty()) {
    Json cases = Json::array();
    for (const auto& cv : result.cases) {
      Json j = to_json(cv.value);
      j["qubits"] = cv.qubits;
      j["multiplier"] = cv.multiplier;
      j["shots"] = cv.shots;
      j["case"] = cv.case_index;
      j["truth"] = cv.truth;
      cases.push_back(std::move(j));
    }
    write_file(cases_out, Json{{"config", to_json(cfg)}, {"skipped_targets", result.skipped_targets}, {"cases", cases}}
                              .dump(2) + "\n");
  }
  if (result.skipped_targets > 0) std::cerr << "warning: " << result.skipped_targets << " target(s) skipped\n";
  if (fallbacks > 0) std::cerr << "warning: " << fallbacks << " singular inversion(s) fell back to raw\n";
  return fallbacks > 0 && f.strict ? 2 : 0;
}

int cmd_predict(const CommonFlags& f, double gamma, int layers, double sigma2, double p, double s,
                std::vector<double> weights) {
  OverheadQuery q{gamma, layers, sigma2, weights.empty() ? std::vector<double>{1.0} : weights};
  const double u = geometric_u_layers(gamma, layers);
  Json shots{{"rida", overhead(OverheadMethod::Rida, q)},
             {"trex_ezne", overhead(OverheadMethod::Ezne, q)},
             {"cnot_qzne", overhead(OverheadMethod::CnotQzne, q)},
             {"cnot_qzne_exact", cnot_qzne_overhead_exact(q)}};
  Json variance{{"ezne_exact", ezne_variance_exact(u, s)}, {"ezne_leading", ezne_variance_leading(u, s)}};
  Json mse{{"raw", mse_avg(MseMethod::Raw, p, s)},
           {"raw_direct", mse_avg_raw_direct(p, s)},
           {"rida", mse_avg(MseMethod::Rida, p, s)}};
  Json threshold{{"stated", rida_threshold_shots(p)}, {"direct", rida_threshold_shots_direct(p)}};
  Json j{{"gamma", gamma}, {"layers", layers}, {"sigma2", sigma2}, {"p", p},         {"shots", s},
         {"u", u},         {"predicted_shots", shots}, {"predicted_variance", variance}, {"mse_avg", mse},
         {"rida_threshold_shots", threshold}, {"qzne_zero_error_ratio", qzne_zero_error_shot_ratio()}};
  emit(f, j.dump(2) + "\n");
  return 0;
}

int cmd_convergence(const CommonFlags& f, int qubits, int layers, int count, std::uint64_t pool_size,
                    std::size_t resamples) {
  ExperimentConfig cfg = load_config(f);
  TargetOptions topt;
  topt.threads = cfg.threads;
  const TargetBatch batch = generate_targets(qubits, layers, count, cfg.master_seed, topt);
  if (batch.cases.empty()) throw std::runtime_error("no targets converged");
  SimulatedBackend backend(cfg.noise_for(cfg.multipliers.front()));
  backend.threads = cfg.threads;

  std::vector<double> raw, truths;
  for (const auto& tc : batch.cases) {
    raw.push_back(backend.expectation(target_circuit(tc, qubits, layers)));
    truths.push_back(tc.truth);
  }
  const double p_opt = optimal_p(raw, truths);

  PipelineOptions opt = cfg.pipeline_options(cfg.shots.front());
  opt.n_est_circuits = pool_size;
  opt.est_shots_total = cfg.est_shots * pool_size / std::max<std::uint64_t>(cfg.est_circuits, 1);
  const auto est = rida_estimate_p(target_circuit(batch.cases.front(), qubits, layers), backend, opt, cfg.master_seed);
  std::vector<double> pool;
  for (const auto& r : est.per_circuit) pool.push_back(1.0 - r.mean);

  std::vector<std::size_t> sizes;
  for (std::size_t s = 1; s <= pool.size(); s *= 2) sizes.push_back(s);
  if (sizes.back() != pool.size()) sizes.push_back(pool.size());
  const auto rows = convergence_study(pool, p_opt, sizes, resamples, cfg.master_seed);

  std::string csv = "subset_size,mean_abs_error,rmse,relative_error,p_opt\n";
  for (const auto& r : rows)
    csv += std::to_string(r.subset_size) + "," + format_double(r.mean_abs_error) + "," + format_double(r.rmse) + "," +
           format_double(r.mean_abs_error / p_opt) + "," + format_double(p_opt) + "\n";
  emit(f, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Depolarization-aware error mitigation on a simulated device"};
  app.require_subcommand(1);
  app.fallthrough();
  CommonFlags f;

  app.add_option("--config", f.config, "experiment config JSON")->check(CLI::ExistingFile);
  app.add_option("--out", f.out, "output file (stdout when omitted)");
  app.add_flag("--strict", f.strict, "exit with status 2 on any fallback or skipped target");
  app.add_option("--noise-multiplier", f.multiplier, "scale factor on the baseline error rates");
  app.add_option("--coherent-angle", f.coherent_angle, "RX angle after each two-qubit gate (radians)");
  app.add_flag("--no-rz-error", f.no_rz_error, "skip gate error on RZ");
  app.add_flag("--joint-2q-depol", f.joint_2q_depol, "joint two-qubit depolarizer instead of two local ones");
  app.add_option("--twirls", f.twirls, "Pauli-twirled instances per circuit (coherent noise only)");
  app.add_option("--twirl-readout", f.twirl_readout, "readout twirling")->check(CLI::IsMember({"on", "off"}));
  app.add_option("--est-circuits", f.est_circuits, "estimation circuits per target class");
  app.add_option("--est-shots", f.est_shots, "total estimation shots");
  app.add_option("--shots", f.shots, "target shots (a list for sweep)");
  app.add_option("--seed", f.seed, "master seed");
  app.add_option("--method", f.method, "mitigation method")
      ->check(CLI::IsMember({"rida", "trex-ezne", "cnot-qzne", "cnot-qzne-rot", "raw"}));
  app.add_flag("--scale-noise-model", f.scale_noise_model, "amplify noise by scaling the model instead of folding");
  app.add_option("--threads", f.threads, "worker threads")->check(CLI::PositiveNumber);

  int qubits = 4, layers = 12, count = 100;
  auto* targets = app.add_subcommand("targets", "generate target circuits with known expectations");
  targets->add_option("--qubits", qubits)->check(CLI::Range(1, kDefaultQubitCap));
  targets->add_option("--layers", layers)->check(CLI::NonNegativeNumber);
  targets->add_option("--count", count)->check(CLI::PositiveNumber);

  std::string circuit_path;
  auto* simulate = app.add_subcommand("simulate", "print the measured-pattern distribution");
  simulate->add_option("circuit", circuit_path, "circuit JSON")->required()->check(CLI::ExistingFile);
  auto* estimate = app.add_subcommand("estimate-p", "estimate the depolarization probability");
  estimate->add_option("circuit", circuit_path, "circuit JSON")->required()->check(CLI::ExistingFile);
  auto* mitigate = app.add_subcommand("mitigate", "mitigated expectation of one circuit");
  mitigate->add_option("circuit", circuit_path, "circuit JSON")->required()->check(CLI::ExistingFile);

  std::string cases_out;
  auto* sweep = app.add_subcommand("sweep", "RMSE sweep over the config grid (CSV)");
  sweep->add_option("--cases", cases_out, "also write per-case values as JSON");

  double gamma = 1.0, sigma2 = 1e-4, p = 0.0, s = 1e4;
  int predict_layers = 1;
  std::vector<double> weights;
  auto* predict = app.add_subcommand("predict", "closed-form shot overheads and variances");
  predict->add_option("--gamma", gamma)->check(CLI::Range(1.0, 1e6));
  predict->add_option("--layers", predict_layers)->check(CLI::NonNegativeNumber);
  predict->add_option("--sigma2", sigma2)->check(CLI::PositiveNumber);
  predict->add_option("--p", p)->check(CLI::Range(0.0, 0.999999));
  predict->add_option("-s,--predict-shots", s)->check(CLI::Range(1.0, 1e18));
  predict->add_option("--weights", weights);

  std::uint64_t pool_size = 50;
  std::size_t resamples = 5000;
  auto* convergence = app.add_subcommand("convergence", "p error against the number of estimation circuits");
  convergence->add_option("--qubits", qubits)->check(CLI::Range(1, kDefaultQubitCap));
  convergence->add_option("--layers", layers)->check(CLI::NonNegativeNumber);
  convergence->add_option("--count", count)->check(CLI::PositiveNumber);
  convergence->add_option("--pool", pool_size)->check(CLI::PositiveNumber);
  convergence->add_option("--resamples", resamples)->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*targets) return cmd_targets(f, qubits, layers, count);
    if (*simulate) return cmd_simulate(f, circuit_path);
    if (*estimate) return cmd_estimate_p(f, circuit_path);
    if (*mitigate) return cmd_mitigate(f, circuit_path);
    if (*sweep) return cmd_sweep(f, cases_out);
    if (*predict) return cmd_predict(f, gamma, predict_layers, sigma2, p, s, weights);
    if (*convergence) return cmd_convergence(f, qubits, layers, count, pool_size, resamples);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
