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

#include "depofold/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace depofold {

namespace {

void write_gates(std::ostringstream& out, const std::vector<Gate>& gates) {
  out << '[';
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const Gate& g = gates[i];
    if (i) out << ", ";
    out << "{\"kind\": \"" << to_string(g.kind) << "\", \"qubits\": [" << g.q0();
    if (g.arity() == 2) out << ", " << g.q1();
    out << ']';
    if (has_angle(g.kind)) out << ", \"angle\": " << format_double(g.angle);
    if (g.injected) out << ", \"injected\": true";
    out << '}';
  }
  out << ']';
}

std::vector<Gate> read_gates(const Json& arr) {
  if (!arr.is_array()) throw std::invalid_argument("circuit JSON: gates must be an array");
  std::vector<Gate> gates;
  for (const auto& jg : arr) {
    Gate g;
    g.kind = gate_kind_from_string(jg.at("kind").get<std::string>());
    const auto qs = jg.at("qubits").get<std::vector<int>>();
    if (static_cast<int>(qs.size()) != arity(g.kind))
      throw std::invalid_argument("circuit JSON: wrong qubit count for " + std::string(to_string(g.kind)));
    g.qubits[0] = qs[0];
    if (qs.size() == 2) g.qubits[1] = qs[1];
    if (has_angle(g.kind)) {
      if (!jg.contains("angle")) throw std::invalid_argument("circuit JSON: missing angle");
      g.angle = jg.at("angle").get<double>();
    } else if (jg.contains("angle")) {
      throw std::invalid_argument("circuit JSON: angle on a fixed gate");
    }
    g.injected = jg.value("injected", false);
    gates.push_back(g);
  }
  return gates;
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double number_or_inf(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

template <typename T>
std::vector<T> scalar_or_list(const Json& j) {
  if (j.is_array()) return j.get<std::vector<T>>();
  return {j.get<T>()};
}

void reject_unknown(const Json& j, const std::set<std::string>& known, std::string_view what) {
  if (!j.is_object()) throw std::invalid_argument(std::string(what) + ": expected an object");
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw std::invalid_argument(std::string(what) + ": unknown key '" + key + "'");
}

}  // namespace

std::string circuit_to_json(const Circuit& c) {
  std::ostringstream out;
  out << "{\"n_qubits\": " << c.n_qubits() << ", \"measured\": [";
  for (std::size_t i = 0; i < c.measured().size(); ++i) out << (i ? ", " : "") << c.measured()[i];
  out << "], \"gates\": ";
  write_gates(out, c.gates());
  if (!c.basis_change().empty()) {
    out << ", \"basis_change\": ";
    write_gates(out, c.basis_change());
  }
  out << '}';
  return out.str();
}

Circuit circuit_from_json(const Json& j) {
  reject_unknown(j, {"n_qubits", "measured", "gates", "basis_change"}, "circuit JSON");
  std::vector<Gate> basis;
  if (j.contains("basis_change")) basis = read_gates(j.at("basis_change"));
  return Circuit(j.at("n_qubits").get<int>(), read_gates(j.at("gates")), j.at("measured").get<std::vector<int>>(),
                 std::move(basis));
}

Circuit circuit_from_json(std::string_view text) { return circuit_from_json(Json::parse(text)); }

Json noise_to_json(const NoiseModel& m) {
  return Json{{"p_2q", m.p_2q},
              {"p_1q", m.p_1q},
              {"p_readout", m.p_readout},
              {"t1_us", finite_or_null(m.t1_us)},
              {"t2_us", finite_or_null(m.t2_us)},
              {"dur_2q_us", m.dur_2q_us},
              {"dur_1q_us", m.dur_1q_us},
              {"multiplier", m.multiplier},
              {"coherent_angle_rad", m.coherent_angle_rad},
              {"clamped", m.clamped},
              {"rz_error", m.rz_error},
              {"joint_2q_depol", m.joint_2q_depol}};
}

NoiseModel noise_from_json(const Json& j, const NoiseModel& base) {
  reject_unknown(j,
                 {"p_2q", "p_1q", "p_readout", "t1_us", "t2_us", "dur_2q_us", "dur_1q_us", "multiplier",
                  "coherent_angle_rad", "clamped", "rz_error", "joint_2q_depol"},
                 "noise JSON");
  NoiseModel m = base;
  auto num = [&](const char* key, double& field) {
    if (j.contains(key)) field = j.at(key).get<double>();
  };
  auto flag = [&](const char* key, bool& field) {
    if (j.contains(key)) field = j.at(key).get<bool>();
  };
  num("p_2q", m.p_2q);
  num("p_1q", m.p_1q);
  num("p_readout", m.p_readout);
  if (j.contains("t1_us")) m.t1_us = number_or_inf(j.at("t1_us"));
  if (j.contains("t2_us")) m.t2_us = number_or_inf(j.at("t2_us"));
  num("dur_2q_us", m.dur_2q_us);
  num("dur_1q_us", m.dur_1q_us);
  num("multiplier", m.multiplier);
  num("coherent_angle_rad", m.coherent_angle_rad);
  flag("clamped", m.clamped);
  flag("rz_error", m.rz_error);
  flag("joint_2q_depol", m.joint_2q_depol);
  m.validate();
  return m;
}

Json to_json(const MitigatedValue& v) {
  Json j{{"method", v.method}, {"value", v.value}, {"raw", v.raw}, {"shots_used", v.shots_used}};
  j["predicted_variance"] = v.predicted_variance ? Json(*v.predicted_variance) : Json(nullptr);
  j["p_hat"] = finite_or_null(v.p_hat);
  j["fallback"] = v.fallback;
  return j;
}

Json to_json(const DepolarizationEstimate& e) {
  Json per = Json::array();
  for (const auto& r : e.per_circuit) per.push_back({{"mean", r.mean}, {"shots", r.shots}});
  return Json{{"p_hat", e.p_hat}, {"negative", e.negative()}, {"total_shots", e.total_shots}, {"per_circuit", per}};
}

Json to_json(const TargetCase& tc) {
  return Json{{"pauli", std::string(1, to_char(tc.term.op))},
              {"qubit", tc.term.qubit},
              {"target", tc.target},
              {"truth", tc.truth},
              {"residual", tc.residual},
              {"attempts", tc.attempts},
              {"params", tc.params}};
}

TargetCase target_case_from_json(const Json& j) {
  TargetCase tc;
  const auto p = j.at("pauli").get<std::string>();
  if (p.size() != 1) throw std::invalid_argument("target JSON: pauli must be one character");
  tc.term = {pauli_from_char(p[0]), j.at("qubit").get<int>()};
  tc.target = j.value("target", 0.0);
  tc.truth = j.at("truth").get<double>();
  tc.residual = j.value("residual", 0.0);
  tc.attempts = j.value("attempts", 1);
  tc.params = j.at("params").get<std::vector<double>>();
  return tc;
}

Json to_json(const ExperimentConfig& cfg) {
  Json methods = Json::array();
  for (Method m : cfg.methods) methods.push_back(std::string(to_string(m)));
  return Json{{"qubits", cfg.qubits},
              {"layers", cfg.layers},
              {"multipliers", cfg.multipliers},
              {"shots", cfg.shots},
              {"n_strings", cfg.n_strings},
              {"methods", methods},
              {"coherent", cfg.coherent},
              {"coherent_angle_rad", cfg.coherent_angle_rad},
              {"twirls", cfg.twirls},
              {"est_circuits", cfg.est_circuits},
              {"est_shots", cfg.est_shots},
              {"twirl_readout", cfg.twirl_readout},
              {"scale_noise_model", cfg.scale_noise_model},
              {"noise", noise_to_json(cfg.base_noise)},
              {"master_seed", cfg.master_seed},
              {"record_timing", cfg.record_timing},
              {"threads", cfg.threads}};
}

ExperimentConfig config_from_json(const Json& j, ExperimentConfig cfg) {
  reject_unknown(j,
                 {"qubits", "layers", "multipliers", "shots", "n_strings", "methods", "coherent",
                  "coherent_angle_rad", "twirls", "est_circuits", "est_shots", "twirl_readout", "scale_noise_model",
                  "noise", "master_seed", "record_timing", "threads"},
                 "config JSON");
  if (j.contains("qubits")) cfg.qubits = scalar_or_list<int>(j.at("qubits"));
  if (j.contains("layers")) cfg.layers = j.at("layers").get<int>();
  if (j.contains("multipliers")) cfg.multipliers = scalar_or_list<double>(j.at("multipliers"));
  if (j.contains("shots")) cfg.shots = scalar_or_list<std::uint64_t>(j.at("shots"));
  if (j.contains("n_strings")) cfg.n_strings = j.at("n_strings").get<int>();
  if (j.contains("methods")) {
    cfg.methods.clear();
    for (const auto& name : scalar_or_list<std::string>(j.at("methods"))) cfg.methods.push_back(method_from_string(name));
  }
  if (j.contains("coherent")) cfg.coherent = j.at("coherent").get<bool>();
  if (j.contains("coherent_angle_rad")) cfg.coherent_angle_rad = j.at("coherent_angle_rad").get<double>();
  if (j.contains("twirls")) cfg.twirls = j.at("twirls").get<int>();
  if (j.contains("est_circuits")) cfg.est_circuits = j.at("est_circuits").get<std::uint64_t>();
  if (j.contains("est_shots")) cfg.est_shots = j.at("est_shots").get<std::uint64_t>();
  if (j.contains("twirl_readout")) cfg.twirl_readout = j.at("twirl_readout").get<bool>();
  if (j.contains("scale_noise_model")) cfg.scale_noise_model = j.at("scale_noise_model").get<bool>();
  if (j.contains("noise")) cfg.base_noise = noise_from_json(j.at("noise"), cfg.base_noise);
  if (j.contains("master_seed")) cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  if (j.contains("record_timing")) cfg.record_timing = j.at("record_timing").get<bool>();
  if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
  return cfg;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace depofold
