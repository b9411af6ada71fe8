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

#include "depofold/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "depofold/parallel.hpp"

namespace depofold {

namespace {

double gate_duration(const Gate& g, const NoiseModel& m) {
  if (g.injected) return 0.0;
  return g.arity() == 2 ? m.dur_2q_us : m.dur_1q_us;
}

int bit_count(std::uint64_t v) { return std::popcount(v); }

std::vector<double> cumulative(std::span<const double> probs) {
  std::vector<double> cdf(probs.size());
  double acc = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) cdf[i] = (acc += probs[i]);
  // Renormalise so that the last bucket absorbs rounding.
  for (auto& v : cdf) v /= acc;
  cdf.back() = 1.0;
  return cdf;
}

int measured_bits_of(std::size_t n_patterns) {
  if (n_patterns == 0 || !std::has_single_bit(n_patterns))
    throw std::invalid_argument("probability table size must be a power of two");
  return std::countr_zero(n_patterns);
}

template <typename Emit>
void draw_block(const std::vector<double>& cdf, int m, std::uint64_t count, double p_readout, bool twirl_readout,
                Rng rng, Emit&& emit) {
  const std::uint32_t mask_bits = (std::uint32_t(1) << m) - 1;
  for (std::uint64_t s = 0; s < count; ++s) {
    const double u = rng.uniform();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    const auto pattern = static_cast<std::uint32_t>(it - cdf.begin());
    const std::uint32_t mask = twirl_readout ? static_cast<std::uint32_t>(rng.next_u64()) & mask_bits : 0u;
    std::uint32_t bits = pattern ^ mask;
    if (p_readout > 0)
      for (int j = 0; j < m; ++j)
        if (rng.uniform() < p_readout) bits ^= std::uint32_t(1) << j;
    emit(bits, mask);
  }
}

}  // namespace

std::vector<ScheduledLayer> schedule(std::span<const Gate> gates, int n_qubits, const NoiseModel& m) {
  std::vector<ScheduledLayer> layers;
  std::vector<std::size_t> next_free(static_cast<std::size_t>(n_qubits), 0);
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const Gate& g = gates[i];
    std::size_t layer = 0;
    if (g.injected) {
      const std::size_t nf = next_free[static_cast<std::size_t>(g.q0())];
      layer = nf > 0 ? nf - 1 : 0;
    } else {
      for (int k = 0; k < g.arity(); ++k) layer = std::max(layer, next_free[static_cast<std::size_t>(g.qubits[k])]);
      for (int k = 0; k < g.arity(); ++k) next_free[static_cast<std::size_t>(g.qubits[k])] = layer + 1;
    }
    if (layers.size() <= layer) layers.resize(layer + 1);
    layers[layer].gates.push_back(i);
    layers[layer].duration_us = std::max(layers[layer].duration_us, gate_duration(g, m));
  }
  return layers;
}

DensityMatrixd run_density(const Circuit& c, const NoiseModel& m, int qubit_cap) {
  const int n = c.n_qubits();
  if (n > qubit_cap)
    throw ResourceLimitError("run_density: " + std::to_string(n) + " qubits exceeds the cap of " +
                             std::to_string(qubit_cap));
  m.validate();

  const std::vector<Gate> gates = c.executed_gates();
  const auto layers = schedule(gates, n, m);

  const Channel err_1q = depolarizing_1q(m.p_1q);
  const Channel err_2q = m.joint_2q_depol ? joint_depolarizing_2q(m.p_2q) : two_qubit_error(m.p_2q);
  std::map<double, Channel> thermal;

  DensityMatrixd rho(n);
  std::vector<char> busy(static_cast<std::size_t>(n));
  for (const ScheduledLayer& layer : layers) {
    std::fill(busy.begin(), busy.end(), 0);
    for (std::size_t idx : layer.gates) {
      const Gate& g = gates[idx];
      if (g.arity() == 1) {
        rho.apply_unitary(gate_matrix(g), g.q0());
        if (g.injected) continue;
        busy[static_cast<std::size_t>(g.q0())] = 1;
        if (m.p_1q > 0 && (g.kind != GateKind::RZ || m.rz_error)) {
          const int q[1] = {g.q0()};
          rho.apply_channel(err_1q, q);
        }
      } else {
        rho.apply_diagonal(gate_diagonal(g), g.q0(), g.q1());
        if (g.injected) continue;
        busy[static_cast<std::size_t>(g.q0())] = 1;
        busy[static_cast<std::size_t>(g.q1())] = 1;
        if (m.p_2q > 0) {
          const int q[2] = {g.q0(), g.q1()};
          rho.apply_channel(err_2q, q);
        }
      }
    }
    if (!m.thermal_enabled() || layer.duration_us <= 0) continue;
    auto it = thermal.find(layer.duration_us);
    if (it == thermal.end())
      it = thermal.emplace(layer.duration_us, thermal_channel(m.t1_us, m.t2_us, layer.duration_us)).first;
    for (int q = 0; q < n; ++q) {
      if (busy[static_cast<std::size_t>(q)]) continue;
      const int qs[1] = {q};
      rho.apply_channel(it->second, qs);
    }
  }
  return rho;
}

std::vector<double> probabilities(const DensityMatrixd& rho, std::span<const int> measured) {
  auto p = rho.marginal_probabilities(measured);
  double total = 0;
  for (double v : p) total += v;
  for (double& v : p) v /= total;
  return p;
}

double exact_expectation(const Circuit& c, PauliTerm term) {
  if (term.qubit < 0 || term.qubit >= c.n_qubits()) throw std::invalid_argument("exact_expectation: qubit out of range");
  StateVectord psi(c.n_qubits());
  for (const Gate& g : c.gates()) {
    if (g.arity() == 1)
      psi.apply_unitary(gate_matrix(g), g.q0());
    else
      psi.apply_diagonal(gate_diagonal(g), g.q0(), g.q1());
  }
  switch (term.op) {
    case Pauli::I: return 1.0;
    case Pauli::X: return psi.expectation(pauli_x<double>(), term.qubit);
    case Pauli::Y: return psi.expectation(pauli_y<double>(), term.qubit);
    case Pauli::Z: return psi.expectation_z(term.qubit);
  }
  return 0.0;
}

double exact_measured_expectation(const Circuit& c) {
  StateVectord psi(c.n_qubits());
  for (const Gate& g : c.executed_gates()) {
    if (g.arity() == 1)
      psi.apply_unitary(gate_matrix(g), g.q0());
    else
      psi.apply_diagonal(gate_diagonal(g), g.q0(), g.q1());
  }
  std::uint64_t mask = 0;
  for (int q : c.measured()) mask |= std::uint64_t(1) << q;
  double e = 0;
  const auto& amp = psi.amplitudes();
  for (Eigen::Index i = 0; i < amp.size(); ++i)
    e += (bit_count(static_cast<std::uint64_t>(i) & mask) & 1 ? -1.0 : 1.0) * std::norm(amp(i));
  return e;
}

double expectation_from_probabilities(std::span<const double> probs, double p_readout) {
  const int m = measured_bits_of(probs.size());
  double e = 0;
  for (std::size_t k = 0; k < probs.size(); ++k) e += (bit_count(k) & 1 ? -1.0 : 1.0) * probs[k];
  return e * std::pow(1.0 - 2.0 * p_readout, m);
}

std::uint64_t ShotCounts::total() const {
  std::uint64_t t = 0;
  for (auto v : counts) t += v;
  return t;
}

double ShotCounts::signed_mean() const {
  std::int64_t acc = 0;
  std::uint64_t t = 0;
  const std::uint64_t low = (std::uint64_t(1) << n_measured) - 1;
  for (std::size_t idx = 0; idx < counts.size(); ++idx) {
    const std::uint64_t bits = idx & low, mask = idx >> n_measured;
    const auto n = static_cast<std::int64_t>(counts[idx]);
    acc += (bit_count(bits ^ mask) & 1) ? -n : n;
    t += counts[idx];
  }
  if (t == 0) throw std::invalid_argument("signed_mean: no shots");
  return static_cast<double>(acc) / static_cast<double>(t);
}

ShotCounts& ShotCounts::operator+=(const ShotCounts& other) {
  if (other.n_measured != n_measured) throw std::invalid_argument("ShotCounts: measured width mismatch");
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
  return *this;
}

ShotCounts tally(std::span<const ShotRecord> records, int n_measured) {
  ShotCounts out(n_measured);
  for (const ShotRecord& r : records) ++out.counts[(std::size_t(r.twirl_mask) << n_measured) | r.bits];
  return out;
}

ShotCounts sample_counts(std::span<const double> probs, std::uint64_t shots, double p_readout, bool twirl_readout,
                         const Rng& rng, int threads) {
  const int m = measured_bits_of(probs.size());
  if (!(p_readout >= 0 && p_readout <= 1)) throw std::invalid_argument("sample_counts: readout probability");
  const auto cdf = cumulative(probs);
  const std::uint64_t n_blocks = (shots + kShotBlock - 1) / kShotBlock;
  std::vector<ShotCounts> partial(n_blocks, ShotCounts(m));
  parallel_for(n_blocks, threads, [&](std::size_t b) {
    const std::uint64_t count = std::min<std::uint64_t>(kShotBlock, shots - b * kShotBlock);
    auto& out = partial[b].counts;
    draw_block(cdf, m, count, p_readout, twirl_readout, rng.split(b),
               [&](std::uint32_t bits, std::uint32_t mask) { ++out[(std::size_t(mask) << m) | bits]; });
  });
  ShotCounts total(m);
  for (const auto& p : partial) total += p;
  return total;
}

std::vector<ShotRecord> sample_records(std::span<const double> probs, std::uint64_t shots, double p_readout,
                                       bool twirl_readout, const Rng& rng) {
  const int m = measured_bits_of(probs.size());
  const auto cdf = cumulative(probs);
  std::vector<ShotRecord> out;
  out.reserve(shots);
  for (std::uint64_t b = 0; b * kShotBlock < shots; ++b) {
    const std::uint64_t count = std::min<std::uint64_t>(kShotBlock, shots - b * kShotBlock);
    draw_block(cdf, m, count, p_readout, twirl_readout, rng.split(b),
               [&](std::uint32_t bits, std::uint32_t mask) { out.push_back({bits, mask}); });
  }
  return out;
}

SimulatedBackend::SimulatedBackend(NoiseModel m, int qubit_cap) : noise_(m), qubit_cap_(qubit_cap) {
  noise_.validate();
}

NoiseModel SimulatedBackend::noise_at(double noise_factor) const {
  return noise_factor == 1.0 ? noise_ : scale(noise_, noise_factor);
}

Circuit SimulatedBackend::prepare(const Circuit& c) const { return inject_coherent(c, noise_.coherent_angle_rad); }

std::vector<double> SimulatedBackend::probabilities(const Circuit& c, double noise_factor) {
  return prepared_probabilities(prepare(c), noise_factor);
}

std::vector<double> SimulatedBackend::prepared_probabilities(const Circuit& prepared, double noise_factor) {
  const auto key = std::make_pair(prepared.content_hash(), noise_factor);
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  auto p = depofold::probabilities(run_density(prepared, noise_at(noise_factor), qubit_cap_), prepared.measured());
  std::lock_guard lock(mutex_);
  return cache_.emplace(key, std::move(p)).first->second;
}

ShotCounts SimulatedBackend::sample(const Circuit& c, std::uint64_t shots, bool twirl_readout, const Rng& rng,
                                    double noise_factor) {
  const auto p = probabilities(c, noise_factor);
  return sample_counts(p, shots, noise_at(noise_factor).p_readout, twirl_readout, rng, threads);
}

double SimulatedBackend::expectation(const Circuit& c, double noise_factor) {
  return expectation_from_probabilities(probabilities(c, noise_factor), noise_at(noise_factor).p_readout);
}

}  // namespace depofold
