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

#include "depofold/analytics.hpp"

#include <cmath>
#include <stdexcept>

namespace depofold {

namespace {

void check_p(double p) {
  if (!(p >= 0 && p < 1)) throw std::invalid_argument("depolarization probability must lie in [0, 1)");
}

void check_shots(double s) {
  if (!(s >= 1)) throw std::invalid_argument("shot count must be at least 1");
}

}  // namespace

double OverheadQuery::weight_norm2() const {
  double n = 0;
  for (double w : weights) n += w * w;
  return n;
}

double OverheadQuery::gamma_l() const { return std::pow(gamma, layers); }

void OverheadQuery::validate() const {
  if (!(gamma >= 1)) throw std::invalid_argument("OverheadQuery: gamma must be >= 1");
  if (layers < 0) throw std::invalid_argument("OverheadQuery: negative layer count");
  if (!(sigma2 > 0)) throw std::invalid_argument("OverheadQuery: sigma2 must be positive");
  if (weights.empty()) throw std::invalid_argument("OverheadQuery: no weights");
}

double shot_variance(double o_eps, double shots, int points) {
  check_shots(shots);
  if (std::abs(o_eps) > 1) throw std::invalid_argument("shot_variance: |o_eps| > 1");
  if (points != 1 && points != 3) throw std::invalid_argument("shot_variance: points must be 1 or 3");
  return points * (1.0 - o_eps * o_eps) / shots;
}

double mse_avg(MseMethod method, double p, double s) {
  check_p(p);
  check_shots(s);
  const double common = 2 + 2 * p - p * p;
  if (method == MseMethod::Rida) return common / (3 * s * (1 - p) * (1 - p));
  return (common + s * (2 - p) * (2 - p)) / (3 * s);
}

double mse_avg_raw_direct(double p, double s) {
  check_p(p);
  check_shots(s);
  return p * p / 3 - (1 - p) * (1 - p) / (3 * s) + 1 / s;
}

double rida_threshold_shots(double p) {
  check_p(p);
  return p * (2 + 2 * p - p * p) / ((2 - p) * (1 - p) * (1 - p));
}

double rida_threshold_shots_direct(double p) {
  check_p(p);
  if (p == 0) return 0;
  return (2 + 2 * p - p * p) * (2 - p) / (p * (1 - p) * (1 - p));
}

double overhead(OverheadMethod method, const OverheadQuery& q) {
  q.validate();
  const double g = q.gamma_l();
  const double base = q.weight_norm2() / q.sigma2;
  switch (method) {
    case OverheadMethod::Rida: return base * g * g;
    case OverheadMethod::Ezne: return 1.5 * base * std::pow(g, 6);
    case OverheadMethod::CnotQzne: return 27.0 / 64.0 * base * std::pow(g, 10);
  }
  return 0;
}

double cnot_qzne_overhead_exact(const OverheadQuery& q) {
  q.validate();
  const double g = q.gamma_l();
  const double base = 3 * q.weight_norm2() / q.sigma2;
  return base * (9.0 / 64.0 * std::pow(g, 10) + 100.0 / 64.0 * std::pow(g, 6) + 225.0 / 64.0 * g * g);
}

double qzne_zero_error_shot_ratio() { return 3.0 * (9.0 + 100.0 + 225.0) / 64.0; }

std::array<double, 3> ezne_gradient(double u) {
  if (!(u > 0)) throw std::invalid_argument("ezne_gradient: u must be positive");
  const double r = std::sqrt(u);
  const double d = u + r;
  const double k = (0.5 / r + 1) / (d * d);
  // With u = (x3 - x5) / (x1 - x3): du/dx1 = -u / D, du/dx3 = (1 + u) / D, du/dx5 = -1 / D.
  return {1 + 1 / d + u * k, -1 / d - (1 + u) * k, k};
}

double ezne_variance_exact(double u, double shots) {
  check_shots(shots);
  const auto g = ezne_gradient(u);
  return 3.0 / shots * (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
}

double ezne_variance_leading(double u, double shots) {
  check_shots(shots);
  if (!(u > 0)) throw std::invalid_argument("ezne_variance_leading: u must be positive");
  return 3.0 / (2.0 * shots * u * u * u);
}

SelectionVariance selection_variance(const SelectionStats& st) {
  SelectionVariance v;
  v.fixed = 4 * (st.g1 * st.var_a + st.g2 * st.var_b);
  const double g = st.g1 + st.g2;
  const double diff = st.mean_a - st.mean_b;
  v.random = v.fixed + (g > 0 ? 4 * diff * diff * st.g1 * st.g2 / g : 0.0);
  return v;
}

double geometric_u(double p) {
  if (!(p >= 0 && p <= 1)) throw std::invalid_argument("geometric_u: p outside [0, 1]");
  return (1 - p) * (1 - p);
}

double geometric_u_layers(double gamma, int layers) {
  if (!(gamma >= 1)) throw std::invalid_argument("geometric_u_layers: gamma must be >= 1");
  return std::pow(gamma, -2.0 * layers);
}

SelectionStats uniform_selection_stats(int g1, int g2, double a_max, double b_max) {
  return {static_cast<double>(g1), static_cast<double>(g2), a_max / 2, a_max * a_max / 12, b_max / 2,
          b_max * b_max / 12};
}

SelectionSample sample_selection(int g1, int g2, double a_max, double b_max, std::size_t trials, Rng rng) {
  if (g1 < 0 || g2 < 0 || g1 + g2 == 0) throw std::invalid_argument("sample_selection: bad gate counts");
  SelectionSample out;
  out.fixed.reserve(trials);
  out.random.reserve(trials);
  const int g = g1 + g2;
  const double p_two = static_cast<double>(g2) / g;
  Rng fixed_rng = rng.split("fixed");
  Rng random_rng = rng.split("random");
  for (std::size_t t = 0; t < trials; ++t) {
    double sum = 0;
    for (int i = 0; i < g1; ++i) sum += fixed_rng.uniform(0, a_max);
    for (int i = 0; i < g2; ++i) sum += fixed_rng.uniform(0, b_max);
    out.fixed.push_back(2 * sum);
    sum = 0;
    for (int i = 0; i < g; ++i) sum += random_rng.bernoulli(p_two) ? random_rng.uniform(0, b_max) : random_rng.uniform(0, a_max);
    out.random.push_back(2 * sum);
  }
  return out;
}

SampleMoments sample_moments(const std::vector<double>& xs) {
  if (xs.size() < 2) throw std::invalid_argument("sample_moments: need at least two samples");
  const double n = static_cast<double>(xs.size());
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= n;
  double m2 = 0, m4 = 0;
  for (double x : xs) {
    const double d = (x - mean) * (x - mean);
    m2 += d;
    m4 += d * d;
  }
  SampleMoments m;
  m.mean = mean;
  m.variance = m2 / (n - 1);
  const double pop2 = m2 / n;
  m.variance_se = std::sqrt(std::max(0.0, (m4 / n - pop2 * pop2) / n));
  return m;
}

}  // namespace depofold
