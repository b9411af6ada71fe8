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

#include <gtest/gtest.h>

#include <cmath>

#include "depofold/analytics.hpp"
#include "depofold/mitigation.hpp"
#include "depofold/simulator.hpp"

namespace depofold {
namespace {

TEST(ShotVariance, Examples) {
  EXPECT_EQ(shot_variance(0, 250, 1), 1.0 / 250);
  EXPECT_EQ(shot_variance(1, 250, 1), 0.0);
  EXPECT_NEAR(shot_variance(0.6, 1000, 1), 6.4e-4, 1e-18);
  EXPECT_NEAR(shot_variance(0.6, 1000, 3), 3 * 6.4e-4, 1e-18);
  EXPECT_THROW(shot_variance(0.5, 0.5, 1), std::invalid_argument);
  EXPECT_THROW(shot_variance(1.5, 10, 1), std::invalid_argument);
  EXPECT_THROW(shot_variance(0.5, 10, 2), std::invalid_argument);
}

TEST(ShotVariance, MatchesRepeatedSampling) {
  // Empirical variance of the sampled parity over 200 repetitions, within 10%
  // once the 200-sample fluctuation of a variance (about 10% at 1 sigma) is
  // averaged over several expectation values.
  const std::uint64_t s = 4000;
  double ratio_sum = 0;
  int n = 0;
  for (double o : {-0.6, -0.2, 0.0, 0.3, 0.7, 0.9}) {
    const std::vector<double> probs = {(1 + o) / 2, (1 - o) / 2};
    std::vector<double> xs;
    for (std::uint64_t r = 0; r < 200; ++r)
      xs.push_back(sample_counts(probs, s, 0.0, true, Rng::keyed(21, "shot-variance", r)).signed_mean());
    ratio_sum += sample_moments(xs).variance / shot_variance(o, static_cast<double>(s), 1);
    ++n;
  }
  EXPECT_NEAR(ratio_sum / n, 1.0, 0.1);
}

TEST(MseAvg, Examples) {
  const double s = 100;
  EXPECT_NEAR(mse_avg(MseMethod::Rida, 0, s), 2 / (3 * s), 1e-15);
  EXPECT_NEAR(mse_avg(MseMethod::Raw, 0, s), (2 + 4 * s) / (3 * s), 1e-15);
  EXPECT_NEAR(mse_avg(MseMethod::Rida, 0.5, 100), 0.036667, 1e-6);
  EXPECT_NEAR(mse_avg(MseMethod::Raw, 0.3, 1e12), 1.7 * 1.7 / 3, 1e-9);
  EXPECT_THROW(mse_avg(MseMethod::Rida, 1.0, s), std::invalid_argument);
  // The direct raw error has no bias at p = 0 and agrees with RIDA there.
  EXPECT_NEAR(mse_avg_raw_direct(0, s), mse_avg(MseMethod::Rida, 0, s), 1e-15);
}

// E over O ~ U[-1, 1] of the mean squared error, by Monte Carlo with exact
// binomial draws of s shots.
std::pair<double, double> mc_mse(double p, std::uint64_t s, int trials, Rng rng) {
  double raw = 0, rida = 0;
  for (int t = 0; t < trials; ++t) {
    const double o = rng.uniform(-1, 1);
    const double oe = (1 - p) * o;
    const std::vector<double> probs = {(1 + oe) / 2, (1 - oe) / 2};
    const double x = sample_counts(probs, s, 0.0, false, rng.split(static_cast<std::uint64_t>(t))).signed_mean();
    raw += (x - o) * (x - o);
    rida += (x / (1 - p) - o) * (x / (1 - p) - o);
  }
  return {raw / trials, rida / trials};
}

TEST(MseAvg, MonteCarloMatchesDirectForms) {
  for (auto [p, s] : {std::pair{0.3, std::uint64_t(200)}, std::pair{0.8, std::uint64_t(50)}}) {
    const auto [raw, rida] = mc_mse(p, s, 20000, Rng::keyed(22, "mse", s));
    EXPECT_NEAR(raw / mse_avg_raw_direct(p, static_cast<double>(s)), 1.0, 0.1);
    EXPECT_NEAR(rida / mse_avg(MseMethod::Rida, p, static_cast<double>(s)), 1.0, 0.1);
  }
}

TEST(Threshold, Examples) {
  EXPECT_EQ(rida_threshold_shots(0), 0.0);
  EXPECT_NEAR(rida_threshold_shots(0.5), 3.6667, 1e-4);
  EXPECT_GT(rida_threshold_shots(0.999), 1e6);
  // At the direct threshold the two direct errors coincide.
  for (double p : {0.2, 0.5, 0.95}) {
    const double s = rida_threshold_shots_direct(p);
    EXPECT_NEAR(mse_avg_raw_direct(p, s), mse_avg(MseMethod::Rida, p, s), 1e-12 * mse_avg(MseMethod::Rida, p, s));
  }
}

TEST(Threshold, MonotoneProperty) {
  double prev = -1;
  for (int i = 0; i < 999; ++i) {
    const double p = i / 1000.0;
    const double t = rida_threshold_shots(p);
    EXPECT_GT(t, prev);
    prev = t;
  }
}

TEST(Overhead, Examples) {
  OverheadQuery q{1.0, 5, 1e-4, {1.0}};
  EXPECT_NEAR(overhead(OverheadMethod::Rida, q), 1e4, 1e-8);
  EXPECT_NEAR(overhead(OverheadMethod::Ezne, q), 1.5e4, 1e-8);
  EXPECT_NEAR(overhead(OverheadMethod::CnotQzne, q), 27.0 / 64 * 1e4, 1e-8);
  q.gamma = 1.05;
  q.weights = {0.5, 0.5, 1.0};
  EXPECT_NEAR(overhead(OverheadMethod::Ezne, q) / overhead(OverheadMethod::Rida, q), 1.5 * std::pow(1.05, 20), 1e-9);
  EXPECT_NEAR(qzne_zero_error_shot_ratio(), 501.0 / 32, 1e-12);
  q.gamma = 1.0;
  q.weights = {1.0};
  EXPECT_NEAR(cnot_qzne_overhead_exact(q) / overhead(OverheadMethod::Rida, q), 501.0 / 32, 1e-12);
  q.gamma = 0.9;
  EXPECT_THROW(overhead(OverheadMethod::Rida, q), std::invalid_argument);
}

TEST(EzneVariance, GradientMatchesFiniteDifferences) {
  for (double u : {0.05, 0.0625, 0.25, 0.64, 1.0, 1.7}) {
    const double x1 = 0.6, d1 = 0.13;
    const double x[3] = {x1, x1 - d1, x1 - d1 - u * d1};
    const auto g = ezne_gradient(u);
    double fd_sum = 0;
    for (int i = 0; i < 3; ++i) {
      const double h = 1e-6;
      double up[3] = {x[0], x[1], x[2]}, dn[3] = {x[0], x[1], x[2]};
      up[i] += h;
      dn[i] -= h;
      const double fd = (exponential_zne({up[0], up[1], up[2], 0}) - exponential_zne({dn[0], dn[1], dn[2], 0})) / (2 * h);
      EXPECT_NEAR(fd, g[static_cast<std::size_t>(i)], 1e-6 * std::max(1.0, std::abs(fd)));
      fd_sum += fd * fd;
    }
    const double s = 1000;
    EXPECT_NEAR(ezne_variance_exact(u, s) / (3 / s * fd_sum), 1.0, 1e-6);
  }
}

TEST(EzneVariance, LeadingTerm) {
  const double s = 1000;
  // gamma^L = 4 gives u = 1/16
  EXPECT_NEAR(geometric_u_layers(4.0, 1), 0.0625, 1e-15);
  EXPECT_NEAR(ezne_variance_exact(0.0625, s) / ezne_variance_leading(0.0625, s), 1.0, 0.25);
  EXPECT_NEAR(ezne_variance_leading(geometric_u_layers(1.1, 10), s), 1.5 / s * std::pow(1.1, 60), 1e-9);
  EXPECT_TRUE(std::isfinite(ezne_variance_exact(1.0, s)));
  // at u = 1 the exact form reduces to 501/32 times the one-point variance 1/s
  EXPECT_NEAR(ezne_variance_exact(1.0, s) * s, 501.0 / 32, 1e-12);
  EXPECT_THROW(ezne_variance_exact(0.0, s), std::invalid_argument);
  // ratio tends to 1 as u -> 0
  EXPECT_NEAR(ezne_variance_exact(1e-6, s) / ezne_variance_leading(1e-6, s), 1.0, 0.01);
}

TEST(SelectionVariance, Examples) {
  SelectionStats st{10, 10, 1e-4, 0, 1e-4, 0};
  auto v = selection_variance(st);
  EXPECT_EQ(v.fixed, v.random);
  st.mean_b = 2e-3;
  v = selection_variance(st);
  EXPECT_NEAR(v.random - v.fixed, 7.22e-5, 1e-18);
  st.var_a = 1e-9;
  st.var_b = 2e-8;
  v = selection_variance(st);
  EXPECT_NEAR(v.fixed, 4 * (10 * 1e-9 + 10 * 2e-8), 1e-20);
  EXPECT_GT(v.random, v.fixed);
}

TEST(SelectionVariance, MonteCarlo) {
  const auto sample = sample_selection(6, 4, 2e-4, 4e-3, 40000, Rng(23));
  const auto want = selection_variance(uniform_selection_stats(6, 4, 2e-4, 4e-3));
  const auto f = sample_moments(sample.fixed), r = sample_moments(sample.random);
  EXPECT_NEAR(f.variance, want.fixed, 5 * f.variance_se);
  EXPECT_NEAR(r.variance, want.random, 5 * r.variance_se);
  EXPECT_LT(f.variance + 5 * f.variance_se, r.variance);
  EXPECT_NEAR(f.mean, 2 * (6 * 1e-4 + 4 * 2e-3), 5 * std::sqrt(f.variance / 40000));
}

TEST(GeometricU, Examples) {
  EXPECT_EQ(geometric_u(0), 1.0);
  EXPECT_NEAR(geometric_u(0.2), 0.64, 1e-15);
  EXPECT_NEAR(exponential_zne_fit({0.8, 0.512, 0.32768, 0}).u, geometric_u(0.2), 1e-12);
  EXPECT_THROW(geometric_u(1.5), std::invalid_argument);
}

TEST(SampleMoments, Basic) {
  const auto m = sample_moments({1, 2, 3, 4});
  EXPECT_EQ(m.mean, 2.5);
  EXPECT_NEAR(m.variance, 5.0 / 3, 1e-15);
  EXPECT_THROW(sample_moments({1}), std::invalid_argument);
}

}  // namespace
}  // namespace depofold
