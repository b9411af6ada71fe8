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

#ifndef DEPOFOLD_ANALYTICS_HPP_
#define DEPOFOLD_ANALYTICS_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include "depofold/rng.hpp"

namespace depofold {

enum class MseMethod { Raw, Rida };
enum class OverheadMethod { Rida, Ezne, CnotQzne };

/// Shot budget question: error strength gamma = 1 / (1 - p*) per layer, L
/// layers, target variance sigma2 and the weights of the Pauli strings.
struct OverheadQuery {
  double gamma = 1.0;
  int layers = 1;
  double sigma2 = 1e-4;
  std::vector<double> weights{1.0};

  double weight_norm2() const;
  /// gamma^L.
  double gamma_l() const;
  void validate() const;
};

/// Gate counts of an estimation circuit and the moments of the one-qubit (a)
/// and two-qubit (b) gate error rates.
struct SelectionStats {
  double g1 = 0;
  double g2 = 0;
  double mean_a = 0;
  double var_a = 0;
  double mean_b = 0;
  double var_b = 0;
};

struct SelectionVariance {
  double fixed = 0;
  double random = 0;
};

/// Variance of a single sampled parity mean: (1 - o^2) / s, or 3(1 - o^2) / s
/// when the budget s is split over three extrapolation points.
double shot_variance(double o_eps, double shots, int points = 1);

/// Mean squared error averaged over truths uniform in [-1, 1], as stated in the
/// closed forms: raw (2 + 2p - p^2 + s(2 - p)^2) / (3s), rida (2 + 2p - p^2) / (3s(1 - p)^2).
double mse_avg(MseMethod method, double p, double shots);
/// Raw mean squared error evaluated directly from E[(O - O_eps_hat)^2] with
/// O_eps = (1 - p) O: p^2 / 3 - (1 - p)^2 / (3s) + 1 / s.
double mse_avg_raw_direct(double p, double shots);

/// Shot count above which the closed-form RIDA error drops below the raw one:
/// p (2 + 2p - p^2) / ((2 - p)(1 - p)^2).
double rida_threshold_shots(double p);
/// Same crossover using mse_avg_raw_direct: (2 + 2p - p^2)(2 - p) / (p (1 - p)^2).
double rida_threshold_shots_direct(double p);

/// Leading-order shot counts: rida |x|^2 gamma^{2L} / sigma2, ezne
/// (3/2)|x|^2 gamma^{6L} / sigma2, cnot_qzne (27/64)|x|^2 gamma^{10L} / sigma2.
double overhead(OverheadMethod method, const OverheadQuery& q);
/// CNOT-only + quadratic ZNE with all three gamma powers kept.
double cnot_qzne_overhead_exact(const OverheadQuery& q);
/// Shots of quadratic ZNE (budget split over three points) per raw shot at zero error: 501/32.
double qzne_zero_error_shot_ratio();

/// Partial derivatives of the monotone-branch exponential extrapolation with
/// respect to (x1, x3, x5); they depend only on the decay ratio u.
std::array<double, 3> ezne_gradient(double u);
/// (3 / s) * |grad|^2 at decay ratio u.
double ezne_variance_exact(double u, double shots);
/// 3 u^{-3} / (2s), the leading term with u = gamma^{-2L}.
double ezne_variance_leading(double u, double shots);

SelectionVariance selection_variance(const SelectionStats& st);

/// (1 - p)^2.
double geometric_u(double p);
/// gamma^{-2L}.
double geometric_u_layers(double gamma, int layers);

/// Monte Carlo draw of p' = 2 * sum of gate error rates for the two selection
/// schemes. One-qubit rates are uniform in [0, a_max], two-qubit rates uniform in
/// [0, b_max]. In the random scheme each of the g1 + g2 gates is a two-qubit gate
/// with probability g2 / (g1 + g2).
struct SelectionSample {
  std::vector<double> fixed;
  std::vector<double> random;
};
SelectionSample sample_selection(int g1, int g2, double a_max, double b_max, std::size_t trials, Rng rng);

/// Moments of U[0, hi].
SelectionStats uniform_selection_stats(int g1, int g2, double a_max, double b_max);

struct SampleMoments {
  double mean = 0;
  double variance = 0;
  /// Standard error of `variance`, from the fourth central moment.
  double variance_se = 0;
};
SampleMoments sample_moments(const std::vector<double>& xs);

}  // namespace depofold

#endif  // DEPOFOLD_ANALYTICS_HPP_
