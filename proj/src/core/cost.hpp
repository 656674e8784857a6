// Copyright 2026 The robustjde Authors.
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

// Pointwise acceptance costs of the joint detection/estimation problem.
//
// At a fixed observation x the densities of all parameter atoms collapse to
// nonnegative vectors s_i (one entry per atom of hypothesis i). The cost of
// accepting H_i is
//
//   D_i = mu_i P(H_i) [a_i's - (b_i's)^2 / c_i's] + lam_{1-i} P(H_{1-i}) c_{1-i}'s
//
// where the bracket is the unnormalized posterior variance. In the
// Neyman-Pearson-like formulation the bracket reads the estimation slice s_i^E
// and the detection term reads the detection slice s_{1-i}^D; the Bayesian
// formulation is the special case s^E == s^D. The objective rho is the
// (hard or smoothed) minimum of D_0 and D_1. It is concave and, for the hard
// minimum, homogeneous of degree one.

#ifndef RJDE_CORE_COST_HPP_
#define RJDE_CORE_COST_HPP_

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "core/grid.hpp"

namespace rjde {

enum class Formulation { kBayes, kNeymanPearson };

struct ProblemConfig {
  std::array<double, 2> prior{0.5, 0.5};
  std::array<double, 2> det_cost{0.0, 0.0};  // lambda_i
  std::array<double, 2> est_cost{0.0, 0.0};  // mu_i
  std::array<double, 2> alpha_max{0.05, 0.3};
  Formulation mode = Formulation::kBayes;

  void validate() const;
};

struct Smoothing {
  enum class Kind { kHard, kSoft };
  Kind kind = Kind::kHard;
  // Larger xi sharpens the minimum but worsens gradient conditioning.
  double xi = 50.0;

  static Smoothing hard() { return {}; }
  static Smoothing soft(double xi) { return {Kind::kSoft, xi}; }
  bool is_soft() const { return kind == Kind::kSoft; }
};

using HypothesisMoments = std::array<MomentVectors, 2>;

// Inner products of one slice vector with the moment vectors.
struct SliceMoments {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  // a - b^2/c, defined as 0 when c == 0 and clamped at 0 against round-off.
  double variance_bracket() const;
  // b / c, or `fallback` when c == 0.
  double mean(double fallback = 0.0) const;
};

SliceMoments slice_moments(const MomentVectors& mv, std::span<const double> s);

// Values of all densities at one observation. `est` is empty for the
// Bayesian formulation, where the detection slice doubles as estimation slice.
struct SliceState {
  std::array<std::vector<double>, 2> det;
  std::optional<std::array<std::vector<double>, 2>> est;

  static SliceState bayes(std::vector<double> s0, std::vector<double> s1);
  static SliceState np(std::vector<double> s0_d, std::vector<double> s1_d,
                       std::vector<double> s0_e, std::vector<double> s1_e);

  bool split() const { return est.has_value(); }
  const std::vector<double>& estimation(int i) const {
    return est ? (*est)[i] : det[i];
  }
  SliceState scaled(double factor) const;
};

// Core kernel on precomputed inner products.
double accept_cost(int i, const SliceMoments& other_det,
                   const SliceMoments& own_est, const ProblemConfig& cfg);

double bayes_accept_cost(int i, const SliceState& slice,
                         const HypothesisMoments& mv, const ProblemConfig& cfg);
double np_accept_cost(int i, const SliceState& slice,
                      const HypothesisMoments& mv, const ProblemConfig& cfg);

// xi / log(exp(xi/a) + exp(xi/b)) for a, b > 0, evaluated without overflow.
double softmin(double a, double b, double xi);

// min{D0, D1} or its softmin surrogate.
double rho_from_costs(double d0, double d1, const Smoothing& smoothing);

// Partial derivatives of rho with respect to D0 and D1. The hard minimum
// selects branch 0 at exact ties.
std::array<double, 2> rho_weights(double d0, double d1,
                                  const Smoothing& smoothing);

// Acceptance costs of a slice in its own formulation.
std::array<double, 2> accept_costs(const SliceState& slice,
                                   const HypothesisMoments& mv,
                                   const ProblemConfig& cfg);

double rho(const SliceState& slice, const HypothesisMoments& mv,
           const ProblemConfig& cfg, const Smoothing& smoothing);

// Per-observation gradient data. For atom n of hypothesis j:
//   d rho / d s_j^D[n] = det_coef[j] * c_j[n]
//   d rho / d s_j^E[n] = est_coef[j] * (a_j[n] - 2 t_j b_j[n] + t_j^2 c_j[n])
// with t_j = est_mean[j]. The Bayesian gradient is the sum of both.
struct PointGradient {
  std::array<double, 2> det_coef{0.0, 0.0};
  std::array<double, 2> est_coef{0.0, 0.0};
  std::array<double, 2> est_mean{0.0, 0.0};

  double det(int j, const MomentVectors& mv, std::size_t n) const {
    return det_coef[j] * mv.c[n];
  }
  double est(int j, const MomentVectors& mv, std::size_t n) const {
    const double t = est_mean[j];
    return est_coef[j] * (mv.a[n] - 2.0 * t * mv.b[n] + t * t * mv.c[n]);
  }
};

PointGradient point_gradient(const std::array<double, 2>& weights,
                             const std::array<SliceMoments, 2>& est_moments,
                             const ProblemConfig& cfg);

// Gradient shaped like the slice: `det` holds d/ds_i (Bayes) or d/ds_i^D
// (NP); `est` is populated only for split slices.
SliceState rho_gradient(const SliceState& slice, const HypothesisMoments& mv,
                        const ProblemConfig& cfg, const Smoothing& smoothing);

}  // namespace rjde

#endif  // RJDE_CORE_COST_HPP_
