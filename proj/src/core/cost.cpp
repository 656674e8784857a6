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

#include "core/cost.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace rjde {

void ProblemConfig::validate() const {
  for (int i = 0; i < 2; ++i) {
    require(prior[i] >= 0.0 && prior[i] <= 1.0, "priors must lie in [0, 1]");
    require(det_cost[i] >= 0.0 && std::isfinite(det_cost[i]),
            "detection costs must be nonnegative");
    require(est_cost[i] >= 0.0 && std::isfinite(est_cost[i]),
            "estimation costs must be nonnegative");
  }
  require(std::abs(prior[0] + prior[1] - 1.0) <= 1e-12,
          "priors must sum to one");
  if (mode == Formulation::kNeymanPearson) {
    for (int i = 0; i < 2; ++i) {
      require(alpha_max[i] > 0.0 && alpha_max[i] < 1.0,
              "error levels must lie in (0, 1)");
    }
  }
}

double SliceMoments::variance_bracket() const {
  if (c <= 0.0) return 0.0;
  return std::max(0.0, a - b * b / c);
}

double SliceMoments::mean(double fallback) const {
  return c > 0.0 ? b / c : fallback;
}

SliceMoments slice_moments(const MomentVectors& mv, std::span<const double> s) {
  require(s.size() == mv.c.size(), "slice length does not match the grid");
  SliceMoments out;
  for (std::size_t n = 0; n < s.size(); ++n) {
    out.a += mv.a[n] * s[n];
    out.b += mv.b[n] * s[n];
    out.c += mv.c[n] * s[n];
  }
  return out;
}

namespace {

void check_nonnegative(const std::vector<double>& v) {
  for (double x : v) {
    require(x >= 0.0 && std::isfinite(x), "slice entries must be nonnegative");
  }
}

}  // namespace

SliceState SliceState::bayes(std::vector<double> s0, std::vector<double> s1) {
  check_nonnegative(s0);
  check_nonnegative(s1);
  SliceState s;
  s.det = {std::move(s0), std::move(s1)};
  return s;
}

SliceState SliceState::np(std::vector<double> s0_d, std::vector<double> s1_d,
                          std::vector<double> s0_e, std::vector<double> s1_e) {
  SliceState s = bayes(std::move(s0_d), std::move(s1_d));
  check_nonnegative(s0_e);
  check_nonnegative(s1_e);
  s.est = std::array<std::vector<double>, 2>{std::move(s0_e), std::move(s1_e)};
  return s;
}

SliceState SliceState::scaled(double factor) const {
  SliceState out(*this);
  auto scale = [factor](std::vector<double>& v) {
    for (double& x : v) x *= factor;
  };
  for (auto& v : out.det) scale(v);
  if (out.est) {
    for (auto& v : *out.est) scale(v);
  }
  return out;
}

double accept_cost(int i, const SliceMoments& other_det,
                   const SliceMoments& own_est, const ProblemConfig& cfg) {
  const int j = 1 - i;
  return cfg.est_cost[i] * cfg.prior[i] * own_est.variance_bracket() +
         cfg.det_cost[j] * cfg.prior[j] * other_det.c;
}

double bayes_accept_cost(int i, const SliceState& slice,
                         const HypothesisMoments& mv, const ProblemConfig& cfg) {
  require(i == 0 || i == 1, "hypothesis index must be 0 or 1");
  return accept_cost(i, slice_moments(mv[1 - i], slice.det[1 - i]),
                     slice_moments(mv[i], slice.det[i]), cfg);
}

double np_accept_cost(int i, const SliceState& slice,
                      const HypothesisMoments& mv, const ProblemConfig& cfg) {
  require(i == 0 || i == 1, "hypothesis index must be 0 or 1");
  return accept_cost(i, slice_moments(mv[1 - i], slice.det[1 - i]),
                     slice_moments(mv[i], slice.estimation(i)), cfg);
}

double softmin(double a, double b, double xi) {
  require(a > 0.0 && b > 0.0, "softmin requires positive arguments");
  require(xi > 0.0, "softmin scale must be positive");
  const double u = xi / a, v = xi / b;
  const double hi = std::max(u, v), lo = std::min(u, v);
  // Clamped so round-off in xi / (xi / a) never lifts the result above min.
  return std::min(xi / (hi + std::log1p(std::exp(lo - hi))), std::min(a, b));
}

double rho_from_costs(double d0, double d1, const Smoothing& smoothing) {
  if (smoothing.is_soft()) return softmin(d0, d1, smoothing.xi);
  return std::min(d0, d1);
}

std::array<double, 2> rho_weights(double d0, double d1,
                                  const Smoothing& smoothing) {
  if (!smoothing.is_soft()) {
    return d1 < d0 ? std::array<double, 2>{0.0, 1.0}
                   : std::array<double, 2>{1.0, 0.0};
  }
  require(d0 > 0.0 && d1 > 0.0, "softmin requires positive costs");
  const double xi = smoothing.xi;
  const double u0 = xi / d0, u1 = xi / d1;
  const double hi = std::max(u0, u1);
  const double log_sum = hi + std::log1p(std::exp(std::min(u0, u1) - hi));
  const double scale = xi * xi / (log_sum * log_sum);
  return {scale * std::exp(u0 - log_sum) / (d0 * d0),
          scale * std::exp(u1 - log_sum) / (d1 * d1)};
}

std::array<double, 2> accept_costs(const SliceState& slice,
                                   const HypothesisMoments& mv,
                                   const ProblemConfig& cfg) {
  return {np_accept_cost(0, slice, mv, cfg), np_accept_cost(1, slice, mv, cfg)};
}

double rho(const SliceState& slice, const HypothesisMoments& mv,
           const ProblemConfig& cfg, const Smoothing& smoothing) {
  const auto d = accept_costs(slice, mv, cfg);
  return rho_from_costs(d[0], d[1], smoothing);
}

PointGradient point_gradient(const std::array<double, 2>& weights,
                             const std::array<SliceMoments, 2>& est_moments,
                             const ProblemConfig& cfg) {
  PointGradient g;
  for (int j = 0; j < 2; ++j) {
    // s_j^D enters D_{1-j} through its detection term.
    g.det_coef[j] = weights[1 - j] * cfg.det_cost[j] * cfg.prior[j];
    // s_j^E enters D_j through its variance term. With c == 0 the bracket is
    // flat, so its derivative is taken as zero.
    const SliceMoments& m = est_moments[j];
    if (m.c > 0.0) {
      g.est_coef[j] = weights[j] * cfg.est_cost[j] * cfg.prior[j];
      g.est_mean[j] = m.b / m.c;
    }
  }
  return g;
}

SliceState rho_gradient(const SliceState& slice, const HypothesisMoments& mv,
                        const ProblemConfig& cfg, const Smoothing& smoothing) {
  const auto d = accept_costs(slice, mv, cfg);
  const auto w = rho_weights(d[0], d[1], smoothing);
  const std::array<SliceMoments, 2> em{
      slice_moments(mv[0], slice.estimation(0)),
      slice_moments(mv[1], slice.estimation(1))};
  const PointGradient g = point_gradient(w, em, cfg);

  SliceState out;
  for (int j = 0; j < 2; ++j) {
    const std::size_t n_atoms = slice.det[j].size();
    out.det[j].assign(n_atoms, 0.0);
    for (std::size_t n = 0; n < n_atoms; ++n) {
      out.det[j][n] = g.det(j, mv[j], n);
      if (!slice.split()) out.det[j][n] += g.est(j, mv[j], n);
    }
  }
  if (slice.split()) {
    out.est.emplace();
    for (int j = 0; j < 2; ++j) {
      const std::size_t n_atoms = (*slice.est)[j].size();
      (*out.est)[j].assign(n_atoms, 0.0);
      for (std::size_t n = 0; n < n_atoms; ++n) {
        (*out.est)[j][n] = g.est(j, mv[j], n);
      }
    }
  }
  return out;
}

}  // namespace rjde
