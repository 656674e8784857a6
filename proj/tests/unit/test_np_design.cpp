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

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "core/config.hpp"
#include "core/np_design.hpp"
#include "doctest.h"
#include "test_util.hpp"

namespace rjde {
namespace {

ProblemConfig np_problem() {
  ProblemConfig cfg = testing::np_costs(1.0, 1.0);
  cfg.alpha_max = {0.05, 0.3};
  return cfg;
}

SolverConfig soft_solver() {
  SolverConfig cfg;
  cfg.smoothing = Smoothing::soft(10.0);
  return cfg;
}

// Lagrangian of the constrained problem for the NP-optimal rule at lambda.
double dual_value(const FamilySet& f, const Model& model, ProblemConfig cfg,
                  std::array<double, 2> lambda) {
  cfg.det_cost = lambda;
  const PointwiseCosts pc = pointwise_costs(f, model.moments, cfg);
  double total = 0.0;
  for (std::size_t m = 0; m < pc.d0.size(); ++m) total += std::min(pc.d0[m], pc.d1[m]);
  return total * model.dx() - cfg.prior[0] * lambda[0] * cfg.alpha_max[0] -
         cfg.prior[1] * lambda[1] * cfg.alpha_max[1];
}

TEST_CASE("feasibility of the default levels matches a threshold test") {
  RunConfig rc;
  rc.model.c_hi = 1.5;
  const Model model = rc.build_model();
  const FeasibilityReport rep = check_feasibility(
      model.nominal_set(Formulation::kNeymanPearson), model, {0.05, 0.3});
  CHECK(rep.feasible);

  // The likelihood ratio increases in x, so the test rejects H0 above the
  // upper 5% point of N(0, 1).
  const double t = 1.6448536269514722;
  double alpha1 = 0.0;
  const auto theta = model.params[1].points();
  for (double th : theta) alpha1 += 0.5 * std::erfc(-(t - th) / std::sqrt(2.0));
  alpha1 /= static_cast<double>(theta.size());
  CHECK(std::abs(rep.alpha1_np - alpha1) < 2e-3);
  CHECK(rep.alpha1_np < 0.3);
}

TEST_CASE("feasibility level checks") {
  const Model model = testing::small_model();
  const FamilySet f = model.nominal_set(Formulation::kNeymanPearson);
  CHECK(check_feasibility(f, model, {0.05, 0.999}).feasible);
  CHECK_FALSE(check_feasibility(f, model, {0.001, 0.01}).feasible);
  for (std::array<double, 2> bad : {std::array{0.5, 0.3}, std::array{0.0, 0.3},
                                    std::array{0.05, 1.0}}) {
    try {
      check_feasibility(f, model, bad);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kFeasibility);
    }
  }
}

// Four unit bins where the zero-coefficient rule already meets both levels:
// each hypothesis is accepted exactly where its own parameter is resolved.
Model slack_model() {
  const ObsGrid obs(0.0, 3.0, 4);
  const DensityFamily p0(0, {0.0, 1.0}, 4,
                         {0.9, 0.0, 0.05, 0.05, 0.0, 0.9, 0.05, 0.05});
  const DensityFamily p1(1, {0.0, 10.0}, 4,
                         {0.05, 0.05, 0.9, 0.0, 0.05, 0.05, 0.0, 0.9});
  return make_model(obs, ParamGrid({0.0, 1.0}, 1.0, {0.5, 0.5}),
                    ParamGrid({0.0, 10.0}, 10.0, {0.05, 0.05}),
                    {make_scaled_band(p0, 1.0, 1.0), make_scaled_band(p1, 1.0, 1.0)});
}

TEST_CASE("slack constraints give zero coefficients") {
  const Model model = slack_model();
  ProblemConfig cfg = np_problem();
  cfg.est_cost = {1.0, 1.0};
  cfg.alpha_max = {0.2, 0.2};
  const CoefficientSearchResult r = coefficient_search(
      model.nominal_set(Formulation::kNeymanPearson), model, cfg);
  CHECK(r.lambda[0] == 0.0);
  CHECK(r.lambda[1] == 0.0);
  CHECK(r.achieved.alpha0 == doctest::Approx(0.1));
  CHECK(r.achieved.alpha1 == doctest::Approx(0.1));
}

TEST_CASE("coefficient search makes both constraints bind") {
  const Model model = testing::small_model(21, 441, 0.8, 1.5);
  const ProblemConfig cfg = np_problem();
  const FamilySet f = model.nominal_set(Formulation::kNeymanPearson);
  const CoefficientSearchResult r = coefficient_search(f, model, cfg);
  CHECK(r.lambda[0] > 0.0);
  CHECK(r.lambda[1] > 0.0);
  // Independent quadrature of the returned rule.
  double a0 = 0.0, a1 = 0.0;
  const double w1 = 1.0 / static_cast<double>(f.det[1].rows());
  for (std::size_t m = 0; m < r.policy.size(); ++m) {
    double m1 = 0.0;
    for (std::size_t n = 0; n < f.det[1].rows(); ++n) m1 += w1 * f.det[1](n, m);
    a0 += r.policy.delta[m] * f.det[0](0, m);
    a1 += (1.0 - r.policy.delta[m]) * m1;
  }
  a0 *= model.dx();
  a1 *= model.dx();
  CHECK(std::abs(a0 - 0.05) < 1e-3);
  CHECK(std::abs(a1 - 0.3) < 1e-3);
  CHECK(std::abs(r.achieved.alpha0 - a0) < 1e-10);

  // The coefficients maximize the concave dual function.
  const double best = dual_value(f, model, cfg, r.lambda);
  for (double d0 : {-0.05, 0.0, 0.05}) {
    for (double d1 : {-0.05, 0.0, 0.05}) {
      const std::array<double, 2> l{r.lambda[0] * (1 + d0), r.lambda[1] * (1 + d1)};
      CHECK(dual_value(f, model, cfg, l) <= best + 1e-9);
    }
  }
}

TEST_CASE("collapsed band reduces to the nominal design") {
  const Model model = testing::small_model(11, 221, 1.0, 1.0);
  const ProblemConfig cfg = np_problem();
  const CoefficientSearchResult nominal = design_nominal_np(model, cfg);
  const NpDesignResult mm = design_minimax_np(model, cfg, soft_solver());
  CHECK(mm.converged);
  CHECK(mm.lambda[0] == doctest::Approx(nominal.lambda[0]).epsilon(1e-6));
  CHECK(mm.lambda[1] == doctest::Approx(nominal.lambda[1]).epsilon(1e-6));
}

TEST_CASE("minimax design binds, ascends and is robust") {
  const Model model = testing::small_model(11, 221, 0.8, 1.5);
  const ProblemConfig cfg = np_problem();
  // Warm-started LFD solves are inexact, so on this coarse grid the
  // coefficients creep for about 130 outer iterations before settling.
  NpOptions opts;
  opts.max_outer = 300;
  const NpDesignResult r = design_minimax_np(model, cfg, soft_solver(), opts);
  REQUIRE(r.converged);
  CHECK(r.feasibility.feasible);
  CHECK(std::abs(r.achieved.alpha0 - 0.05) < 1e-3);
  CHECK(std::abs(r.achieved.alpha1 - 0.3) < 1e-3);
  for (std::size_t k = 1; k < r.trace.size(); ++k) {
    CHECK(r.trace[k].lagrangian >= r.trace[k - 1].lagrangian - 1e-6);
  }

  const FamilySet& q = r.solution.families;
  const Performance at_q = evaluate(r.policy, q, model);
  std::mt19937_64 rng(41);
  double gap0 = -1e300, gap1 = -1e300, gap_mse = -1e300;
  for (int trial = 0; trial < 20; ++trial) {
    const FamilySet p = FamilySet::np(
        testing::random_band_family(model.bands[0], model.dx(), rng),
        testing::random_band_family(model.bands[1], model.dx(), rng),
        testing::random_band_family(model.bands[0], model.dx(), rng),
        testing::random_band_family(model.bands[1], model.dx(), rng));
    const Performance at_p = evaluate(r.policy, p, model);
    gap0 = std::max(gap0, at_p.alpha0 - at_q.alpha0);
    gap1 = std::max(gap1, at_p.alpha1 - at_q.alpha1);
    gap_mse = std::max(gap_mse, at_p.mse() - at_q.mse());
  }
  CHECK(gap0 <= 1e-6);
  CHECK(gap1 <= 1e-6);
  CHECK(gap_mse <= 1e-6);

  std::ostringstream os;
  write_np_trace_csv(os, r.trace);
  CHECK(os.str().rfind("outer_iter,lambda0,lambda1,alpha0,alpha1,objective", 0) == 0);
}

}  // namespace
}  // namespace rjde
