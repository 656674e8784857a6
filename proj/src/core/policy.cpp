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

#include "core/policy.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "core/csv.hpp"

namespace rjde {

namespace {

bool is_tie(double d0, double d1, double rel_tol) {
  return std::abs(d0 - d1) <= rel_tol * std::max(d0, d1);
}

}  // namespace

Policy build_policy(const FamilySet& families, const Model& model,
                    const ProblemConfig& cfg, const PolicyOptions& opts) {
  cfg.validate();
  require(opts.tie_kappa >= 0.0 && opts.tie_kappa <= 1.0,
          "tie_kappa must lie in [0, 1]");
  const PointwiseCosts pc = pointwise_costs(families, model.moments, cfg);
  const std::size_t cols = pc.d0.size();

  Policy pol;
  pol.cfg = cfg;
  pol.tie_kappa = opts.tie_kappa;
  pol.delta.resize(cols);
  pol.est0.resize(cols);
  pol.est1.resize(cols);
  pol.postvar0.resize(cols);
  pol.postvar1.resize(cols);
  for (std::size_t m = 0; m < cols; ++m) {
    const double d0 = pc.d0[m], d1 = pc.d1[m];
    if (is_tie(d0, d1, opts.tie_tol)) {
      pol.delta[m] = opts.tie_kappa;
    } else {
      pol.delta[m] = d0 > d1 ? 1.0 : 0.0;
    }
    bool degenerate = false;
    for (int i = 0; i < 2; ++i) {
      const SliceMoments& em = pc.est[i][m];
      double est = 0.0, var = 0.0;
      if (em.c > 0.0) {
        est = em.b / em.c;
        var = std::max(0.0, em.a / em.c - est * est);
      } else {
        est = model.params[i].midpoint();
        degenerate = true;
      }
      (i == 0 ? pol.est0 : pol.est1)[m] = est;
      (i == 0 ? pol.postvar0 : pol.postvar1)[m] = var;
    }
    if (degenerate) pol.degenerate_cells.push_back(m);
  }
  return pol;
}

std::vector<std::size_t> tie_cells(const FamilySet& families,
                                   const Model& model, const ProblemConfig& cfg,
                                   double rel_tol) {
  const PointwiseCosts pc = pointwise_costs(families, model.moments, cfg);
  std::vector<std::size_t> out;
  for (std::size_t m = 0; m < pc.d0.size(); ++m) {
    if (is_tie(pc.d0[m], pc.d1[m], rel_tol)) out.push_back(m);
  }
  return out;
}

Performance evaluate(const Policy& policy, const FamilySet& eval,
                     const Model& model) {
  const std::size_t cols = policy.size();
  require(model.obs.size() == cols,
          "policy does not match the observation grid");
  const auto det0 = family_moments(eval.det[0], model.moments[0]);
  const auto det1 = family_moments(eval.det[1], model.moments[1]);
  const auto est0 = eval.split()
                        ? family_moments(eval.estimation(0), model.moments[0])
                        : det0;
  const auto est1 = eval.split()
                        ? family_moments(eval.estimation(1), model.moments[1])
                        : det1;
  Performance perf;
  for (std::size_t m = 0; m < cols; ++m) {
    const double d = policy.delta[m];
    perf.alpha0 += d * det0[m].c;
    perf.alpha1 += (1.0 - d) * det1[m].c;
    // sum_n c_n (est - theta_n)^2 s_n = a - 2 est b + est^2 c
    const double t0 = policy.est0[m], t1 = policy.est1[m];
    const double sq0 = est0[m].a - 2.0 * t0 * est0[m].b + t0 * t0 * est0[m].c;
    const double sq1 = est1[m].a - 2.0 * t1 * est1[m].b + t1 * t1 * est1[m].c;
    perf.mse0 += (1.0 - d) * std::max(0.0, sq0);
    perf.mse1 += d * std::max(0.0, sq1);
  }
  const double dx = model.dx();
  perf.alpha0 *= dx;
  perf.alpha1 *= dx;
  perf.mse0 *= dx;
  perf.mse1 *= dx;
  const ProblemConfig& c = policy.cfg;
  perf.j_value =
      c.prior[0] * (c.det_cost[0] * perf.alpha0 + c.est_cost[0] * perf.mse0) +
      c.prior[1] * (c.det_cost[1] * perf.alpha1 + c.est_cost[1] * perf.mse1);
  return perf;
}

void write_policy_csv(std::ostream& os, const Policy& policy,
                      const ObsGrid& grid) {
  CsvWriter csv(os, {"x", "delta", "est1", "postvar1", "est0", "postvar0"});
  for (std::size_t m = 0; m < policy.size(); ++m) {
    csv.row(grid[m], policy.delta[m], policy.est1[m], policy.postvar1[m],
            policy.est0[m], policy.postvar0[m]);
  }
}

Policy read_policy_csv(std::istream& is, const ObsGrid& grid,
                       const std::string& source) {
  const CsvTable t = read_csv(is, source);
  if (t.rows.size() != grid.size()) {
    fail(ErrorKind::kIo, "'" + source + "' does not match the observation grid");
  }
  const std::size_t cd = t.column("delta"), ce1 = t.column("est1"),
                    cv1 = t.column("postvar1"), ce0 = t.column("est0"),
                    cv0 = t.column("postvar0");
  Policy pol;
  const std::size_t cols = grid.size();
  pol.delta.resize(cols);
  pol.est0.resize(cols);
  pol.est1.resize(cols);
  pol.postvar0.resize(cols);
  pol.postvar1.resize(cols);
  for (std::size_t m = 0; m < cols; ++m) {
    pol.delta[m] = t.number(m, cd);
    pol.est1[m] = t.number(m, ce1);
    pol.postvar1[m] = t.number(m, cv1);
    pol.est0[m] = t.number(m, ce0);
    pol.postvar0[m] = t.number(m, cv0);
    if (!(pol.delta[m] >= 0.0 && pol.delta[m] <= 1.0)) {
      fail(ErrorKind::kIo, "'" + source + "' has delta outside [0, 1]");
    }
  }
  return pol;
}

}  // namespace rjde
