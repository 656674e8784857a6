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

#include "core/np_design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "core/csv.hpp"

namespace rjde {

namespace {

void check_levels(const std::array<double, 2>& alpha_max) {
  if (!(alpha_max[0] > 0.0 && alpha_max[0] < 0.5)) {
    fail(ErrorKind::kFeasibility,
         "alpha0_max must lie in (0, 0.5), got " + format_double(alpha_max[0]));
  }
  if (!(alpha_max[1] > 0.0 && alpha_max[1] < 1.0)) {
    fail(ErrorKind::kFeasibility,
         "alpha1_max must lie in (0, 1), got " + format_double(alpha_max[1]));
  }
}

// Per-cell quantities that do not depend on the detection coefficients.
struct CellData {
  std::vector<SliceMoments> det0, det1, est0, est1;
  ProblemConfig cfg;
  double dx = 0.0;

  CellData(const FamilySet& families, const Model& model,
           const ProblemConfig& c)
      : cfg(c), dx(model.dx()) {
    det0 = family_moments(families.det[0], model.moments[0]);
    det1 = family_moments(families.det[1], model.moments[1]);
    est0 = family_moments(families.estimation(0), model.moments[0]);
    est1 = family_moments(families.estimation(1), model.moments[1]);
  }

  std::size_t size() const { return det0.size(); }

  // Decision at cell m for coefficients `lambda`; ties accept H1.
  double decide(std::size_t m, const std::array<double, 2>& lambda) const {
    ProblemConfig c = cfg;
    c.det_cost = lambda;
    const double d0 = accept_cost(0, det1[m], est0[m], c);
    const double d1 = accept_cost(1, det0[m], est1[m], c);
    return d0 < d1 ? 0.0 : 1.0;
  }

  std::vector<double> rule(const std::array<double, 2>& lambda) const {
    std::vector<double> delta(size());
    for (std::size_t m = 0; m < size(); ++m) delta[m] = decide(m, lambda);
    return delta;
  }

  std::array<double, 2> alphas(const std::vector<double>& delta) const {
    double a0 = 0.0, a1 = 0.0;
    for (std::size_t m = 0; m < size(); ++m) {
      a0 += delta[m] * det0[m].c;
      a1 += (1.0 - delta[m]) * det1[m].c;
    }
    return {a0 * dx, a1 * dx};
  }

  std::array<double, 2> alphas(const std::array<double, 2>& lambda) const {
    return alphas(rule(lambda));
  }
};

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
};

// Smallest lambda_i (to bracket precision) with alpha_i <= alpha_max_i,
// holding the other coefficient fixed. lo == hi == 0 marks the slack case.
Bracket bracket_coefficient(const CellData& data, int i,
                            std::array<double, 2> lambda,
                            const CoefficientSearchOptions& opts) {
  const double target = data.cfg.alpha_max[i];
  auto alpha_at = [&](double v) {
    lambda[i] = v;
    return data.alphas(lambda)[i];
  };
  if (alpha_at(0.0) <= target) return {0.0, 0.0};
  double lo = 0.0;
  double hi = std::max(lambda[i], 1.0);
  while (alpha_at(hi) > target) {
    lo = hi;
    hi *= 2.0;
    if (hi > opts.lambda_max) {
      fail(ErrorKind::kConvergence,
           "no detection cost up to " + format_double(opts.lambda_max) +
               " meets alpha" + std::to_string(i) + "_max");
    }
  }
  while (hi - lo > opts.bracket_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (alpha_at(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, hi};
}

}  // namespace

FeasibilityReport check_feasibility(const FamilySet& families,
                                    const Model& model,
                                    const std::array<double, 2>& alpha_max) {
  check_levels(alpha_max);
  const auto m0 = family_moments(families.det[0], model.moments[0]);
  const auto m1 = family_moments(families.det[1], model.moments[1]);
  const double dx = model.dx();
  const std::size_t cols = m0.size();

  // Accept H1 on the cells with the largest likelihood ratio first.
  std::vector<std::size_t> order(cols);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    // m1[l]/m0[l] > m1[r]/m0[r] without dividing by zero.
    return m1[l].c * m0[r].c > m1[r].c * m0[l].c;
  });
  double size = 0.0, power = 0.0;
  for (std::size_t m : order) {
    const double p0 = m0[m].c * dx, p1 = m1[m].c * dx;
    if (size + p0 <= alpha_max[0]) {
      size += p0;
      power += p1;
    } else {
      power += p1 * (alpha_max[0] - size) / p0;
      break;
    }
  }
  FeasibilityReport rep;
  rep.alpha1_np = std::clamp(1.0 - power, 0.0, 1.0);
  rep.feasible = alpha_max[1] > rep.alpha1_np;
  rep.message = rep.feasible
                    ? "feasible: alpha1_max " + format_double(alpha_max[1]) +
                          " exceeds the likelihood-ratio test type-II error " +
                          format_double(rep.alpha1_np)
                    : "infeasible: alpha1_max " + format_double(alpha_max[1]) +
                          " must exceed the type-II error " +
                          format_double(rep.alpha1_np) +
                          " of the likelihood-ratio test at level alpha0_max " +
                          format_double(alpha_max[0]);
  return rep;
}

CoefficientSearchResult coefficient_search(
    const FamilySet& families, const Model& model, const ProblemConfig& cfg,
    const std::array<double, 2>& start, const CoefficientSearchOptions& opts) {
  ProblemConfig base = cfg;
  base.mode = Formulation::kNeymanPearson;
  base.validate();
  check_levels(base.alpha_max);
  require(start[0] >= 0.0 && start[1] >= 0.0,
          "starting coefficients must be nonnegative");
  const CellData data(families, model, base);

  // Best lambda0 for the given lambda1 and a rule whose alpha0 binds (or
  // stays below the level when lambda0 is slack).
  struct Inner {
    double lambda0 = 0.0;
    double kappa = 1.0;
    std::vector<double> delta;
    std::array<double, 2> alpha{0.0, 0.0};
  };
  auto inner = [&](double lambda1) {
    Inner in;
    const Bracket br = bracket_coefficient(data, 0, {start[0], lambda1}, opts);
    in.lambda0 = br.hi;
    in.delta = data.rule({br.hi, lambda1});
    in.alpha = data.alphas(in.delta);
    if (br.hi > 0.0) {
      const std::vector<double> lo = data.rule({br.lo, lambda1});
      const double a_lo = data.alphas(lo)[0];
      if (a_lo > in.alpha[0]) {
        in.kappa = std::clamp(
            (base.alpha_max[0] - in.alpha[0]) / (a_lo - in.alpha[0]), 0.0, 1.0);
        for (std::size_t m = 0; m < in.delta.size(); ++m) {
          in.delta[m] += in.kappa * (lo[m] - in.delta[m]);
        }
        in.alpha = data.alphas(in.delta);
      }
    }
    return in;
  };

  CoefficientSearchResult res;
  const double target1 = base.alpha_max[1];
  Inner hi_in = inner(0.0);
  Inner lo_in = hi_in;
  double lo = 0.0, hi = 0.0;
  if (hi_in.alpha[1] > target1) {
    // alpha1 at the inner optimum falls as lambda1 grows.
    hi = std::max(start[1], 1.0);
    hi_in = inner(hi);
    while (hi_in.alpha[1] > target1) {
      lo = hi;
      lo_in = std::move(hi_in);
      hi *= 2.0;
      if (hi > opts.lambda_max) {
        fail(ErrorKind::kConvergence,
             "no detection cost up to " + format_double(opts.lambda_max) +
                 " meets alpha1_max");
      }
      hi_in = inner(hi);
    }
    if (lo == 0.0) lo_in = inner(0.0);
    while (hi - lo > opts.bracket_tol * hi) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      ++res.iterations;
      Inner mid_in = inner(mid);
      if (mid_in.alpha[1] > target1) {
        lo = mid;
        lo_in = std::move(mid_in);
      } else {
        hi = mid;
        hi_in = std::move(mid_in);
      }
    }
  }

  // Mix the rules bracketing lambda1 so alpha1 binds; alpha0 stays at its
  // level because both rules meet it.
  std::vector<double> delta = hi_in.delta;
  double weight = 0.0;
  if (hi > 0.0 && lo_in.alpha[1] > hi_in.alpha[1]) {
    weight = std::clamp((target1 - hi_in.alpha[1]) /
                            (lo_in.alpha[1] - hi_in.alpha[1]),
                        0.0, 1.0);
    for (std::size_t m = 0; m < delta.size(); ++m) {
      delta[m] += weight * (lo_in.delta[m] - delta[m]);
    }
  }

  ProblemConfig final_cfg = base;
  final_cfg.det_cost = {hi_in.lambda0, hi};
  res.lambda = final_cfg.det_cost;
  res.kappa = {hi_in.kappa, weight};
  res.policy = build_policy(families, model, final_cfg);
  res.policy.delta = std::move(delta);
  res.policy.tie_kappa = hi_in.kappa;
  res.achieved = evaluate(res.policy, families, model);
  return res;
}

CoefficientSearchResult design_nominal_np(const Model& model,
                                          const ProblemConfig& cfg,
                                          const NpOptions& opts) {
  const FamilySet nominal = model.nominal_set(Formulation::kNeymanPearson);
  const FeasibilityReport rep = check_feasibility(nominal, model, cfg.alpha_max);
  if (!rep.feasible) fail(ErrorKind::kFeasibility, rep.message);
  return coefficient_search(nominal, model, cfg, {1.0, 1.0}, opts.search);
}

NpDesignResult design_minimax_np(const Model& model, const ProblemConfig& cfg,
                                 const SolverConfig& solver,
                                 const NpOptions& opts) {
  require(opts.max_outer >= 1, "max_outer must be at least one");
  require(opts.damping > 0.0 && opts.damping <= 1.0,
          "damping must lie in (0, 1]");
  require(opts.tol > 0.0, "outer tolerance must be positive");
  ProblemConfig problem = cfg;
  problem.mode = Formulation::kNeymanPearson;
  problem.validate();

  NpDesignResult out;
  FamilySet families = model.nominal_set(Formulation::kNeymanPearson);
  out.feasibility = check_feasibility(families, model, problem.alpha_max);
  if (!out.feasibility.feasible) {
    fail(ErrorKind::kFeasibility, out.feasibility.message);
  }
  std::array<double, 2> lambda =
      coefficient_search(families, model, problem, {1.0, 1.0}, opts.search)
          .lambda;

  auto lagrangian = [&](const CoefficientSearchResult& s) {
    return s.achieved.j_value -
           problem.prior[0] * s.lambda[0] * problem.alpha_max[0] -
           problem.prior[1] * s.lambda[1] * problem.alpha_max[1];
  };

  CoefficientSearchResult search;
  double prev_objective = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 1; k <= opts.max_outer; ++k) {
    problem.det_cost = lambda;
    out.solution = solve_lfd(model, problem, solver, families);
    if (!out.solution.converged) {
      fail(ErrorKind::kConvergence,
           "LFD solve at outer iteration " + std::to_string(k) + ": " +
               out.solution.diagnostics);
    }
    families = out.solution.families;
    out.feasibility = check_feasibility(families, model, problem.alpha_max);
    if (!out.feasibility.feasible) {
      fail(ErrorKind::kFeasibility, out.feasibility.message);
    }
    search = coefficient_search(families, model, problem, lambda, opts.search);
    out.trace.push_back({k, search.lambda, {search.achieved.alpha0,
                                            search.achieved.alpha1},
                         search.achieved.j_value, lagrangian(search)});

    const double step = std::max(
        std::abs(search.lambda[0] - lambda[0]) / std::max(1.0, lambda[0]),
        std::abs(search.lambda[1] - lambda[1]) / std::max(1.0, lambda[1]));
    const double obj = search.achieved.j_value;
    const bool settled =
        step < opts.tol &&
        std::abs(obj - prev_objective) <
            opts.tol * std::max(1.0, std::abs(obj));
    prev_objective = obj;
    if (settled) {
      out.converged = true;
      break;
    }
    for (int i = 0; i < 2; ++i) {
      lambda[i] += opts.damping * (search.lambda[i] - lambda[i]);
    }
  }
  out.lambda = search.lambda;
  out.policy = search.policy;
  out.achieved = search.achieved;
  if (!out.converged) {
    out.diagnostics = "coefficients did not settle after " +
                      std::to_string(opts.max_outer) +
                      " outer iterations (last lambda " +
                      format_double(search.lambda[0]) + ", " +
                      format_double(search.lambda[1]) + ")";
  }
  return out;
}

void write_np_trace_csv(std::ostream& os,
                        const std::vector<NpTraceEntry>& trace) {
  CsvWriter csv(os, {"outer_iter", "lambda0", "lambda1", "alpha0", "alpha1",
                     "objective"});
  for (const auto& t : trace) {
    csv.row(static_cast<unsigned long long>(t.outer_iter), t.lambda[0],
            t.lambda[1], t.alpha[0], t.alpha[1], t.objective);
  }
}

}  // namespace rjde
