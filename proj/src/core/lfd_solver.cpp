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

#include "core/lfd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "core/csv.hpp"
#include "core/parallel.hpp"

namespace rjde {

void SolverConfig::validate() const {
  require(eta0 > 0.0 && std::isfinite(eta0), "eta0 must be positive");
  require(decay > 0.0 && decay < 1.0, "decay must lie in (0, 1)");
  require(eta_floor > 0.0, "eta_floor must be positive");
  require(eta0 >= eta_floor, "eta0 must not be below eta_floor");
  require(max_iters >= 1, "max_iters must be at least one");
  require(objective_tol >= 0.0, "objective_tol must be nonnegative");
  require(patience >= 1, "patience must be at least one");
  if (smoothing.is_soft()) {
    require(smoothing.xi > 0.0, "softmin scale must be positive");
  }
}

double eta_schedule(std::size_t k, std::size_t k_init,
                    const SolverConfig& cfg) {
  require(k >= k_init, "eta_schedule requires k >= k_init");
  const double exponent = static_cast<double>(k - k_init);
  return std::max(cfg.eta0 * std::pow(cfg.decay, exponent), cfg.eta_floor);
}

double similarity(const FamilySet& families, const Model& model,
                  const ProblemConfig& problem, const Smoothing& smoothing) {
  return similarity(pointwise_costs(families, model.moments, problem),
                    smoothing, model.dx());
}

FamilySet proximal_step(const FamilySet& current, const Model& model,
                        const ProblemConfig& problem,
                        const Smoothing& smoothing, double eta) {
  require(eta > 0.0, "proximal weight must be positive");
  const PointwiseCosts pc = pointwise_costs(current, model.moments, problem);
  const std::size_t cols = pc.d0.size();

  std::vector<PointGradient> grad(cols);
  for (std::size_t m = 0; m < cols; ++m) {
    const auto w = rho_weights(pc.d0[m], pc.d1[m], smoothing);
    grad[m] = point_gradient(w, {pc.est[0][m], pc.est[1][m]}, problem);
  }

  // Flatten (family, row) pairs so rows can be projected independently.
  struct RowRef {
    std::size_t family;
    std::size_t row;
  };
  std::vector<RowRef> rows;
  for (std::size_t k = 0; k < current.size(); ++k) {
    for (std::size_t n = 0; n < current.at(k).rows(); ++n) {
      rows.push_back({k, n});
    }
  }

  FamilySet next = current;
  const bool split = current.split();
  const double dx = model.dx();
  parallel_for(0, rows.size(), [&](std::size_t r) {
    const auto [k, n] = rows[r];
    const int hyp = static_cast<int>(k % 2);
    const bool is_est = k >= 2;
    const MomentVectors& mv = model.moments[hyp];
    const BandModel& band = model.bands[hyp];

    std::vector<double> g(cols);
    for (std::size_t m = 0; m < cols; ++m) {
      if (split) {
        g[m] = is_est ? grad[m].est(hyp, mv, n) : grad[m].det(hyp, mv, n);
      } else {
        g[m] = grad[m].det(hyp, mv, n) + grad[m].est(hyp, mv, n);
      }
    }
    // The normalization absorbs any common factor, so shift by the maximum
    // to keep the exponentials bounded.
    const double g_max = *std::max_element(g.begin(), g.end());
    const auto q = current.at(k).row(n);
    std::vector<double> candidate(cols);
    for (std::size_t m = 0; m < cols; ++m) {
      candidate[m] = q[m] * std::exp((g[m] - g_max) / eta);
    }
    clip_normalize_into(candidate, band.lower.row(n), band.upper.row(n), dx,
                        next.at(k).row(n));
  });
  return next;
}

LfdSolution solve_lfd(const Model& model, const ProblemConfig& problem,
                      const SolverConfig& cfg, std::optional<FamilySet> init) {
  problem.validate();
  cfg.validate();
  LfdSolution sol;
  sol.families = init ? std::move(*init) : model.nominal_set(problem.mode);
  if (problem.mode == Formulation::kNeymanPearson) {
    require(sol.families.split(), "NP solve needs split families");
  }
  const Smoothing& sm = cfg.smoothing;
  double f = similarity(sol.families, model, problem, sm);
  require(std::isfinite(f), "initial objective is not finite");
  sol.trace.push_back({0, f, cfg.eta0, false});

  // A collapsed band admits a single density per row.
  if (model.bands[0].degenerate() && model.bands[1].degenerate()) {
    sol.families = proximal_step(sol.families, model, problem, sm, cfg.eta0);
    sol.objective = similarity(sol.families, model, problem, sm);
    sol.trace.push_back({1, sol.objective, cfg.eta0, false});
    sol.iterations = 1;
    sol.converged = true;
    return sol;
  }

  std::size_t k_init = 0;
  std::size_t stall = 0;
  for (std::size_t k = 1; k <= cfg.max_iters; ++k) {
    const double eta = eta_schedule(k - 1, k_init, cfg);
    sol.iterations = k;
    bool accepted = false;
    double f_next = f;
    FamilySet next;
    try {
      next = proximal_step(sol.families, model, problem, sm, eta);
      f_next = similarity(next, model, problem, sm);
      accepted = std::isfinite(f_next) && f_next >= f;
    } catch (const ProjectionError&) {
      accepted = false;
    }
    if (!accepted) {
      ++sol.resets;
      k_init = k;
      ++stall;
      sol.trace.push_back({k, f, eta, true});
    } else {
      const double rel = std::abs(f_next - f) /
                         std::max(std::abs(f), std::numeric_limits<double>::min());
      stall = rel < cfg.objective_tol ? stall + 1 : 0;
      sol.families = std::move(next);
      f = f_next;
      sol.trace.push_back({k, f, eta, false});
    }
    if (stall >= cfg.patience) {
      sol.converged = true;
      break;
    }
  }
  sol.objective = f;
  if (!sol.converged) {
    sol.diagnostics = "no convergence after " + std::to_string(cfg.max_iters) +
                      " iterations (objective " + format_double(f) +
                      ", resets " + std::to_string(sol.resets) + ")";
  }
  return sol;
}

void write_trace_csv(std::ostream& os, const std::vector<TraceEntry>& trace) {
  CsvWriter csv(os, {"iter", "objective", "eta", "reset_flag"});
  for (const auto& t : trace) {
    csv.row(static_cast<unsigned long long>(t.iter), t.objective, t.eta,
            t.reset ? 1 : 0);
  }
}

}  // namespace rjde
