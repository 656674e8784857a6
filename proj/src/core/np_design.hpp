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

// Detection cost coefficients that make the error constraints bind.
//
// For fixed densities the dual function of the constrained problem is concave
// and piecewise linear in (lambda0, lambda1) with supergradient
// P_i (alpha_i - alpha_max_i). For a given lambda1 the best lambda0 is found
// by bisection on alpha0, randomizing the cells that flip inside the final
// bracket so alpha0 meets its level exactly. An outer bisection on lambda1
// follows the sign of the remaining alpha1 residual, and the two policies
// bracketing the final lambda1 are mixed so both levels bind. The minimax
// design alternates this search with LFD solves at the current coefficients.

#ifndef RJDE_CORE_NP_DESIGN_HPP_
#define RJDE_CORE_NP_DESIGN_HPP_

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "core/lfd_solver.hpp"
#include "core/policy.hpp"

namespace rjde {

struct FeasibilityReport {
  // Type-II error of the likelihood-ratio test at level alpha_max[0].
  double alpha1_np = 0.0;
  bool feasible = false;
  std::string message;
};

// Likelihood-ratio test between the detection marginals of `families`.
// Throws kFeasibility when the levels lie outside alpha0 in (0, 0.5),
// alpha1 in (0, 1).
FeasibilityReport check_feasibility(const FamilySet& families,
                                    const Model& model,
                                    const std::array<double, 2>& alpha_max);

struct CoefficientSearchOptions {
  // Relative width of the final bisection brackets.
  double bracket_tol = 1e-12;
  double lambda_max = 1e8;
};

struct CoefficientSearchResult {
  std::array<double, 2> lambda{0.0, 0.0};
  // Tie randomization for alpha0 and the mixing weight for alpha1.
  std::array<double, 2> kappa{1.0, 1.0};
  Policy policy;
  // Performance of `policy` on the detection families.
  Performance achieved;
  // Outer bisection steps on lambda1.
  std::size_t iterations = 0;
};

// Finds lambda >= 0 with alpha_i = alpha_max_i whenever lambda_i > 0, using
// the NP policy built from `families`. `start` seeds the brackets.
CoefficientSearchResult coefficient_search(
    const FamilySet& families, const Model& model, const ProblemConfig& cfg,
    const std::array<double, 2>& start = {1.0, 1.0},
    const CoefficientSearchOptions& opts = {});

struct NpOptions {
  std::size_t max_outer = 60;
  double tol = 1e-4;
  double damping = 0.5;
  CoefficientSearchOptions search;
};

struct NpTraceEntry {
  std::size_t outer_iter = 0;
  std::array<double, 2> lambda{0.0, 0.0};
  std::array<double, 2> alpha{0.0, 0.0};
  double objective = 0.0;
  // J - sum_i P_i lambda_i alpha_max_i at the searched coefficients.
  double lagrangian = 0.0;
};

struct NpDesignResult {
  std::array<double, 2> lambda{0.0, 0.0};
  LfdSolution solution;
  Policy policy;
  Performance achieved;
  FeasibilityReport feasibility;
  std::vector<NpTraceEntry> trace;
  bool converged = false;
  std::string diagnostics;
};

// Coefficients and policy for the nominal densities.
CoefficientSearchResult design_nominal_np(const Model& model,
                                          const ProblemConfig& cfg,
                                          const NpOptions& opts = {});

// Alternates LFD solves and coefficient searches until the coefficients and
// the objective settle. Throws kFeasibility when the levels are infeasible.
NpDesignResult design_minimax_np(const Model& model, const ProblemConfig& cfg,
                                 const SolverConfig& solver,
                                 const NpOptions& opts = {});

void write_np_trace_csv(std::ostream& os,
                        const std::vector<NpTraceEntry>& trace);

}  // namespace rjde

#endif  // RJDE_CORE_NP_DESIGN_HPP_
