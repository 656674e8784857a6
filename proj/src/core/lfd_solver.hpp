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

// Least favorable densities as maximizers of the f-similarity induced by rho.
//
// Each iteration takes a KL-proximal ascent step: every density row is
// multiplied by exp(grad / eta) and projected back onto its band by
// clip_normalize, whose scalar normalization is the only line search. The
// proximal weight eta decays geometrically from eta0 and never drops below
// eta_floor; a failed or non-improving step restarts the decay.

#ifndef RJDE_CORE_LFD_SOLVER_HPP_
#define RJDE_CORE_LFD_SOLVER_HPP_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "core/model.hpp"

namespace rjde {

struct SolverConfig {
  double eta0 = 10.0;
  double decay = 0.97;
  double eta_floor = 0.05;
  std::size_t max_iters = 5000;
  double objective_tol = 1e-7;
  std::size_t patience = 10;
  Smoothing smoothing = Smoothing::hard();

  void validate() const;
};

struct TraceEntry {
  std::size_t iter = 0;
  double objective = 0.0;
  double eta = 0.0;
  bool reset = false;
};

struct LfdSolution {
  FamilySet families;
  std::vector<TraceEntry> trace;
  std::size_t iterations = 0;
  std::size_t resets = 0;
  bool converged = false;
  // Final objective in the solver's smoothing mode.
  double objective = 0.0;
  std::string diagnostics;
};

// max{eta0 * decay^(k - k_init), eta_floor}.
double eta_schedule(std::size_t k, std::size_t k_init, const SolverConfig& cfg);

// One KL-proximal step at weight eta. Throws ProjectionError when a row
// cannot be projected onto its band.
FamilySet proximal_step(const FamilySet& current, const Model& model,
                        const ProblemConfig& problem,
                        const Smoothing& smoothing, double eta);

// f-similarity of a family set under the given smoothing.
double similarity(const FamilySet& families, const Model& model,
                  const ProblemConfig& problem, const Smoothing& smoothing);

// Maximizes the similarity over the band, starting from `init` or the
// nominal densities.
LfdSolution solve_lfd(const Model& model, const ProblemConfig& problem,
                      const SolverConfig& cfg,
                      std::optional<FamilySet> init = std::nullopt);

void write_trace_csv(std::ostream& os, const std::vector<TraceEntry>& trace);

}  // namespace rjde

#endif  // RJDE_CORE_LFD_SOLVER_HPP_
