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

// End-to-end runs that read a RunConfig and write CSV artifacts into
// RunConfig::output_dir.

#ifndef RJDE_CORE_PIPELINE_HPP_
#define RJDE_CORE_PIPELINE_HPP_

#include <array>
#include <string>
#include <vector>

#include "core/config.hpp"

namespace rjde {

struct RunSummary {
  Formulation mode = Formulation::kBayes;
  std::vector<std::string> files;
  // Human-readable lines for the console.
  std::vector<std::string> report;
  std::array<double, 2> nominal_lambda{0.0, 0.0};
  std::array<double, 2> minimax_lambda{0.0, 0.0};
  // Quadrature performance or Monte Carlo results, by scenario.
  std::vector<ScenarioResult> scenarios;
};

// Both run_solve functions write every artifact before reporting solver
// non-convergence as kConvergence.
RunSummary run_solve_bayes(const RunConfig& rc);
RunSummary run_solve_np(const RunConfig& rc);

// Monte Carlo evaluation of the artifacts of a previous solve run in
// rc.output_dir; writes results.csv.
RunSummary run_simulate(const RunConfig& rc);

// Figure data (selected LFD rows, decision rules, posterior variances) from
// the artifacts of a previous solve run.
RunSummary export_figures(const RunConfig& rc);

}  // namespace rjde

#endif  // RJDE_CORE_PIPELINE_HPP_
