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

#ifndef RJDE_CORE_POLICY_HPP_
#define RJDE_CORE_POLICY_HPP_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "core/model.hpp"

namespace rjde {

// Decision rule and estimators tabulated on the observation grid.
// delta(x) is the probability of accepting H1.
struct Policy {
  std::vector<double> delta;
  std::vector<double> est0;
  std::vector<double> est1;
  std::vector<double> postvar0;
  std::vector<double> postvar1;
  double tie_kappa = 1.0;
  // Cost coefficients the policy was designed for; evaluate() uses them.
  ProblemConfig cfg;
  // Grid indices where an estimation density vanished and the estimator fell
  // back to the parameter-grid midpoint.
  std::vector<std::size_t> degenerate_cells;

  std::size_t size() const { return delta.size(); }
};

struct PolicyOptions {
  double tie_kappa = 1.0;
  // |D0 - D1| <= tie_tol * max(D0, D1) counts as a tie.
  double tie_tol = 0.0;
};

Policy build_policy(const FamilySet& families, const Model& model,
                    const ProblemConfig& cfg, const PolicyOptions& opts = {});

// Cells whose acceptance costs tie within `rel_tol`.
std::vector<std::size_t> tie_cells(const FamilySet& families,
                                   const Model& model, const ProblemConfig& cfg,
                                   double rel_tol);

struct Performance {
  double alpha0 = 0.0;
  double alpha1 = 0.0;
  double mse0 = 0.0;
  double mse1 = 0.0;
  double j_value = 0.0;

  double mse() const { return mse0 + mse1; }
};

// Error probabilities and estimation error levels of `policy` when the data
// follow `eval` (detection families for errors, estimation families for
// MSEs). Wrong decisions contribute no estimation error.
Performance evaluate(const Policy& policy, const FamilySet& eval,
                     const Model& model);

void write_policy_csv(std::ostream& os, const Policy& policy,
                      const ObsGrid& grid);
// Reads delta/estimator columns back; cfg and kappa are left at defaults.
Policy read_policy_csv(std::istream& is, const ObsGrid& grid,
                       const std::string& source);

}  // namespace rjde

#endif  // RJDE_CORE_POLICY_HPP_
