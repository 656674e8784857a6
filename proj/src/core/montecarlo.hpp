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

// Monte Carlo evaluation of a policy on tabulated densities.
//
// Runs are split into fixed blocks of kBlockSize. Block b draws from an
// mt19937_64 seeded with splitmix64(seed + (b + 1) * 0x9e3779b97f4a7c15), and
// every run consumes four uniforms in the order hypothesis, parameter,
// observation, decision. Block sums are combined in block order, so results
// do not depend on the thread count.

#ifndef RJDE_CORE_MONTECARLO_HPP_
#define RJDE_CORE_MONTECARLO_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "core/policy.hpp"

namespace rjde {

inline constexpr std::size_t kBlockSize = 65536;

std::uint64_t splitmix64(std::uint64_t x);

struct SimSpec {
  std::uint64_t runs = 1000000;
  std::uint64_t seed = 1;

  void validate() const;
};

struct Draw {
  int hypothesis = 0;
  std::size_t theta_index = 0;
  double theta = 0.0;
  // Jittered observation and the grid cell it fell into.
  double x = 0.0;
  std::size_t cell = 0;
  // Uniform used for the randomized decision.
  double u_decision = 0.0;
};

// The first `count` draws of the stream for `spec.seed`. `data` holds the
// conditional density families generating observations under H0 and H1.
std::vector<Draw> sample(const SimSpec& spec,
                         const std::array<DensityFamily, 2>& data,
                         const Model& model, const ProblemConfig& cfg,
                         std::size_t count);

struct SimResult {
  Performance perf;
  double se_alpha0 = 0.0;
  double se_alpha1 = 0.0;
  double se_mse = 0.0;
  double se_j = 0.0;
  std::uint64_t runs = 0;
  std::array<std::uint64_t, 2> per_hypothesis{0, 0};
};

// Empirical error probabilities, MSE levels and objective of `policy`.
// Priors come from `cfg`; cost coefficients from `policy.cfg`.
SimResult estimate(const SimSpec& spec, const Policy& policy,
                   const std::array<DensityFamily, 2>& data,
                   const Model& model, const ProblemConfig& cfg);

struct ScenarioResult {
  std::string scenario;
  SimResult result;
};

void write_results_csv(std::ostream& os,
                       const std::vector<ScenarioResult>& rows);

}  // namespace rjde

#endif  // RJDE_CORE_MONTECARLO_HPP_
