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

// Run configuration as flat "section.key = value" text.
//
// Lines starting with '#' and blank lines are ignored. Every key has a
// default; unknown or repeated keys are rejected.

#ifndef RJDE_CORE_CONFIG_HPP_
#define RJDE_CORE_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "core/lfd_solver.hpp"
#include "core/montecarlo.hpp"
#include "core/np_design.hpp"

namespace rjde {

enum class ThetaLayout { kEndpoint, kMidpoint };

struct RunConfig {
  GaussianShiftSpec model;
  double theta_lo = 1.0;
  double theta_hi = 6.0;
  ProblemConfig problem;
  std::size_t n_theta = 77;
  ThetaLayout theta_layout = ThetaLayout::kEndpoint;
  std::size_t m_x = 2201;
  double x_lo = -8.0;
  double x_hi = 14.0;
  SolverConfig solver;
  NpOptions np;
  SimSpec simulation;
  std::string output_dir = "out";

  Model build_model() const;
};

class ConfigMap {
 public:
  // All keys at their defaults.
  ConfigMap();

  static ConfigMap parse(std::string_view text, const std::string& source);
  static ConfigMap load(const std::string& path);

  // Throws kConfig for unknown keys.
  void set(const std::string& key, const std::string& value);
  const std::string& get(const std::string& key) const;
  static const std::vector<std::string>& keys();

  // Typed view; throws kConfig naming the offending key.
  RunConfig resolve() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace rjde

#endif  // RJDE_CORE_CONFIG_HPP_
