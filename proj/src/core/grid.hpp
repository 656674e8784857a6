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

#ifndef RJDE_CORE_GRID_HPP_
#define RJDE_CORE_GRID_HPP_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace rjde {

// Discretized parameter space of one hypothesis. Every point carries the
// quadrature weight `spacing`, so sum(prior) * spacing == 1.
class ParamGrid {
 public:
  ParamGrid(std::vector<double> points, double spacing,
            std::vector<double> prior);

  std::size_t size() const { return points_.size(); }
  std::span<const double> points() const { return points_; }
  std::span<const double> prior() const { return prior_; }
  double spacing() const { return spacing_; }
  double lo() const { return points_.front(); }
  double hi() const { return points_.back(); }
  double midpoint() const { return 0.5 * (lo() + hi()); }

  // A grid with identical points and the prior scaled by `factor`; the result
  // is not normalized and skips the normalization check.
  ParamGrid scaled_prior(double factor) const;

 private:
  struct Unchecked {};
  ParamGrid(Unchecked, std::vector<double> points, double spacing,
            std::vector<double> prior);

  std::vector<double> points_;
  double spacing_;
  std::vector<double> prior_;
};

// Uniform prior on [lo, hi] sampled at the n cell midpoints.
ParamGrid build_uniform_param_grid(double lo, double hi, std::size_t n);

// Uniform prior on [lo, hi] sampled at n equispaced points that include both
// endpoints; each point gets mass 1/n.
ParamGrid build_endpoint_param_grid(double lo, double hi, std::size_t n);

// A hypothesis without a parameter of interest: one atom at `value`.
ParamGrid build_point_param_grid(double value);

class ObsGrid {
 public:
  // m equispaced points covering [lo, hi] inclusive.
  ObsGrid(double lo, double hi, std::size_t m);

  std::size_t size() const { return points_.size(); }
  std::span<const double> points() const { return points_; }
  double spacing() const { return spacing_; }
  double operator[](std::size_t i) const { return points_[i]; }

  // Index of the cell whose center is closest to x (clamped to the grid).
  std::size_t cell_of(double x) const;

 private:
  std::vector<double> points_;
  double spacing_;
};

// Inner-product weights reducing the cost functions to dot products:
// a = theta^2 p dtheta, b = theta p dtheta, c = p dtheta.
struct MomentVectors {
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;
};

MomentVectors moment_vectors(const ParamGrid& grid);

void write_param_grid_csv(std::ostream& os, const ParamGrid& grid);
void write_obs_grid_csv(std::ostream& os, const ObsGrid& grid);

}  // namespace rjde

#endif  // RJDE_CORE_GRID_HPP_
