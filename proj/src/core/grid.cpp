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

#include "core/grid.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "core/csv.hpp"
#include "core/error.hpp"

namespace rjde {

namespace {

constexpr double kSpacingRelTol = 1e-12;
constexpr double kPriorNormTol = 1e-8;

}  // namespace

ParamGrid::ParamGrid(std::vector<double> points, double spacing,
                     std::vector<double> prior)
    : ParamGrid(Unchecked{}, std::move(points), spacing, std::move(prior)) {
  double mass = 0.0;
  for (double p : prior_) mass += p * spacing_;
  require(std::abs(mass - 1.0) <= kPriorNormTol,
          "parameter prior does not integrate to one");
}

ParamGrid::ParamGrid(Unchecked, std::vector<double> points, double spacing,
                     std::vector<double> prior)
    : points_(std::move(points)), spacing_(spacing), prior_(std::move(prior)) {
  require(!points_.empty(), "parameter grid must not be empty");
  require(points_.size() == prior_.size(),
          "parameter grid points and prior differ in length");
  require(spacing_ > 0.0 && std::isfinite(spacing_),
          "parameter grid spacing must be positive");
  const double scale = std::max(
      spacing_, std::max(std::abs(points_.front()), std::abs(points_.back())));
  for (std::size_t n = 1; n < points_.size(); ++n) {
    const double step = points_[n] - points_[n - 1];
    require(step > 0.0, "parameter grid must be strictly increasing");
    require(std::abs(step - spacing_) <= kSpacingRelTol * scale,
            "parameter grid must be uniformly spaced");
  }
  for (double p : prior_) {
    require(p >= 0.0 && std::isfinite(p), "prior densities must be nonnegative");
  }
}

ParamGrid ParamGrid::scaled_prior(double factor) const {
  std::vector<double> prior(prior_);
  for (double& p : prior) p *= factor;
  return ParamGrid(Unchecked{}, points_, spacing_, std::move(prior));
}

ParamGrid build_uniform_param_grid(double lo, double hi, std::size_t n) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi,
          "parameter interval requires lo < hi");
  require(n >= 1, "parameter grid needs at least one point");
  const double spacing = (hi - lo) / static_cast<double>(n);
  std::vector<double> points(n);
  for (std::size_t k = 0; k < n; ++k) {
    points[k] = lo + (static_cast<double>(k) + 0.5) * spacing;
  }
  return ParamGrid(std::move(points), spacing,
                   std::vector<double>(n, 1.0 / (hi - lo)));
}

ParamGrid build_endpoint_param_grid(double lo, double hi, std::size_t n) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi,
          "parameter interval requires lo < hi");
  require(n >= 2, "endpoint parameter grid needs at least two points");
  const double spacing = (hi - lo) / static_cast<double>(n - 1);
  std::vector<double> points(n);
  for (std::size_t k = 0; k < n; ++k) {
    points[k] = lo + static_cast<double>(k) * spacing;
  }
  points.back() = hi;
  const double density = 1.0 / (static_cast<double>(n) * spacing);
  return ParamGrid(std::move(points), spacing,
                   std::vector<double>(n, density));
}

ParamGrid build_point_param_grid(double value) {
  require(std::isfinite(value), "parameter atom must be finite");
  return ParamGrid({value}, 1.0, {1.0});
}

ObsGrid::ObsGrid(double lo, double hi, std::size_t m) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi,
          "observation interval requires lo < hi");
  require(m >= 2, "observation grid needs at least two points");
  spacing_ = (hi - lo) / static_cast<double>(m - 1);
  points_.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    points_[k] = lo + static_cast<double>(k) * spacing_;
  }
  points_.back() = hi;
}

std::size_t ObsGrid::cell_of(double x) const {
  const double pos = (x - points_.front()) / spacing_;
  if (!(pos > 0.0)) return 0;
  const auto k = static_cast<std::size_t>(std::lround(pos));
  return std::min(k, points_.size() - 1);
}

MomentVectors moment_vectors(const ParamGrid& grid) {
  const std::size_t n = grid.size();
  MomentVectors mv{std::vector<double>(n), std::vector<double>(n),
                   std::vector<double>(n)};
  const auto theta = grid.points();
  const auto prior = grid.prior();
  for (std::size_t k = 0; k < n; ++k) {
    const double c = prior[k] * grid.spacing();
    mv.c[k] = c;
    mv.b[k] = theta[k] * c;
    mv.a[k] = theta[k] * theta[k] * c;
  }
  return mv;
}

void write_param_grid_csv(std::ostream& os, const ParamGrid& grid) {
  CsvWriter csv(os, {"theta", "prior_density"});
  for (std::size_t k = 0; k < grid.size(); ++k) {
    csv.row(grid.points()[k], grid.prior()[k]);
  }
}

void write_obs_grid_csv(std::ostream& os, const ObsGrid& grid) {
  CsvWriter csv(os, {"x"});
  for (double x : grid.points()) csv.row(x);
}

}  // namespace rjde
