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

#ifndef RJDE_CORE_BAND_HPP_
#define RJDE_CORE_BAND_HPP_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "core/error.hpp"
#include "core/grid.hpp"

namespace rjde {

// Conditional densities p(x | H_i, theta_n) tabulated on an observation grid.
// Row n belongs to parameter value theta[n]; columns follow the ObsGrid.
class DensityFamily {
 public:
  DensityFamily() = default;
  DensityFamily(int hypothesis, std::vector<double> theta, std::size_t cols);
  DensityFamily(int hypothesis, std::vector<double> theta, std::size_t cols,
                std::vector<double> values);

  int hypothesis() const { return hypothesis_; }
  std::size_t rows() const { return theta_.size(); }
  std::size_t cols() const { return cols_; }
  std::span<const double> theta() const { return theta_; }

  std::span<double> row(std::size_t n) {
    return {values_.data() + n * cols_, cols_};
  }
  std::span<const double> row(std::size_t n) const {
    return {values_.data() + n * cols_, cols_};
  }
  double operator()(std::size_t n, std::size_t m) const {
    return values_[n * cols_ + m];
  }
  double& operator()(std::size_t n, std::size_t m) {
    return values_[n * cols_ + m];
  }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  DensityFamily scaled(double factor) const;

  // Largest |quadrature(row) - 1| over all rows.
  double max_normalization_error(double dx) const;

 private:
  int hypothesis_ = 0;
  std::vector<double> theta_;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

// Gaussian location family N(mean_n, sigma^2) on the grid; each row is
// rescaled so that its quadrature is exactly one.
DensityFamily gaussian_family(int hypothesis, std::span<const double> means,
                              double sigma, const ObsGrid& grid);

// Band uncertainty set lower <= p <= upper around a nominal family.
struct BandModel {
  DensityFamily lower;
  DensityFamily nominal;
  DensityFamily upper;

  // True when every row has lower == upper.
  bool degenerate() const;
};

// lower = c_lo * nominal, upper = c_hi * nominal. Requires
// 0 <= c_lo <= 1 <= c_hi; anything else cannot contain a density.
BandModel make_scaled_band(const DensityFamily& nominal, double c_lo,
                           double c_hi);

// Checks pointwise ordering and quad(lower) <= 1 <= quad(upper) per row.
void check_band(const BandModel& band, double dx);

// Raised when no normalizing constant exists for a projection.
class ProjectionError : public Error {
 public:
  explicit ProjectionError(const std::string& what)
      : Error(ErrorKind::kFeasibility, what) {}
};

struct Projection {
  std::vector<double> density;
  double gamma = 0.0;
};

// q(x) = median(lower(x), gamma * candidate(x), upper(x)) with gamma > 0
// chosen so that sum(q) * dx == 1. Throws ProjectionError when the band row
// cannot be normalized.
Projection clip_normalize(std::span<const double> candidate,
                          std::span<const double> lower,
                          std::span<const double> upper, double dx);

// Same as above writing into `out`; returns gamma.
double clip_normalize_into(std::span<const double> candidate,
                           std::span<const double> lower,
                           std::span<const double> upper, double dx,
                           std::span<double> out);

// Mass of median(lower, gamma * candidate, upper); exposed for tests.
double clipped_mass(std::span<const double> candidate,
                    std::span<const double> lower,
                    std::span<const double> upper, double dx, double gamma);

// One row per (theta, x) pair with columns theta, x, value.
void write_family_csv(std::ostream& os, const DensityFamily& family,
                      const ObsGrid& grid);
DensityFamily read_family_csv(std::istream& is, int hypothesis,
                              const ObsGrid& grid, const std::string& source);

}  // namespace rjde

#endif  // RJDE_CORE_BAND_HPP_
