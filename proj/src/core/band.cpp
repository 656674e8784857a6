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

#include "core/band.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>

#include "core/csv.hpp"

namespace rjde {

DensityFamily::DensityFamily(int hypothesis, std::vector<double> theta,
                             std::size_t cols)
    : hypothesis_(hypothesis),
      theta_(std::move(theta)),
      cols_(cols),
      values_(theta_.size() * cols, 0.0) {}

DensityFamily::DensityFamily(int hypothesis, std::vector<double> theta,
                             std::size_t cols, std::vector<double> values)
    : hypothesis_(hypothesis),
      theta_(std::move(theta)),
      cols_(cols),
      values_(std::move(values)) {
  require(values_.size() == theta_.size() * cols_,
          "density family shape mismatch");
  for (double v : values_) {
    require(v >= 0.0 && std::isfinite(v), "densities must be nonnegative");
  }
}

DensityFamily DensityFamily::scaled(double factor) const {
  DensityFamily out(*this);
  for (double& v : out.values_) v *= factor;
  return out;
}

double DensityFamily::max_normalization_error(double dx) const {
  double worst = 0.0;
  for (std::size_t n = 0; n < rows(); ++n) {
    double mass = 0.0;
    for (double v : row(n)) mass += v;
    worst = std::max(worst, std::abs(mass * dx - 1.0));
  }
  return worst;
}

DensityFamily gaussian_family(int hypothesis, std::span<const double> means,
                              double sigma, const ObsGrid& grid) {
  require(sigma > 0.0 && std::isfinite(sigma), "sigma must be positive");
  DensityFamily fam(hypothesis, {means.begin(), means.end()}, grid.size());
  const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
  for (std::size_t n = 0; n < means.size(); ++n) {
    auto row = fam.row(n);
    double mass = 0.0;
    for (std::size_t m = 0; m < grid.size(); ++m) {
      const double z = (grid[m] - means[n]) / sigma;
      row[m] = norm * std::exp(-0.5 * z * z);
      mass += row[m];
    }
    mass *= grid.spacing();
    require(mass > 0.0, "gaussian row has no mass on the observation grid");
    for (double& v : row) v /= mass;
  }
  return fam;
}

bool BandModel::degenerate() const {
  const auto lo = lower.values();
  const auto hi = upper.values();
  return std::equal(lo.begin(), lo.end(), hi.begin());
}

BandModel make_scaled_band(const DensityFamily& nominal, double c_lo,
                           double c_hi) {
  if (!(c_lo >= 0.0 && c_lo <= 1.0 && c_hi >= 1.0 && std::isfinite(c_hi))) {
    fail(ErrorKind::kFeasibility,
         "band scaling requires 0 <= c_lo <= 1 <= c_hi (got c_lo=" +
             format_double(c_lo) + ", c_hi=" + format_double(c_hi) + ")");
  }
  return BandModel{nominal.scaled(c_lo), nominal, nominal.scaled(c_hi)};
}

void check_band(const BandModel& band, double dx) {
  constexpr double kTol = 1e-6;
  const auto& lo = band.lower;
  const auto& hi = band.upper;
  require(lo.rows() == hi.rows() && lo.cols() == hi.cols() &&
              band.nominal.rows() == lo.rows() &&
              band.nominal.cols() == lo.cols(),
          "band envelopes differ in shape");
  for (std::size_t n = 0; n < lo.rows(); ++n) {
    double mlo = 0.0, mhi = 0.0;
    for (std::size_t m = 0; m < lo.cols(); ++m) {
      const double l = lo(n, m), u = hi(n, m), p = band.nominal(n, m);
      if (!(l <= p && p <= u)) {
        fail(ErrorKind::kFeasibility, "band envelopes are not ordered");
      }
      mlo += l;
      mhi += u;
    }
    if (mlo * dx > 1.0 + kTol || mhi * dx < 1.0 - kTol) {
      fail(ErrorKind::kFeasibility,
           "band row " + std::to_string(n) + " contains no density");
    }
  }
}

double clipped_mass(std::span<const double> candidate,
                    std::span<const double> lower,
                    std::span<const double> upper, double dx, double gamma) {
  double mass = 0.0;
  for (std::size_t m = 0; m < candidate.size(); ++m) {
    mass += std::clamp(gamma * candidate[m], lower[m], upper[m]);
  }
  return mass * dx;
}

double clip_normalize_into(std::span<const double> candidate,
                           std::span<const double> lower,
                           std::span<const double> upper, double dx,
                           std::span<double> out) {
  const std::size_t size = candidate.size();
  require(lower.size() == size && upper.size() == size && out.size() == size,
          "clip_normalize: length mismatch");
  require(dx > 0.0, "clip_normalize: dx must be positive");

  // The reachable mass range is [quad(lower), quad(upper restricted to the
  // candidate's support)].
  double mass_lo = 0.0, mass_reach = 0.0;
  for (std::size_t m = 0; m < size; ++m) {
    if (!(candidate[m] >= 0.0) || !std::isfinite(candidate[m])) {
      throw ProjectionError("clip_normalize: candidate must be finite and >= 0");
    }
    mass_lo += lower[m];
    mass_reach += candidate[m] > 0.0 ? upper[m] : lower[m];
  }
  mass_lo *= dx;
  mass_reach *= dx;
  constexpr double kFeasTol = 1e-12;
  if (mass_lo > 1.0 + kFeasTol || mass_reach < 1.0 - kFeasTol) {
    throw ProjectionError("clip_normalize: no scaling normalizes the row");
  }

  // Safeguarded Newton on the piecewise-linear, nondecreasing mass(gamma).
  // [a, b] always brackets the root; a Newton step leaving it falls back to
  // bisection (geometric once both ends are positive).
  constexpr double kMassTol = 1e-14;
  double a = 0.0;
  double b = std::numeric_limits<double>::infinity();
  double gamma = 1.0;
  for (int iter = 0; iter < 400; ++iter) {
    double mass = 0.0, slope = 0.0;
    for (std::size_t m = 0; m < size; ++m) {
      const double v = gamma * candidate[m];
      if (v <= lower[m]) {
        mass += lower[m];
      } else if (v >= upper[m]) {
        mass += upper[m];
      } else {
        mass += v;
        slope += candidate[m];
      }
    }
    mass *= dx;
    slope *= dx;
    const double resid = 1.0 - mass;
    if (std::abs(resid) <= kMassTol) break;
    if (resid > 0.0) {
      a = gamma;
    } else {
      b = gamma;
    }
    if (std::isfinite(b) && b - a <= 1e-16 * b) break;
    double next = slope > 0.0 ? gamma + resid / slope
                              : std::numeric_limits<double>::quiet_NaN();
    if (!(next > a && next < b)) {
      if (!std::isfinite(b)) {
        next = 4.0 * gamma;
      } else if (a > 0.0) {
        next = std::sqrt(a * b);
      } else {
        next = 0.25 * b;
      }
      // Geometric steps can stall on a near-empty interval; halve instead.
      if (!(next > a && next < b)) next = 0.5 * (a + b);
    }
    gamma = next;
  }

  double mass = 0.0;
  for (std::size_t m = 0; m < size; ++m) {
    out[m] = std::clamp(gamma * candidate[m], lower[m], upper[m]);
    mass += out[m];
  }
  if (std::abs(mass * dx - 1.0) > 1e-10) {
    throw ProjectionError("clip_normalize: normalization did not converge");
  }
  return gamma;
}

Projection clip_normalize(std::span<const double> candidate,
                          std::span<const double> lower,
                          std::span<const double> upper, double dx) {
  Projection p;
  p.density.resize(candidate.size());
  p.gamma = clip_normalize_into(candidate, lower, upper, dx, p.density);
  return p;
}

void write_family_csv(std::ostream& os, const DensityFamily& family,
                      const ObsGrid& grid) {
  CsvWriter csv(os, {"theta", "x", "value"});
  for (std::size_t n = 0; n < family.rows(); ++n) {
    for (std::size_t m = 0; m < family.cols(); ++m) {
      csv.row(family.theta()[n], grid[m], family(n, m));
    }
  }
}

DensityFamily read_family_csv(std::istream& is, int hypothesis,
                              const ObsGrid& grid, const std::string& source) {
  const CsvTable table = read_csv(is, source);
  const std::size_t ct = table.column("theta");
  const std::size_t cv = table.column("value");
  const std::size_t cols = grid.size();
  if (table.rows.empty() || table.rows.size() % cols != 0) {
    fail(ErrorKind::kIo, "'" + source + "' does not match the observation grid");
  }
  const std::size_t rows = table.rows.size() / cols;
  std::vector<double> theta(rows), values(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    values[r] = table.number(r, cv);
    if (r % cols == 0) theta[r / cols] = table.number(r, ct);
  }
  return DensityFamily(hypothesis, std::move(theta), cols, std::move(values));
}

}  // namespace rjde
