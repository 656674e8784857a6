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

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "core/band.hpp"
#include "doctest.h"
#include "test_util.hpp"

namespace rjde {
namespace {

DensityFamily standard_normal_row(const ObsGrid& grid) {
  const std::vector<double> mean{0.0};
  return gaussian_family(0, mean, 1.0, grid);
}

double quad(std::span<const double> row, double dx) {
  double s = 0.0;
  for (double v : row) s += v;
  return s * dx;
}

TEST_CASE("unit scaling collapses the band") {
  const ObsGrid grid(-8.0, 8.0, 801);
  const BandModel band = make_scaled_band(standard_normal_row(grid), 1.0, 1.0);
  CHECK(band.degenerate());
  check_band(band, grid.spacing());
}

TEST_CASE("scaled band integrals") {
  const ObsGrid grid(-8.0, 8.0, 801);
  const BandModel band = make_scaled_band(standard_normal_row(grid), 0.8, 1.2);
  CHECK(std::abs(quad(band.lower.row(0), grid.spacing()) - 0.8) < 1e-6);
  CHECK(std::abs(quad(band.upper.row(0), grid.spacing()) - 1.2) < 1e-6);
  CHECK_FALSE(band.degenerate());
  check_band(band, grid.spacing());
}

TEST_CASE("infeasible scalings are rejected") {
  const ObsGrid grid(-8.0, 8.0, 101);
  const DensityFamily f = standard_normal_row(grid);
  for (auto [lo, hi] : {std::pair{1.1, 1.2}, std::pair{0.8, 0.9},
                        std::pair{-0.1, 1.2}}) {
    try {
      make_scaled_band(f, lo, hi);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kFeasibility);
    }
  }
}

TEST_CASE("gaussian rows are normalized and match the density") {
  const ObsGrid grid(-8.0, 14.0, 2201);
  const std::vector<double> means{1.0, 3.5, 6.0};
  const DensityFamily f = gaussian_family(1, means, 1.0, grid);
  CHECK(f.max_normalization_error(grid.spacing()) < 1e-12);
  for (std::size_t n = 0; n < means.size(); ++n) {
    CHECK(f(n, 900) == doctest::Approx(testing::normal_pdf(grid[900], means[n]))
                           .epsilon(1e-6));
  }
}

TEST_CASE("projection of an in-band density is the identity") {
  const ObsGrid grid(-8.0, 8.0, 801);
  const BandModel band = make_scaled_band(standard_normal_row(grid), 0.8, 1.2);
  const Projection p = clip_normalize(band.nominal.row(0), band.lower.row(0),
                                      band.upper.row(0), grid.spacing());
  CHECK(p.gamma == doctest::Approx(1.0).epsilon(1e-10));
  for (std::size_t m = 0; m < grid.size(); ++m) {
    CHECK(std::abs(p.density[m] - band.nominal(0, m)) < 1e-10);
  }
}

TEST_CASE("degenerate band projects onto its envelope") {
  const std::vector<double> env{0.2, 0.5, 0.3};
  const std::vector<double> cand{9.0, 0.1, 4.0};
  const Projection p = clip_normalize(cand, env, env, 1.0);
  for (std::size_t m = 0; m < 3; ++m) CHECK(p.density[m] == doctest::Approx(env[m]));
}

TEST_CASE("three bin projection matches a brute-force gamma scan") {
  const std::vector<double> lower{0.1, 0.1, 0.1}, upper{0.6, 0.6, 0.6};
  const std::vector<double> cand{1.0, 2.0, 7.0};
  const Projection p = clip_normalize(cand, lower, upper, 1.0);

  // Oracle: scan gamma on a fine grid and keep the point closest to unit mass.
  double best_gamma = 0.0, best_err = 1e300;
  for (int k = 1; k <= 2000000; ++k) {
    const double g = k * 5e-7;
    double mass = 0.0;
    for (int m = 0; m < 3; ++m) mass += std::clamp(g * cand[m], lower[m], upper[m]);
    if (std::abs(mass - 1.0) < best_err) {
      best_err = std::abs(mass - 1.0);
      best_gamma = g;
    }
  }
  CHECK(best_err < 1e-6);
  CHECK(std::abs(p.gamma - best_gamma) < 1e-6);
  CHECK(p.gamma == doctest::Approx(2.0 / 15.0).epsilon(1e-10));
  CHECK(p.density[0] == doctest::Approx(2.0 / 15.0).epsilon(1e-10));
  CHECK(p.density[1] == doctest::Approx(4.0 / 15.0).epsilon(1e-10));
  CHECK(p.density[2] == doctest::Approx(0.6).epsilon(1e-10));
}

TEST_CASE("projection with infeasible envelopes throws") {
  const std::vector<double> lower{0.5, 0.6}, upper{0.9, 0.9};
  const std::vector<double> cand{1.0, 1.0};
  CHECK_THROWS_AS(clip_normalize(cand, lower, upper, 1.0), ProjectionError);
}

TEST_CASE("clipped mass is nondecreasing in gamma on random rows") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> cand(30), lower(30), upper(30);
    for (int m = 0; m < 30; ++m) {
      cand[m] = u(rng) + 1e-3;
      lower[m] = 0.5 * u(rng) / 30.0;
      upper[m] = lower[m] + 3.0 * u(rng) / 30.0;
    }
    double prev = -1.0;
    for (double g = 1e-3; g < 1e3; g *= 1.1) {
      const double mass = clipped_mass(cand, lower, upper, 1.0, g);
      CHECK(mass >= prev - 1e-15);
      prev = mass;
    }
  }
}

TEST_CASE("projection is invariant to rescaling the candidate") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> cand(40), lower(40), upper(40);
  for (int m = 0; m < 40; ++m) {
    cand[m] = u(rng) + 0.01;
    lower[m] = 0.5 / 40.0;
    upper[m] = 2.0 / 40.0;
  }
  const Projection p = clip_normalize(cand, lower, upper, 1.0);
  std::vector<double> scaled(cand);
  for (double& v : scaled) v *= 37.5;
  const Projection q = clip_normalize(scaled, lower, upper, 1.0);
  CHECK(quad(p.density, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
  for (int m = 0; m < 40; ++m) CHECK(std::abs(p.density[m] - q.density[m]) < 1e-12);
  CHECK(q.gamma * 37.5 == doctest::Approx(p.gamma).epsilon(1e-10));
}

TEST_CASE("family CSV round trip") {
  const ObsGrid grid(-2.0, 2.0, 5);
  const std::vector<double> means{0.0, 1.0};
  const DensityFamily f = gaussian_family(1, means, 1.0, grid);
  std::stringstream ss;
  write_family_csv(ss, f, grid);
  const DensityFamily g = read_family_csv(ss, 1, grid, "mem");
  REQUIRE(g.rows() == 2);
  for (std::size_t n = 0; n < 2; ++n) {
    for (std::size_t m = 0; m < 5; ++m) CHECK(g(n, m) == doctest::Approx(f(n, m)));
  }
}

}  // namespace
}  // namespace rjde
