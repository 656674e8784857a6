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

#ifndef RJDE_CORE_MODEL_HPP_
#define RJDE_CORE_MODEL_HPP_

#include <array>
#include <optional>

#include "core/band.hpp"
#include "core/cost.hpp"
#include "core/grid.hpp"

namespace rjde {

// The density families a policy is built from or evaluated against. Detection
// families feed error probabilities, estimation families feed the MSE terms.
// A Bayesian set has no separate estimation families.
struct FamilySet {
  std::array<DensityFamily, 2> det;
  std::optional<std::array<DensityFamily, 2>> est;

  static FamilySet bayes(DensityFamily f0, DensityFamily f1);
  static FamilySet np(DensityFamily d0, DensityFamily d1, DensityFamily e0,
                      DensityFamily e1);
  // Same data for both roles, split shape (used to evaluate NP policies).
  static FamilySet np_shared(const DensityFamily& f0, const DensityFamily& f1);

  bool split() const { return est.has_value(); }
  const DensityFamily& estimation(int i) const {
    return est ? (*est)[i] : det[i];
  }
  // Number of stored families: 2 (Bayes) or 4 (NP).
  std::size_t size() const { return split() ? 4 : 2; }
  // Families in storage order d0, d1[, e0, e1].
  const DensityFamily& at(std::size_t k) const;
  DensityFamily& at(std::size_t k);
};

// Discretized problem: grids, moment vectors and band uncertainty sets for
// both hypotheses.
struct Model {
  ObsGrid obs;
  std::array<ParamGrid, 2> params;
  HypothesisMoments moments;
  std::array<BandModel, 2> bands;

  double dx() const { return obs.spacing(); }
  std::array<DensityFamily, 2> nominal() const {
    return {bands[0].nominal, bands[1].nominal};
  }
  FamilySet nominal_set(Formulation mode) const;
};

// Acceptance costs and slice moments at every observation grid point.
struct PointwiseCosts {
  std::vector<double> d0;
  std::vector<double> d1;
  std::array<std::vector<SliceMoments>, 2> det;
  std::array<std::vector<SliceMoments>, 2> est;
};

std::vector<SliceMoments> family_moments(const DensityFamily& family,
                                         const MomentVectors& mv);

PointwiseCosts pointwise_costs(const FamilySet& families,
                               const HypothesisMoments& mv,
                               const ProblemConfig& cfg);

// Quadrature of rho over the observation grid.
double similarity(const PointwiseCosts& costs, const Smoothing& smoothing,
                  double dx);

Model make_model(ObsGrid obs, ParamGrid h0, ParamGrid h1,
                 std::array<BandModel, 2> bands);

// H0: X ~ N(mean0, sigma^2); H1: X ~ N(theta, sigma^2) with theta on the
// given grid. Both bands are c_lo/c_hi multiples of the nominal densities.
struct GaussianShiftSpec {
  double mean0 = 0.0;
  double sigma = 1.0;
  double c_lo = 0.8;
  double c_hi = 1.2;
};

Model make_gaussian_shift_model(const GaussianShiftSpec& spec, ObsGrid obs,
                                ParamGrid theta_grid);

}  // namespace rjde

#endif  // RJDE_CORE_MODEL_HPP_
