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

#include "core/model.hpp"

#include <utility>

namespace rjde {

FamilySet FamilySet::bayes(DensityFamily f0, DensityFamily f1) {
  return FamilySet{{std::move(f0), std::move(f1)}, std::nullopt};
}

FamilySet FamilySet::np(DensityFamily d0, DensityFamily d1, DensityFamily e0,
                        DensityFamily e1) {
  return FamilySet{{std::move(d0), std::move(d1)},
                   std::array<DensityFamily, 2>{std::move(e0), std::move(e1)}};
}

FamilySet FamilySet::np_shared(const DensityFamily& f0,
                               const DensityFamily& f1) {
  return np(f0, f1, f0, f1);
}

const DensityFamily& FamilySet::at(std::size_t k) const {
  require(k < size(), "family index out of range");
  return k < 2 ? det[k] : (*est)[k - 2];
}

DensityFamily& FamilySet::at(std::size_t k) {
  require(k < size(), "family index out of range");
  return k < 2 ? det[k] : (*est)[k - 2];
}

FamilySet Model::nominal_set(Formulation mode) const {
  if (mode == Formulation::kBayes) {
    return FamilySet::bayes(bands[0].nominal, bands[1].nominal);
  }
  return FamilySet::np_shared(bands[0].nominal, bands[1].nominal);
}

std::vector<SliceMoments> family_moments(const DensityFamily& family,
                                         const MomentVectors& mv) {
  require(family.rows() == mv.c.size(),
          "family rows do not match the moment vectors");
  std::vector<SliceMoments> out(family.cols());
  for (std::size_t n = 0; n < family.rows(); ++n) {
    const double a = mv.a[n], b = mv.b[n], c = mv.c[n];
    const auto row = family.row(n);
    for (std::size_t m = 0; m < row.size(); ++m) {
      out[m].a += a * row[m];
      out[m].b += b * row[m];
      out[m].c += c * row[m];
    }
  }
  return out;
}

PointwiseCosts pointwise_costs(const FamilySet& families,
                               const HypothesisMoments& mv,
                               const ProblemConfig& cfg) {
  PointwiseCosts pc;
  for (int i = 0; i < 2; ++i) {
    pc.det[i] = family_moments(families.det[i], mv[i]);
    pc.est[i] = families.split() ? family_moments(families.estimation(i), mv[i])
                                 : pc.det[i];
  }
  const std::size_t cols = pc.det[0].size();
  require(pc.det[1].size() == cols, "families differ in observation grid");
  pc.d0.resize(cols);
  pc.d1.resize(cols);
  for (std::size_t m = 0; m < cols; ++m) {
    pc.d0[m] = accept_cost(0, pc.det[1][m], pc.est[0][m], cfg);
    pc.d1[m] = accept_cost(1, pc.det[0][m], pc.est[1][m], cfg);
  }
  return pc;
}

double similarity(const PointwiseCosts& costs, const Smoothing& smoothing,
                  double dx) {
  double total = 0.0;
  for (std::size_t m = 0; m < costs.d0.size(); ++m) {
    total += rho_from_costs(costs.d0[m], costs.d1[m], smoothing);
  }
  return total * dx;
}

Model make_model(ObsGrid obs, ParamGrid h0, ParamGrid h1,
                 std::array<BandModel, 2> bands) {
  for (int i = 0; i < 2; ++i) {
    const ParamGrid& g = i == 0 ? h0 : h1;
    require(bands[i].nominal.rows() == g.size(),
            "band rows do not match the parameter grid");
    require(bands[i].nominal.cols() == obs.size(),
            "band columns do not match the observation grid");
    check_band(bands[i], obs.spacing());
  }
  HypothesisMoments mv{moment_vectors(h0), moment_vectors(h1)};
  return Model{std::move(obs), {std::move(h0), std::move(h1)}, std::move(mv),
               std::move(bands)};
}

Model make_gaussian_shift_model(const GaussianShiftSpec& spec, ObsGrid obs,
                                ParamGrid theta_grid) {
  const double mean0[] = {spec.mean0};
  DensityFamily f0 = gaussian_family(0, mean0, spec.sigma, obs);
  DensityFamily f1 = gaussian_family(1, theta_grid.points(), spec.sigma, obs);
  std::array<BandModel, 2> bands{make_scaled_band(f0, spec.c_lo, spec.c_hi),
                                 make_scaled_band(f1, spec.c_lo, spec.c_hi)};
  return make_model(std::move(obs), build_point_param_grid(spec.mean0),
                    std::move(theta_grid), std::move(bands));
}

}  // namespace rjde
