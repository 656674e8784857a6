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

#include "core/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "core/csv.hpp"
#include "core/parallel.hpp"

namespace rjde {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void SimSpec::validate() const {
  if (runs == 0) fail(ErrorKind::kConfig, "simulation.runs must be at least 1");
}

namespace {

std::vector<double> cumulative(std::span<const double> w) {
  std::vector<double> cdf(w.size());
  double total = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    total += w[k];
    cdf[k] = total;
  }
  require(total > 0.0, "cannot sample from a zero-mass distribution");
  for (double& v : cdf) v /= total;
  cdf.back() = 1.0;
  return cdf;
}

std::size_t locate(const std::vector<double>& cdf, double u) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1);
}

class Sampler {
 public:
  Sampler(const std::array<DensityFamily, 2>& data, const Model& model,
          const ProblemConfig& cfg)
      : model_(model), p0_(cfg.prior[0]) {
    for (int i = 0; i < 2; ++i) {
      require(data[i].rows() == model.params[i].size() &&
                  data[i].cols() == model.obs.size(),
              "data family does not match the model grids");
      prior_cdf_[i] = cumulative(model.moments[i].c);
      rows_[i].reserve(data[i].rows());
      for (std::size_t n = 0; n < data[i].rows(); ++n) {
        rows_[i].push_back(cumulative(data[i].row(n)));
      }
    }
  }

  Draw draw(std::mt19937_64& rng) const {
    Draw d;
    const double u_h = uniform(rng);
    const double u_theta = uniform(rng);
    const double u_x = uniform(rng);
    d.u_decision = uniform(rng);
    d.hypothesis = u_h < p0_ ? 0 : 1;
    const int i = d.hypothesis;
    d.theta_index = locate(prior_cdf_[i], u_theta);
    d.theta = model_.params[i].points()[d.theta_index];
    const auto& cdf = rows_[i][d.theta_index];
    d.cell = locate(cdf, u_x);
    // Uniform within the cell: the fractional position of u_x in its bin.
    const double below = d.cell == 0 ? 0.0 : cdf[d.cell - 1];
    const double width = cdf[d.cell] - below;
    const double frac =
        width > 0.0 ? std::clamp((u_x - below) / width, 0.0, 1.0) : 0.5;
    d.x = model_.obs[d.cell] + (frac - 0.5) * model_.dx();
    return d;
  }

 private:
  static double uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  }

  const Model& model_;
  double p0_;
  std::array<std::vector<double>, 2> prior_cdf_;
  std::array<std::vector<std::vector<double>>, 2> rows_;
};

std::mt19937_64 block_rng(std::uint64_t seed, std::uint64_t block) {
  return std::mt19937_64(splitmix64(seed + (block + 1) * 0x9e3779b97f4a7c15ULL));
}

struct Sums {
  std::array<double, 2> n{0.0, 0.0};
  std::array<double, 2> wrong{0.0, 0.0};
  std::array<double, 2> est{0.0, 0.0};
  std::array<double, 2> est_sq{0.0, 0.0};
  std::array<double, 2> z{0.0, 0.0};
  std::array<double, 2> z_sq{0.0, 0.0};

  void add(const Sums& o) {
    for (int i = 0; i < 2; ++i) {
      n[i] += o.n[i];
      wrong[i] += o.wrong[i];
      est[i] += o.est[i];
      est_sq[i] += o.est_sq[i];
      z[i] += o.z[i];
      z_sq[i] += o.z_sq[i];
    }
  }
};

}  // namespace

std::vector<Draw> sample(const SimSpec& spec,
                         const std::array<DensityFamily, 2>& data,
                         const Model& model, const ProblemConfig& cfg,
                         std::size_t count) {
  const Sampler sampler(data, model, cfg);
  std::vector<Draw> out;
  out.reserve(count);
  for (std::uint64_t b = 0; out.size() < count; ++b) {
    auto rng = block_rng(spec.seed, b);
    for (std::size_t r = 0; r < kBlockSize && out.size() < count; ++r) {
      out.push_back(sampler.draw(rng));
    }
  }
  return out;
}

SimResult estimate(const SimSpec& spec, const Policy& policy,
                   const std::array<DensityFamily, 2>& data,
                   const Model& model, const ProblemConfig& cfg) {
  spec.validate();
  require(policy.size() == model.obs.size(),
          "policy does not match the observation grid");
  const Sampler sampler(data, model, cfg);
  const ProblemConfig& costs = policy.cfg;
  const std::uint64_t blocks = (spec.runs + kBlockSize - 1) / kBlockSize;
  std::vector<Sums> partial(blocks);

  parallel_for(0, blocks, [&](std::size_t b) {
    auto rng = block_rng(spec.seed, b);
    const std::uint64_t begin = b * kBlockSize;
    const std::uint64_t end = std::min<std::uint64_t>(begin + kBlockSize, spec.runs);
    Sums s;
    for (std::uint64_t r = begin; r < end; ++r) {
      const Draw d = sampler.draw(rng);
      const int i = d.hypothesis;
      const bool accept1 = d.u_decision < policy.delta[d.cell];
      const bool correct = accept1 == (i == 1);
      double sq = 0.0;
      if (correct) {
        const double est = i == 0 ? policy.est0[d.cell] : policy.est1[d.cell];
        sq = (est - d.theta) * (est - d.theta);
      }
      const double wrong = correct ? 0.0 : 1.0;
      const double z = costs.det_cost[i] * wrong + costs.est_cost[i] * sq;
      s.n[i] += 1.0;
      s.wrong[i] += wrong;
      s.est[i] += sq;
      s.est_sq[i] += sq * sq;
      s.z[i] += z;
      s.z_sq[i] += z * z;
    }
    partial[b] = s;
  });

  Sums total;
  for (const Sums& s : partial) total.add(s);

  SimResult res;
  res.runs = spec.runs;
  std::array<double, 2> alpha{0.0, 0.0}, mse{0.0, 0.0}, jz{0.0, 0.0};
  std::array<double, 2> se_alpha{0.0, 0.0};
  double var_mse = 0.0, var_j = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double n = total.n[i];
    res.per_hypothesis[i] = static_cast<std::uint64_t>(n);
    if (n == 0.0) continue;
    alpha[i] = total.wrong[i] / n;
    se_alpha[i] = std::sqrt(alpha[i] * (1.0 - alpha[i]) / n);
    mse[i] = total.est[i] / n;
    jz[i] = total.z[i] / n;
    const double v_est = std::max(0.0, total.est_sq[i] / n - mse[i] * mse[i]);
    const double v_z = std::max(0.0, total.z_sq[i] / n - jz[i] * jz[i]);
    var_mse += v_est / n;
    var_j += cfg.prior[i] * cfg.prior[i] * v_z / n;
  }
  res.perf.alpha0 = alpha[0];
  res.perf.alpha1 = alpha[1];
  res.perf.mse0 = mse[0];
  res.perf.mse1 = mse[1];
  res.perf.j_value = cfg.prior[0] * jz[0] + cfg.prior[1] * jz[1];
  res.se_alpha0 = se_alpha[0];
  res.se_alpha1 = se_alpha[1];
  res.se_mse = std::sqrt(var_mse);
  res.se_j = std::sqrt(var_j);
  return res;
}

void write_results_csv(std::ostream& os,
                       const std::vector<ScenarioResult>& rows) {
  CsvWriter csv(os, {"scenario", "alpha0", "alpha1", "mse", "j", "se_alpha0",
                     "se_alpha1", "se_mse", "se_j"});
  for (const auto& r : rows) {
    const SimResult& s = r.result;
    csv.row(r.scenario, s.perf.alpha0, s.perf.alpha1, s.perf.mse(),
            s.perf.j_value, s.se_alpha0, s.se_alpha1, s.se_mse, s.se_j);
  }
}

}  // namespace rjde
