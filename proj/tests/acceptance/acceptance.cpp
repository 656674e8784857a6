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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails. Artifacts go to argv[1] (default
// "acceptance_out").

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/lfd_solver.hpp"
#include "core/pipeline.hpp"
#include "test_util.hpp"

namespace rjde {
namespace {

namespace fs = std::filesystem;

// Collects failed sub-checks of one criterion.
class Criterion {
 public:
  Criterion(int id, std::string title) : id_(id), title_(std::move(title)) {}

  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) failures_.push_back(what);
  }
  void near(double got, double want, double tol, const std::string& what) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s: got %.4f, want %.4f +- %.4g", what.c_str(),
                  got, want, tol);
    expect(std::abs(got - want) <= tol, buf);
  }
  void note(const std::string& line) { notes_.push_back(line); }

  bool report() const {
    const bool ok = failures_.empty();
    std::printf("%s criterion %d: %s (%zu checks)\n", ok ? "PASS" : "FAIL", id_,
                title_.c_str(), checks_);
    for (const auto& n : notes_) std::printf("    %s\n", n.c_str());
    for (const auto& f : failures_) std::printf("    failed: %s\n", f.c_str());
    std::fflush(stdout);
    return ok;
  }

 private:
  int id_;
  std::string title_;
  std::size_t checks_ = 0;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

struct Row {
  double j, alpha0, alpha1, mse;
};

ConfigMap bayes_config(const fs::path& dir) {
  ConfigMap cfg;
  cfg.set("output.dir", dir.string());
  return cfg;
}

ConfigMap np_config(const fs::path& dir) {
  ConfigMap cfg;
  cfg.set("band.c_hi", "1.5");
  cfg.set("cost.mu1", "1");
  cfg.set("cost.alpha0_max", "0.05");
  cfg.set("cost.alpha1_max", "0.3");
  cfg.set("output.dir", dir.string());
  return cfg;
}

const ScenarioResult* find(const RunSummary& s, const std::string& name) {
  for (const auto& r : s.scenarios) {
    if (r.scenario == name) return &r;
  }
  return nullptr;
}

void check_table(Criterion& c, const RunSummary& mc,
                 const std::vector<std::pair<std::string, Row>>& table,
                 double tol) {
  for (const auto& [name, want] : table) {
    const ScenarioResult* r = find(mc, name);
    c.expect(r != nullptr, "missing scenario " + name);
    if (!r) continue;
    const Performance& p = r->result.perf;
    char line[200];
    std::snprintf(line, sizeof line,
                  "%-15s J %.4f  alpha0 %.4f  alpha1 %.4f  mse %.4f", name.c_str(),
                  p.j_value, p.alpha0, p.alpha1, p.mse());
    c.note(line);
    c.near(p.j_value, want.j, tol, name + " J");
    c.near(p.alpha0, want.alpha0, tol, name + " alpha0");
    c.near(p.alpha1, want.alpha1, tol, name + " alpha1");
    c.near(p.mse(), want.mse, tol, name + " mse");
  }
}

// Quadrature and Monte Carlo agree within four standard errors. A zero
// empirical error count has zero empirical SE, so the binomial SE of the
// quadrature value is used as a floor.
void check_mc(Criterion& c, const RunSummary& quad, const RunSummary& mc) {
  for (const auto& q : quad.scenarios) {
    const ScenarioResult* r = find(mc, q.scenario);
    c.expect(r != nullptr, "missing scenario " + q.scenario);
    if (!r) continue;
    const SimResult& s = r->result;
    const Performance& a = q.result.perf;
    const Performance& b = s.perf;
    auto se_floor = [](double p, std::uint64_t n) {
      return n == 0 ? 0.0 : std::sqrt(std::max(0.0, p * (1.0 - p)) / n);
    };
    const double se0 = std::max(s.se_alpha0, se_floor(a.alpha0, s.per_hypothesis[0]));
    const double se1 = std::max(s.se_alpha1, se_floor(a.alpha1, s.per_hypothesis[1]));
    c.near(b.alpha0, a.alpha0, 4 * se0, q.scenario + " alpha0");
    c.near(b.alpha1, a.alpha1, 4 * se1, q.scenario + " alpha1");
    c.near(b.mse(), a.mse(), 4 * s.se_mse, q.scenario + " mse");
    c.near(b.j_value, a.j_value, 4 * s.se_j, q.scenario + " J");
    char line[200];
    std::snprintf(line, sizeof line, "%-15s |dJ|/se %.2f", q.scenario.c_str(),
                  std::abs(b.j_value - a.j_value) / s.se_j);
    c.note(line);
  }
}

DensityFamily load(const fs::path& dir, const std::string& name, int h,
                   const ObsGrid& grid) {
  std::ifstream in(dir / name);
  return read_family_csv(in, h, grid, name);
}

Policy load_policy(const fs::path& dir, const std::string& name,
                   const ObsGrid& grid, const ProblemConfig& cfg) {
  std::ifstream in(dir / name);
  Policy p = read_policy_csv(in, grid, name);
  p.cfg = cfg;
  return p;
}

// J(pi*, p) <= J(pi*, q) for random band members p, and the nominal-optimal
// rule does no better than pi* against q.
void check_saddle(Criterion& c, const std::string& label, const Model& model,
                  const FamilySet& q, const Policy& minimax, const Policy& nominal,
                  bool split, std::uint64_t seed) {
  const double j_q = evaluate(minimax, q, model).j_value;
  std::mt19937_64 rng(seed);
  double worst = -1e300;
  for (int trial = 0; trial < 20; ++trial) {
    auto draw = [&](int h) {
      return testing::random_band_family(model.bands[h], model.dx(), rng);
    };
    const FamilySet p = split ? FamilySet::np(draw(0), draw(1), draw(0), draw(1))
                              : FamilySet::bayes(draw(0), draw(1));
    worst = std::max(worst, evaluate(minimax, p, model).j_value - j_q);
  }
  const double j_nominal_q = evaluate(nominal, q, model).j_value;
  char line[200];
  std::snprintf(line, sizeof line,
                "%s: max J(pi*,p) - J(pi*,q) = %.3g, J(pi_nom,q) - J(pi*,q) = %.3g",
                label.c_str(), worst, j_nominal_q - j_q);
  c.note(line);
  c.expect(worst <= 1e-6, label + " random band member beats the LFD");
  c.expect(j_nominal_q >= j_q - 1e-6, label + " nominal rule beats minimax on q");
}

bool kernel_suite(Criterion& c) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  auto vec = [&](std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
  };
  const HypothesisMoments mv{
      moment_vectors(ParamGrid({-1.0, 0.0, 1.0}, 1.0, {0.2, 0.5, 0.3})),
      moment_vectors(ParamGrid({2.0, 3.0, 4.0}, 1.0, {0.3, 0.3, 0.4}))};
  for (Formulation mode : {Formulation::kBayes, Formulation::kNeymanPearson}) {
    ProblemConfig cfg;
    cfg.prior = {0.4, 0.6};
    cfg.det_cost = {0.7, 1.3};
    cfg.est_cost = {0.5, 1.1};
    cfg.mode = mode;
    auto slice = [&] {
      return mode == Formulation::kBayes
                 ? SliceState::bayes(vec(3), vec(3))
                 : SliceState::np(vec(3), vec(3), vec(3), vec(3));
    };
    const Smoothing hard = Smoothing::hard();
    int concave_fail = 0, homog_fail = 0, grad_fail = 0, zero_fail = 0;
    for (int k = 0; k < 100; ++k) {
      const SliceState a = slice(), b = slice();
      const double ra = rho(a, mv, cfg, hard), rb = rho(b, mv, cfg, hard);
      if (std::abs(rho(a.scaled(3.0), mv, cfg, hard) - 3.0 * ra) > 1e-10) ++homog_fail;
      SliceState mid = a.scaled(0.5);
      const SliceState half_b = b.scaled(0.5);
      for (int j = 0; j < 2; ++j) {
        for (std::size_t n = 0; n < 3; ++n) mid.det[j][n] += half_b.det[j][n];
        if (mid.split()) {
          for (std::size_t n = 0; n < 3; ++n) (*mid.est)[j][n] += (*half_b.est)[j][n];
        }
      }
      if (rho(mid, mv, cfg, hard) < 0.5 * (ra + rb) - 1e-10) ++concave_fail;

      const auto d = accept_costs(a, mv, cfg);
      if (std::abs(d[0] - d[1]) < 0.05 * std::max(d[0], d[1])) continue;
      const SliceState g = rho_gradient(a, mv, cfg, hard);
      const int win = d[0] <= d[1] ? 0 : 1;
      if (mode == Formulation::kNeymanPearson) {
        for (double v : g.det[win]) zero_fail += v != 0.0;
        for (double v : (*g.est)[1 - win]) zero_fail += v != 0.0;
      }
      for (int blk = 0; blk < (a.split() ? 2 : 1); ++blk) {
        for (int j = 0; j < 2; ++j) {
          for (std::size_t n = 0; n < 3; ++n) {
            SliceState up = a, dn = a;
            auto& vu = blk == 0 ? up.det[j][n] : (*up.est)[j][n];
            auto& vd = blk == 0 ? dn.det[j][n] : (*dn.est)[j][n];
            vu += 1e-6;
            vd -= 1e-6;
            const double fd = (rho(up, mv, cfg, hard) - rho(dn, mv, cfg, hard)) / 2e-6;
            const double an = blk == 0 ? g.det[j][n] : (*g.est)[j][n];
            if (std::abs(fd - an) > 1e-5 * std::max(1.0, std::abs(fd))) ++grad_fail;
          }
        }
      }
    }
    const std::string m = mode == Formulation::kBayes ? "bayes" : "np";
    c.expect(homog_fail == 0, m + " homogeneity");
    c.expect(concave_fail == 0, m + " concavity");
    c.expect(grad_fail == 0, m + " finite-difference gradient");
    c.expect(zero_fail == 0, m + " zero gradient blocks");
  }

  const std::vector<double> lower{0.1, 0.1, 0.1}, upper{0.6, 0.6, 0.6};
  const std::vector<double> cand{1.0, 2.0, 7.0};
  const Projection p = clip_normalize(cand, lower, upper, 1.0);
  double best_gamma = 0.0, best_err = 1e300;
  for (int k = 1; k <= 1000000; ++k) {
    const double gm = k * 1e-6;
    double mass = 0.0;
    for (int i = 0; i < 3; ++i) mass += std::clamp(gm * cand[i], lower[i], upper[i]);
    if (std::abs(mass - 1.0) < best_err) {
      best_err = std::abs(mass - 1.0);
      best_gamma = gm;
    }
  }
  c.near(p.gamma, best_gamma, 2e-6, "3-bin projection gamma");

  const testing::Toy toy = testing::toy_problem();
  SolverConfig solver;
  solver.max_iters = 3000;
  const LfdSolution sol = solve_lfd(toy.model, toy.cfg, solver);
  c.near(sol.objective, testing::toy_brute_force(), 1e-3, "toy LFD objective");
  return true;
}

int run(const fs::path& base) {
  bool all = true;
  const fs::path bayes_dir = base / "bayes", np_dir = base / "np";

  // Bayesian pipeline: quadrature, 1e5-run and 1e6-run Monte Carlo.
  const ConfigMap bcfg = bayes_config(bayes_dir);
  const RunSummary b_quad = run_solve_bayes(bcfg.resolve());
  ConfigMap b_small = bcfg;
  b_small.set("simulation.runs", "100000");
  const RunSummary b_mc5 = run_simulate(b_small.resolve());
  const RunSummary b_mc6 = run_simulate(bcfg.resolve());

  // NP pipeline.
  const ConfigMap ncfg = np_config(np_dir);
  const RunSummary n_quad = run_solve_np(ncfg.resolve());
  ConfigMap n_small = ncfg;
  n_small.set("simulation.runs", "100000");
  const RunSummary n_mc5 = run_simulate(n_small.resolve());
  const RunSummary n_mc6 = run_simulate(ncfg.resolve());

  {
    Criterion c(1, "Bayesian table at 1e6 runs within 0.02");
    check_table(c, b_mc6,
                {{"opt_p", {0.417, 0.033, 0.305, 0.446}},
                 {"opt_q", {0.466, 0.038, 0.322, 0.533}},
                 {"minimax_p", {0.427, 0.000, 0.672, 0.171}},
                 {"minimax_q", {0.446, 0.000, 0.688, 0.190}}},
                0.02);
    all &= c.report();
  }
  {
    Criterion c(2, "NP table at 1e6 runs within 0.025, binding levels");
    check_table(c, n_mc6,
                {{"opt_p", {0.378, 0.050, 0.305, 0.455}},
                 {"opt_qD", {0.419, 0.074, 0.357, 0.477}},
                 {"opt_qD0_qE", {0.459, 0.074, 0.291, 0.617}},
                 {"minimax_p", {0.422, 0.033, 0.257, 0.511}},
                 {"minimax_qD", {0.470, 0.050, 0.305, 0.540}},
                 {"minimax_qD0_qE", {0.501, 0.050, 0.233, 0.690}}},
                0.025);
    if (const auto* r = find(n_mc6, "opt_p")) {
      c.near(r->result.perf.alpha0, 0.050, 0.003, "opt_p alpha0");
    }
    if (const auto* r = find(n_mc6, "minimax_qD")) {
      c.near(r->result.perf.alpha0, 0.050, 0.003, "minimax_qD alpha0");
      c.near(r->result.perf.alpha1, 0.305, 0.01, "minimax_qD alpha1");
    }
    all &= c.report();
  }
  {
    Criterion c(3, "NP cost coefficients");
    const auto& ln = n_quad.nominal_lambda;
    const auto& lm = n_quad.minimax_lambda;
    char line[160];
    std::snprintf(line, sizeof line, "nominal (%.4f, %.4f), minimax (%.4f, %.4f)",
                  ln[0], ln[1], lm[0], lm[1]);
    c.note(line);
    c.expect(ln[0] >= 0.47 && ln[0] <= 0.57, "nominal lambda0 in [0.47, 0.57]");
    c.expect(ln[1] >= 0.85 && ln[1] <= 0.95, "nominal lambda1 in [0.85, 0.95]");
    c.expect(lm[0] >= 0.55 && lm[0] <= 0.67, "minimax lambda0 in [0.55, 0.67]");
    c.expect(lm[1] >= 1.16 && lm[1] <= 1.30, "minimax lambda1 in [1.16, 1.30]");
    all &= c.report();
  }
  {
    Criterion c(4, "saddle point property, both formulations");
    const RunConfig brc = bcfg.resolve();
    const Model bm = brc.build_model();
    const FamilySet bq = FamilySet::bayes(load(bayes_dir, "lfd_h0.csv", 0, bm.obs),
                                          load(bayes_dir, "lfd_h1.csv", 1, bm.obs));
    ProblemConfig bp = brc.problem;
    check_saddle(c, "bayes", bm, bq,
                 load_policy(bayes_dir, "policy.csv", bm.obs, bp),
                 load_policy(bayes_dir, "policy_nominal.csv", bm.obs, bp), false, 43);

    const RunConfig nrc = ncfg.resolve();
    const Model nm = nrc.build_model();
    const FamilySet nq = FamilySet::np(load(np_dir, "lfd_d_h0.csv", 0, nm.obs),
                                       load(np_dir, "lfd_d_h1.csv", 1, nm.obs),
                                       load(np_dir, "lfd_e_h0.csv", 0, nm.obs),
                                       load(np_dir, "lfd_e_h1.csv", 1, nm.obs));
    ProblemConfig np = nrc.problem;
    np.mode = Formulation::kNeymanPearson;
    np.det_cost = n_quad.minimax_lambda;
    check_saddle(c, "np", nm, nq, load_policy(np_dir, "policy.csv", nm.obs, np),
                 load_policy(np_dir, "policy_nominal.csv", nm.obs, np), true, 47);
    all &= c.report();
  }
  {
    Criterion c(5, "kernel correctness suite under 10 s");
    const auto t0 = std::chrono::steady_clock::now();
    kernel_suite(c);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.note("elapsed " + std::to_string(secs) + " s");
    c.expect(secs < 10.0, "kernel suite exceeded 10 s");
    all &= c.report();
  }
  {
    Criterion c(6, "policy identity and nominal decision boundary");
    const RunConfig rc = bcfg.resolve();
    const Model model = rc.build_model();
    const FamilySet f = model.nominal_set(Formulation::kBayes);
    const Policy p = build_policy(f, model, rc.problem);
    const PointwiseCosts pc = pointwise_costs(f, model.moments, rc.problem);
    double total = 0.0;
    for (std::size_t m = 0; m < pc.d0.size(); ++m) total += std::min(pc.d0[m], pc.d1[m]);
    total *= model.dx();
    c.near(evaluate(p, f, model).j_value, total, 1e-8, "J vs integrated min cost");
    std::size_t last_zero = 0;
    for (std::size_t m = 0; m < p.size(); ++m) {
      if (p.delta[m] < 0.5) last_zero = m;
    }
    const double x = 0.5 * (model.obs[last_zero] + model.obs[last_zero + 1]);
    c.near(x, 3.75, 0.05, "final switch to H1");
    all &= c.report();
  }
  {
    Criterion c(7, "Monte Carlo vs quadrature within 4 SE at 1e5 runs");
    check_mc(c, b_quad, b_mc5);
    check_mc(c, n_quad, n_mc5);
    all &= c.report();
  }
  return all ? 0 : 1;
}

}  // namespace
}  // namespace rjde

int main(int argc, char** argv) {
  const std::filesystem::path base = argc > 1 ? argv[1] : "acceptance_out";
  try {
    return rjde::run(base);
  } catch (const std::exception& e) {
    std::printf("FAIL acceptance run aborted: %s\n", e.what());
    return 1;
  }
}
