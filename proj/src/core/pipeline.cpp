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

#include "core/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "core/csv.hpp"

namespace rjde {

namespace {

namespace fs = std::filesystem;

using Manifest = std::map<std::string, std::string>;

class ArtifactWriter {
 public:
  ArtifactWriter(const std::string& dir, RunSummary& summary)
      : dir_(dir), summary_(summary) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) {
      fail(ErrorKind::kIo,
           "cannot create output directory '" + dir + "': " + ec.message());
    }
  }

  void write(const std::string& name,
             const std::function<void(std::ostream&)>& body) {
    const fs::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::kIo, "cannot write '" + path.string() + "'");
    body(out);
    out.flush();
    if (!out) fail(ErrorKind::kIo, "error writing '" + path.string() + "'");
    summary_.files.push_back(path.string());
  }

 private:
  fs::path dir_;
  RunSummary& summary_;
};

std::string layout_name(ThetaLayout l) {
  return l == ThetaLayout::kEndpoint ? "endpoint" : "midpoint";
}

// Keys that tie artifacts to the grids they were computed on.
Manifest grid_manifest(const RunConfig& rc) {
  return {
      {"model.mean0", format_double(rc.model.mean0)},
      {"model.sigma", format_double(rc.model.sigma)},
      {"model.theta_lo", format_double(rc.theta_lo)},
      {"model.theta_hi", format_double(rc.theta_hi)},
      {"grids.n_theta", std::to_string(rc.n_theta)},
      {"grids.theta_layout", layout_name(rc.theta_layout)},
      {"grids.m_x", std::to_string(rc.m_x)},
      {"grids.x_lo", format_double(rc.x_lo)},
      {"grids.x_hi", format_double(rc.x_hi)},
  };
}

void write_manifest(std::ostream& os, const Manifest& m) {
  for (const auto& [k, v] : m) os << k << " = " << v << "\n";
}

fs::path artifact(const RunConfig& rc, const std::string& name) {
  const fs::path p = fs::path(rc.output_dir) / name;
  if (!fs::exists(p)) {
    fail(ErrorKind::kIo, "missing artifact '" + p.string() +
                             "'; run solve-bayes or solve-np first");
  }
  return p;
}

std::ifstream open_artifact(const RunConfig& rc, const std::string& name) {
  const fs::path p = artifact(rc, name);
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot read '" + p.string() + "'");
  return in;
}

Manifest read_manifest(const RunConfig& rc) {
  std::ifstream in = open_artifact(rc, "manifest.txt");
  Manifest m;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    m[line.substr(0, eq)] = line.substr(eq + 3);
  }
  for (const auto& [k, v] : grid_manifest(rc)) {
    auto it = m.find(k);
    if (it == m.end() || it->second != v) {
      fail(ErrorKind::kConfig,
           "artifacts in '" + rc.output_dir + "' were produced with " + k +
               " = " + (it == m.end() ? "<missing>" : it->second) +
               ", config has " + v);
    }
  }
  return m;
}

double manifest_number(const Manifest& m, const std::string& key) {
  auto it = m.find(key);
  if (it == m.end()) fail(ErrorKind::kIo, "manifest lacks '" + key + "'");
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    fail(ErrorKind::kIo, "manifest value for '" + key + "' is not a number");
  }
}

Formulation manifest_mode(const Manifest& m) {
  auto it = m.find("formulation");
  if (it == m.end()) fail(ErrorKind::kIo, "manifest lacks 'formulation'");
  if (it->second == "bayes") return Formulation::kBayes;
  if (it->second == "np") return Formulation::kNeymanPearson;
  fail(ErrorKind::kIo, "unknown formulation '" + it->second + "' in manifest");
}

DensityFamily load_family(const RunConfig& rc, const Model& model,
                          const std::string& name, int hyp) {
  std::ifstream in = open_artifact(rc, name);
  DensityFamily f = read_family_csv(in, hyp, model.obs, name);
  const auto want = model.params[hyp].points();
  const auto got = f.theta();
  bool match = got.size() == want.size();
  for (std::size_t n = 0; match && n < got.size(); ++n) {
    match = std::abs(got[n] - want[n]) <= 1e-9 * std::max(1.0, std::abs(want[n]));
  }
  if (!match) {
    fail(ErrorKind::kIo, "'" + name + "' does not match the parameter grid");
  }
  return f;
}

Policy load_policy(const RunConfig& rc, const Model& model,
                   const std::string& name, const ProblemConfig& cfg) {
  std::ifstream in = open_artifact(rc, name);
  Policy p = read_policy_csv(in, model.obs, name);
  p.cfg = cfg;
  return p;
}

void write_performance_csv(std::ostream& os,
                           const std::vector<ScenarioResult>& rows) {
  CsvWriter csv(os, {"scenario", "alpha0", "alpha1", "mse0", "mse1", "mse",
                     "j"});
  for (const auto& r : rows) {
    const Performance& p = r.result.perf;
    csv.row(r.scenario, p.alpha0, p.alpha1, p.mse0, p.mse1, p.mse(),
            p.j_value);
  }
}

void write_families_csv(std::ostream& os,
                        const std::vector<std::string>& names,
                        const std::vector<const DensityFamily*>& families,
                        const ObsGrid& grid) {
  CsvWriter csv(os, {"family", "theta", "x", "value"});
  for (std::size_t k = 0; k < families.size(); ++k) {
    const DensityFamily& f = *families[k];
    for (std::size_t n = 0; n < f.rows(); ++n) {
      for (std::size_t m = 0; m < f.cols(); ++m) {
        csv.row(names[k], f.theta()[n], grid[m], f(n, m));
      }
    }
  }
}

ScenarioResult quadrature(const std::string& name, const Policy& policy,
                          const FamilySet& eval, const Model& model) {
  ScenarioResult r;
  r.scenario = name;
  r.result.perf = evaluate(policy, eval, model);
  return r;
}

std::string describe(const ScenarioResult& r) {
  const Performance& p = r.result.perf;
  std::ostringstream ss;
  ss << r.scenario << ": alpha0 " << format_double(p.alpha0) << ", alpha1 "
     << format_double(p.alpha1) << ", mse " << format_double(p.mse())
     << ", J " << format_double(p.j_value);
  return ss.str();
}

void write_common(ArtifactWriter& out, const Model& model, const LfdSolution& sol) {
  out.write("nominal_h0.csv", [&](std::ostream& os) {
    write_family_csv(os, model.bands[0].nominal, model.obs);
  });
  out.write("nominal_h1.csv", [&](std::ostream& os) {
    write_family_csv(os, model.bands[1].nominal, model.obs);
  });
  out.write("theta_grid_h0.csv", [&](std::ostream& os) {
    write_param_grid_csv(os, model.params[0]);
  });
  out.write("theta_grid_h1.csv", [&](std::ostream& os) {
    write_param_grid_csv(os, model.params[1]);
  });
  out.write("x_grid.csv",
            [&](std::ostream& os) { write_obs_grid_csv(os, model.obs); });
  out.write("trace.csv",
            [&](std::ostream& os) { write_trace_csv(os, sol.trace); });
}

}  // namespace

RunSummary run_solve_bayes(const RunConfig& rc) {
  RunSummary summary;
  summary.mode = Formulation::kBayes;
  const Model model = rc.build_model();
  ProblemConfig problem = rc.problem;
  problem.mode = Formulation::kBayes;

  const LfdSolution sol = solve_lfd(model, problem, rc.solver);
  const FamilySet nominal = model.nominal_set(Formulation::kBayes);
  const Policy opt = build_policy(nominal, model, problem);
  const Policy minimax = build_policy(sol.families, model, problem);
  summary.nominal_lambda = summary.minimax_lambda = problem.det_cost;
  summary.scenarios = {
      quadrature("opt_p", opt, nominal, model),
      quadrature("opt_q", opt, sol.families, model),
      quadrature("minimax_p", minimax, nominal, model),
      quadrature("minimax_q", minimax, sol.families, model),
  };

  ArtifactWriter out(rc.output_dir, summary);
  out.write("lfd_h0.csv", [&](std::ostream& os) {
    write_family_csv(os, sol.families.det[0], model.obs);
  });
  out.write("lfd_h1.csv", [&](std::ostream& os) {
    write_family_csv(os, sol.families.det[1], model.obs);
  });
  out.write("lfds.csv", [&](std::ostream& os) {
    write_families_csv(os, {"h0", "h1"},
                       {&sol.families.det[0], &sol.families.det[1]}, model.obs);
  });
  out.write("policy.csv", [&](std::ostream& os) {
    write_policy_csv(os, minimax, model.obs);
  });
  out.write("policy_nominal.csv", [&](std::ostream& os) {
    write_policy_csv(os, opt, model.obs);
  });
  out.write("performance.csv", [&](std::ostream& os) {
    write_performance_csv(os, summary.scenarios);
  });
  write_common(out, model, sol);

  Manifest m = grid_manifest(rc);
  m["formulation"] = "bayes";
  m["model.prior0"] = format_double(problem.prior[0]);
  m["nominal.lambda0"] = m["minimax.lambda0"] = format_double(problem.det_cost[0]);
  m["nominal.lambda1"] = m["minimax.lambda1"] = format_double(problem.det_cost[1]);
  m["cost.mu0"] = format_double(problem.est_cost[0]);
  m["cost.mu1"] = format_double(problem.est_cost[1]);
  m["lfd.iterations"] = std::to_string(sol.iterations);
  m["lfd.resets"] = std::to_string(sol.resets);
  m["lfd.converged"] = sol.converged ? "1" : "0";
  out.write("manifest.txt", [&](std::ostream& os) { write_manifest(os, m); });

  summary.report.push_back("LFD solve: " + std::to_string(sol.iterations) +
                           " iterations, " + std::to_string(sol.resets) +
                           " resets, similarity " + format_double(sol.objective));
  for (const auto& s : summary.scenarios) summary.report.push_back(describe(s));
  if (!sol.converged) fail(ErrorKind::kConvergence, sol.diagnostics);
  return summary;
}

RunSummary run_solve_np(const RunConfig& rc) {
  RunSummary summary;
  summary.mode = Formulation::kNeymanPearson;
  const Model model = rc.build_model();
  ProblemConfig problem = rc.problem;
  problem.mode = Formulation::kNeymanPearson;

  const CoefficientSearchResult nominal_design =
      design_nominal_np(model, problem, rc.np);
  const NpDesignResult mm = design_minimax_np(model, problem, rc.solver, rc.np);
  const FamilySet& q = mm.solution.families;
  const FamilySet nominal = model.nominal_set(Formulation::kNeymanPearson);
  const FamilySet q_d = FamilySet::np_shared(q.det[0], q.det[1]);
  const FamilySet q_de = FamilySet::np_shared(q.det[0], q.estimation(1));
  summary.nominal_lambda = nominal_design.lambda;
  summary.minimax_lambda = mm.lambda;
  const Policy& opt = nominal_design.policy;
  summary.scenarios = {
      quadrature("opt_p", opt, nominal, model),
      quadrature("opt_qD", opt, q_d, model),
      quadrature("opt_qD0_qE", opt, q_de, model),
      quadrature("minimax_p", mm.policy, nominal, model),
      quadrature("minimax_qD", mm.policy, q_d, model),
      quadrature("minimax_qD0_qE", mm.policy, q_de, model),
  };

  ArtifactWriter out(rc.output_dir, summary);
  const std::vector<std::string> names = {"d_h0", "d_h1", "e_h0", "e_h1"};
  std::vector<const DensityFamily*> fams;
  for (std::size_t k = 0; k < 4; ++k) {
    fams.push_back(&q.at(k));
    out.write("lfd_" + names[k] + ".csv", [&](std::ostream& os) {
      write_family_csv(os, q.at(k), model.obs);
    });
  }
  out.write("lfds.csv", [&](std::ostream& os) {
    write_families_csv(os, names, fams, model.obs);
  });
  out.write("policy.csv", [&](std::ostream& os) {
    write_policy_csv(os, mm.policy, model.obs);
  });
  out.write("policy_nominal.csv", [&](std::ostream& os) {
    write_policy_csv(os, opt, model.obs);
  });
  out.write("performance.csv", [&](std::ostream& os) {
    write_performance_csv(os, summary.scenarios);
  });
  out.write("np_trace.csv",
            [&](std::ostream& os) { write_np_trace_csv(os, mm.trace); });
  write_common(out, model, mm.solution);

  auto constraint = [&](const char* label, double achieved, double level,
                        double lambda) {
    const bool binding = std::abs(achieved - level) <= 1e-9;
    return std::string(label) + " " + format_double(achieved) + " (max " +
           format_double(level) + ", " +
           (lambda > 0.0 ? (binding ? "binding" : "not binding")
                         : "slack, lambda = 0") +
           ")";
  };
  summary.report = {
      "feasibility: " + mm.feasibility.message,
      "nominal lambda: " + format_double(nominal_design.lambda[0]) + ", " +
          format_double(nominal_design.lambda[1]),
      "minimax lambda: " + format_double(mm.lambda[0]) + ", " +
          format_double(mm.lambda[1]),
      "nominal design under p: " +
          constraint("alpha0", nominal_design.achieved.alpha0,
                     problem.alpha_max[0], nominal_design.lambda[0]) +
          ", " +
          constraint("alpha1", nominal_design.achieved.alpha1,
                     problem.alpha_max[1], nominal_design.lambda[1]),
      "minimax design under qD: " +
          constraint("alpha0", mm.achieved.alpha0, problem.alpha_max[0],
                     mm.lambda[0]) +
          ", " +
          constraint("alpha1", mm.achieved.alpha1, problem.alpha_max[1],
                     mm.lambda[1]),
      "outer iterations: " + std::to_string(mm.trace.size()) +
          (mm.converged ? " (converged)" : " (not converged)"),
  };
  for (const auto& s : summary.scenarios) summary.report.push_back(describe(s));
  out.write("report.txt", [&](std::ostream& os) {
    for (const auto& line : summary.report) os << line << "\n";
  });

  Manifest m = grid_manifest(rc);
  m["formulation"] = "np";
  m["model.prior0"] = format_double(problem.prior[0]);
  m["nominal.lambda0"] = format_double(nominal_design.lambda[0]);
  m["nominal.lambda1"] = format_double(nominal_design.lambda[1]);
  m["minimax.lambda0"] = format_double(mm.lambda[0]);
  m["minimax.lambda1"] = format_double(mm.lambda[1]);
  m["cost.mu0"] = format_double(problem.est_cost[0]);
  m["cost.mu1"] = format_double(problem.est_cost[1]);
  m["cost.alpha0_max"] = format_double(problem.alpha_max[0]);
  m["cost.alpha1_max"] = format_double(problem.alpha_max[1]);
  m["np.outer_iterations"] = std::to_string(mm.trace.size());
  m["np.converged"] = mm.converged ? "1" : "0";
  out.write("manifest.txt", [&](std::ostream& os) { write_manifest(os, m); });

  if (!mm.converged) fail(ErrorKind::kConvergence, mm.diagnostics);
  return summary;
}

RunSummary run_simulate(const RunConfig& rc) {
  rc.simulation.validate();
  const Manifest m = read_manifest(rc);
  RunSummary summary;
  summary.mode = manifest_mode(m);
  const Model model = rc.build_model();

  ProblemConfig base = rc.problem;
  base.mode = summary.mode;
  base.prior = {manifest_number(m, "model.prior0"),
                1.0 - manifest_number(m, "model.prior0")};
  base.est_cost = {manifest_number(m, "cost.mu0"),
                   manifest_number(m, "cost.mu1")};
  ProblemConfig opt_cfg = base, mm_cfg = base;
  opt_cfg.det_cost = {manifest_number(m, "nominal.lambda0"),
                      manifest_number(m, "nominal.lambda1")};
  mm_cfg.det_cost = {manifest_number(m, "minimax.lambda0"),
                     manifest_number(m, "minimax.lambda1")};
  summary.nominal_lambda = opt_cfg.det_cost;
  summary.minimax_lambda = mm_cfg.det_cost;
  const Policy opt = load_policy(rc, model, "policy_nominal.csv", opt_cfg);
  const Policy mm = load_policy(rc, model, "policy.csv", mm_cfg);

  using Data = std::array<DensityFamily, 2>;
  const Data p = model.nominal();
  std::vector<std::pair<std::string, std::pair<const Policy*, Data>>> runs;
  if (summary.mode == Formulation::kBayes) {
    const Data q = {load_family(rc, model, "lfd_h0.csv", 0),
                    load_family(rc, model, "lfd_h1.csv", 1)};
    runs = {{"opt_p", {&opt, p}},
            {"opt_q", {&opt, q}},
            {"minimax_p", {&mm, p}},
            {"minimax_q", {&mm, q}}};
  } else {
    const DensityFamily d0 = load_family(rc, model, "lfd_d_h0.csv", 0);
    const DensityFamily d1 = load_family(rc, model, "lfd_d_h1.csv", 1);
    const DensityFamily e1 = load_family(rc, model, "lfd_e_h1.csv", 1);
    const Data q_d = {d0, d1}, q_de = {d0, e1};
    runs = {{"opt_p", {&opt, p}},          {"opt_qD", {&opt, q_d}},
            {"opt_qD0_qE", {&opt, q_de}},  {"minimax_p", {&mm, p}},
            {"minimax_qD", {&mm, q_d}},    {"minimax_qD0_qE", {&mm, q_de}}};
  }
  // Every scenario uses the same stream (common random numbers).
  for (const auto& [name, job] : runs) {
    ScenarioResult r;
    r.scenario = name;
    r.result = estimate(rc.simulation, *job.first, job.second, model, base);
    summary.scenarios.push_back(r);
    summary.report.push_back(describe(r));
  }
  ArtifactWriter out(rc.output_dir, summary);
  out.write("results.csv", [&](std::ostream& os) {
    write_results_csv(os, summary.scenarios);
  });
  return summary;
}

RunSummary export_figures(const RunConfig& rc) {
  const Manifest m = read_manifest(rc);
  RunSummary summary;
  summary.mode = manifest_mode(m);
  const Model model = rc.build_model();
  const Policy opt = load_policy(rc, model, "policy_nominal.csv", rc.problem);
  const Policy mm = load_policy(rc, model, "policy.csv", rc.problem);

  std::vector<std::pair<std::string, DensityFamily>> lfds;
  if (summary.mode == Formulation::kBayes) {
    lfds = {{"h0", load_family(rc, model, "lfd_h0.csv", 0)},
            {"h1", load_family(rc, model, "lfd_h1.csv", 1)}};
  } else {
    lfds = {{"d_h0", load_family(rc, model, "lfd_d_h0.csv", 0)},
            {"d_h1", load_family(rc, model, "lfd_d_h1.csv", 1)},
            {"e_h0", load_family(rc, model, "lfd_e_h0.csv", 0)},
            {"e_h1", load_family(rc, model, "lfd_e_h1.csv", 1)}};
  }

  // Parameter rows nearest the ends and the middle of each grid.
  auto picks = [](const ParamGrid& g) {
    std::vector<std::size_t> idx = {0, g.size() / 2, g.size() - 1};
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return idx;
  };

  ArtifactWriter out(rc.output_dir, summary);
  out.write("fig_lfd.csv", [&](std::ostream& os) {
    CsvWriter csv(os, {"family", "theta", "x", "nominal", "lfd"});
    for (const auto& [name, fam] : lfds) {
      const int hyp = fam.hypothesis();
      const DensityFamily& nom = model.bands[hyp].nominal;
      for (std::size_t n : picks(model.params[hyp])) {
        for (std::size_t k = 0; k < model.obs.size(); ++k) {
          csv.row(name, fam.theta()[n], model.obs[k], nom(n, k), fam(n, k));
        }
      }
    }
  });
  out.write("fig_policy.csv", [&](std::ostream& os) {
    CsvWriter csv(os, {"x", "delta_nominal", "delta_minimax", "est1_nominal",
                       "est1_minimax", "postvar1_nominal",
                       "postvar1_minimax"});
    for (std::size_t k = 0; k < model.obs.size(); ++k) {
      csv.row(model.obs[k], opt.delta[k], mm.delta[k], opt.est1[k],
              mm.est1[k], opt.postvar1[k], mm.postvar1[k]);
    }
  });
  summary.report.push_back("figure data written to " + rc.output_dir);
  return summary;
}

}  // namespace rjde
