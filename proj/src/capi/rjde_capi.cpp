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

#include "rjde.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "core/parallel.hpp"
#include "core/pipeline.hpp"

struct rjde_config {
  rjde::ConfigMap map;
};

struct rjde_run {
  rjde::RunSummary summary;
};

struct rjde_model {
  rjde::RunConfig rc;
  rjde::Model model;
};

struct rjde_policy {
  rjde::Policy policy;
};

namespace {

thread_local std::string g_last_error;

rjde_status to_status(rjde::ErrorKind kind) {
  switch (kind) {
    case rjde::ErrorKind::kInvalidArgument:
      return RJDE_ERR_INVALID_ARGUMENT;
    case rjde::ErrorKind::kConfig:
      return RJDE_ERR_CONFIG;
    case rjde::ErrorKind::kFeasibility:
      return RJDE_ERR_FEASIBILITY;
    case rjde::ErrorKind::kConvergence:
      return RJDE_ERR_CONVERGENCE;
    case rjde::ErrorKind::kIo:
      return RJDE_ERR_IO;
  }
  return RJDE_ERR_INTERNAL;
}

rjde_status set_error(rjde_status status, const char* msg) {
  g_last_error = msg;
  return status;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
rjde_status guarded(Fn&& fn) {
  try {
    fn();
    return RJDE_OK;
  } catch (const rjde::Error& e) {
    return set_error(to_status(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(RJDE_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(RJDE_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(RJDE_ERR_INTERNAL, "unknown error");
  }
}

#define RJDE_REQUIRE_ARG(cond, msg) \
  if (!(cond)) return set_error(RJDE_ERR_INVALID_ARGUMENT, msg)

template <typename Runner>
rjde_status run_pipeline(const rjde_config* cfg, rjde_run** out, Runner run) {
  RJDE_REQUIRE_ARG(cfg != nullptr && out != nullptr, "null argument");
  *out = nullptr;
  return guarded([&] {
    const rjde::RunConfig rc = cfg->map.resolve();
    auto* r = new rjde_run{run(rc)};
    *out = r;
  });
}

}  // namespace

extern "C" {

const char* rjde_version(void) { return "0.1.0"; }

const char* rjde_last_error(void) { return g_last_error.c_str(); }

const char* rjde_status_name(rjde_status status) {
  switch (status) {
    case RJDE_OK:
      return "ok";
    case RJDE_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case RJDE_ERR_CONFIG:
      return "config error";
    case RJDE_ERR_FEASIBILITY:
      return "feasibility error";
    case RJDE_ERR_CONVERGENCE:
      return "convergence error";
    case RJDE_ERR_IO:
      return "io error";
    case RJDE_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

rjde_status rjde_set_threads(unsigned threads) {
  rjde::set_thread_count(threads);
  return RJDE_OK;
}

rjde_status rjde_config_new(rjde_config** out) {
  RJDE_REQUIRE_ARG(out != nullptr, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new rjde_config{}; });
}

rjde_status rjde_config_load(const char* path, rjde_config** out) {
  RJDE_REQUIRE_ARG(path != nullptr && out != nullptr, "null argument");
  *out = nullptr;
  return guarded(
      [&] { *out = new rjde_config{rjde::ConfigMap::load(path)}; });
}

rjde_status rjde_config_parse(const char* text, rjde_config** out) {
  RJDE_REQUIRE_ARG(text != nullptr && out != nullptr, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new rjde_config{rjde::ConfigMap::parse(text, "<string>")};
  });
}

rjde_status rjde_config_set(rjde_config* cfg, const char* key,
                            const char* value) {
  RJDE_REQUIRE_ARG(cfg && key && value, "null argument");
  return guarded([&] { cfg->map.set(key, value); });
}

rjde_status rjde_config_get(const rjde_config* cfg, const char* key, char* buf,
                            size_t cap, size_t* needed) {
  RJDE_REQUIRE_ARG(cfg && key, "null argument");
  RJDE_REQUIRE_ARG(buf != nullptr || cap == 0, "null buffer with capacity");
  return guarded([&] {
    const std::string& v = cfg->map.get(key);
    if (needed) *needed = v.size() + 1;
    if (cap > 0) {
      const size_t n = v.size() < cap - 1 ? v.size() : cap - 1;
      std::memcpy(buf, v.data(), n);
      buf[n] = '\0';
    }
  });
}

rjde_status rjde_config_validate(const rjde_config* cfg) {
  RJDE_REQUIRE_ARG(cfg != nullptr, "null argument");
  return guarded([&] { (void)cfg->map.resolve(); });
}

void rjde_config_free(rjde_config* cfg) { delete cfg; }

rjde_status rjde_run_solve_bayes(const rjde_config* cfg, rjde_run** out) {
  return run_pipeline(cfg, out, rjde::run_solve_bayes);
}

rjde_status rjde_run_solve_np(const rjde_config* cfg, rjde_run** out) {
  return run_pipeline(cfg, out, rjde::run_solve_np);
}

rjde_status rjde_run_simulate(const rjde_config* cfg, rjde_run** out) {
  return run_pipeline(cfg, out, rjde::run_simulate);
}

rjde_status rjde_run_export_figures(const rjde_config* cfg, rjde_run** out) {
  return run_pipeline(cfg, out, rjde::export_figures);
}

size_t rjde_run_report_count(const rjde_run* run) {
  return run ? run->summary.report.size() : 0;
}

const char* rjde_run_report_line(const rjde_run* run, size_t i) {
  if (!run || i >= run->summary.report.size()) return nullptr;
  return run->summary.report[i].c_str();
}

size_t rjde_run_file_count(const rjde_run* run) {
  return run ? run->summary.files.size() : 0;
}

const char* rjde_run_file(const rjde_run* run, size_t i) {
  if (!run || i >= run->summary.files.size()) return nullptr;
  return run->summary.files[i].c_str();
}

size_t rjde_run_scenario_count(const rjde_run* run) {
  return run ? run->summary.scenarios.size() : 0;
}

rjde_status rjde_run_scenario(const rjde_run* run, size_t i,
                              rjde_scenario* out) {
  RJDE_REQUIRE_ARG(run && out, "null argument");
  RJDE_REQUIRE_ARG(i < run->summary.scenarios.size(),
                   "scenario index out of range");
  const auto& s = run->summary.scenarios[i];
  out->name = s.scenario.c_str();
  out->alpha0 = s.result.perf.alpha0;
  out->alpha1 = s.result.perf.alpha1;
  out->mse = s.result.perf.mse();
  out->j = s.result.perf.j_value;
  out->se_alpha0 = s.result.se_alpha0;
  out->se_alpha1 = s.result.se_alpha1;
  out->se_mse = s.result.se_mse;
  out->se_j = s.result.se_j;
  return RJDE_OK;
}

rjde_status rjde_run_lambda(const rjde_run* run, int which, double out[2]) {
  RJDE_REQUIRE_ARG(run && out, "null argument");
  RJDE_REQUIRE_ARG(which == 0 || which == 1, "which must be 0 or 1");
  const auto& l =
      which == 0 ? run->summary.nominal_lambda : run->summary.minimax_lambda;
  out[0] = l[0];
  out[1] = l[1];
  return RJDE_OK;
}

void rjde_run_free(rjde_run* run) { delete run; }

rjde_status rjde_model_new(const rjde_config* cfg, rjde_model** out) {
  RJDE_REQUIRE_ARG(cfg && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    rjde::RunConfig rc = cfg->map.resolve();
    rjde::Model model = rc.build_model();
    *out = new rjde_model{std::move(rc), std::move(model)};
  });
}

size_t rjde_model_obs_size(const rjde_model* model) {
  return model ? model->model.obs.size() : 0;
}

size_t rjde_model_theta_size(const rjde_model* model, int hypothesis) {
  if (!model || (hypothesis != 0 && hypothesis != 1)) return 0;
  return model->model.params[hypothesis].size();
}

rjde_status rjde_model_obs_grid(const rjde_model* model, double* out,
                                size_t n) {
  RJDE_REQUIRE_ARG(model && out, "null argument");
  RJDE_REQUIRE_ARG(n == model->model.obs.size(), "size mismatch");
  for (size_t m = 0; m < n; ++m) out[m] = model->model.obs[m];
  return RJDE_OK;
}

void rjde_model_free(rjde_model* model) { delete model; }

rjde_status rjde_policy_nominal(const rjde_model* model, const rjde_config* cfg,
                                rjde_policy** out) {
  RJDE_REQUIRE_ARG(model && cfg && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    rjde::ProblemConfig problem = cfg->map.resolve().problem;
    problem.mode = rjde::Formulation::kBayes;
    const auto& m = model->model;
    *out = new rjde_policy{rjde::build_policy(
        m.nominal_set(rjde::Formulation::kBayes), m, problem)};
  });
}

rjde_status rjde_policy_minimax(const rjde_model* model, const rjde_config* cfg,
                                rjde_policy** out) {
  RJDE_REQUIRE_ARG(model && cfg && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    const rjde::RunConfig rc = cfg->map.resolve();
    rjde::ProblemConfig problem = rc.problem;
    problem.mode = rjde::Formulation::kBayes;
    const auto sol = rjde::solve_lfd(model->model, problem, rc.solver);
    if (!sol.converged) rjde::fail(rjde::ErrorKind::kConvergence, sol.diagnostics);
    *out = new rjde_policy{
        rjde::build_policy(sol.families, model->model, problem)};
  });
}

size_t rjde_policy_size(const rjde_policy* policy) {
  return policy ? policy->policy.size() : 0;
}

rjde_status rjde_policy_column_values(const rjde_policy* policy,
                                      rjde_policy_column column, double* out,
                                      size_t n) {
  RJDE_REQUIRE_ARG(policy && out, "null argument");
  const rjde::Policy& p = policy->policy;
  RJDE_REQUIRE_ARG(n == p.size(), "size mismatch");
  const std::vector<double>* src = nullptr;
  switch (column) {
    case RJDE_POLICY_DELTA:
      src = &p.delta;
      break;
    case RJDE_POLICY_EST0:
      src = &p.est0;
      break;
    case RJDE_POLICY_EST1:
      src = &p.est1;
      break;
    case RJDE_POLICY_POSTVAR0:
      src = &p.postvar0;
      break;
    case RJDE_POLICY_POSTVAR1:
      src = &p.postvar1;
      break;
  }
  RJDE_REQUIRE_ARG(src != nullptr, "unknown policy column");
  std::memcpy(out, src->data(), n * sizeof(double));
  return RJDE_OK;
}

rjde_status rjde_policy_evaluate_nominal(const rjde_policy* policy,
                                         const rjde_model* model,
                                         rjde_performance* out) {
  RJDE_REQUIRE_ARG(policy && model && out, "null argument");
  return guarded([&] {
    const auto& m = model->model;
    const rjde::Performance perf = rjde::evaluate(
        policy->policy, m.nominal_set(rjde::Formulation::kBayes), m);
    *out = {perf.alpha0, perf.alpha1, perf.mse0, perf.mse1, perf.j_value};
  });
}

void rjde_policy_free(rjde_policy* policy) { delete policy; }

rjde_status rjde_softmin(double a, double b, double xi, double* out) {
  RJDE_REQUIRE_ARG(out != nullptr, "null argument");
  return guarded([&] { *out = rjde::softmin(a, b, xi); });
}

rjde_status rjde_clip_normalize(const double* candidate, const double* lower,
                                const double* upper, size_t n, double dx,
                                double* out, double* gamma) {
  RJDE_REQUIRE_ARG(candidate && lower && upper && out, "null argument");
  RJDE_REQUIRE_ARG(n > 0, "empty row");
  return guarded([&] {
    const double g = rjde::clip_normalize_into({candidate, n}, {lower, n},
                                               {upper, n}, dx, {out, n});
    if (gamma) *gamma = g;
  });
}

}  // extern "C"
