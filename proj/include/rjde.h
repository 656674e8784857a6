/* Copyright 2026 The robustjde Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the robust joint detection and estimation library.
 *
 * Every function returns an rjde_status. On failure, rjde_last_error()
 * returns a message for the calling thread that stays valid until the next
 * failing call on that thread. Handles are opaque and must be released with
 * the matching *_free function; passing NULL to a *_free function is a no-op.
 */

#ifndef RJDE_H_
#define RJDE_H_

#include <stddef.h>

#if defined(_WIN32)
#define RJDE_API __declspec(dllexport)
#else
#define RJDE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rjde_status {
  RJDE_OK = 0,
  RJDE_ERR_INVALID_ARGUMENT = 1,
  RJDE_ERR_CONFIG = 2,
  RJDE_ERR_FEASIBILITY = 3,
  RJDE_ERR_CONVERGENCE = 4,
  RJDE_ERR_IO = 5,
  RJDE_ERR_INTERNAL = 6
} rjde_status;

typedef struct rjde_config rjde_config;
typedef struct rjde_run rjde_run;
typedef struct rjde_model rjde_model;
typedef struct rjde_policy rjde_policy;

typedef struct rjde_performance {
  double alpha0;
  double alpha1;
  double mse0;
  double mse1;
  double j;
} rjde_performance;

typedef struct rjde_scenario {
  const char* name; /* owned by the run handle */
  double alpha0;
  double alpha1;
  double mse;
  double j;
  /* Standard errors; zero for quadrature results. */
  double se_alpha0;
  double se_alpha1;
  double se_mse;
  double se_j;
} rjde_scenario;

typedef enum rjde_policy_column {
  RJDE_POLICY_DELTA = 0,
  RJDE_POLICY_EST0 = 1,
  RJDE_POLICY_EST1 = 2,
  RJDE_POLICY_POSTVAR0 = 3,
  RJDE_POLICY_POSTVAR1 = 4
} rjde_policy_column;

RJDE_API const char* rjde_version(void);
RJDE_API const char* rjde_last_error(void);
RJDE_API const char* rjde_status_name(rjde_status status);

/* Worker threads for solver and simulation; 0 selects the hardware count. */
RJDE_API rjde_status rjde_set_threads(unsigned threads);

/* Configuration. */
RJDE_API rjde_status rjde_config_new(rjde_config** out);
RJDE_API rjde_status rjde_config_load(const char* path, rjde_config** out);
RJDE_API rjde_status rjde_config_parse(const char* text, rjde_config** out);
RJDE_API rjde_status rjde_config_set(rjde_config* cfg, const char* key,
                                     const char* value);
/* Copies the value into buf (NUL-terminated, truncated to cap). *needed, if
 * non-NULL, receives the full length including the terminator. */
RJDE_API rjde_status rjde_config_get(const rjde_config* cfg, const char* key,
                                     char* buf, size_t cap, size_t* needed);
/* Checks every value without running anything. */
RJDE_API rjde_status rjde_config_validate(const rjde_config* cfg);
RJDE_API void rjde_config_free(rjde_config* cfg);

/* Pipeline runs writing artifacts to output.dir. */
RJDE_API rjde_status rjde_run_solve_bayes(const rjde_config* cfg,
                                          rjde_run** out);
RJDE_API rjde_status rjde_run_solve_np(const rjde_config* cfg, rjde_run** out);
RJDE_API rjde_status rjde_run_simulate(const rjde_config* cfg, rjde_run** out);
RJDE_API rjde_status rjde_run_export_figures(const rjde_config* cfg,
                                             rjde_run** out);
RJDE_API size_t rjde_run_report_count(const rjde_run* run);
RJDE_API const char* rjde_run_report_line(const rjde_run* run, size_t i);
RJDE_API size_t rjde_run_file_count(const rjde_run* run);
RJDE_API const char* rjde_run_file(const rjde_run* run, size_t i);
RJDE_API size_t rjde_run_scenario_count(const rjde_run* run);
RJDE_API rjde_status rjde_run_scenario(const rjde_run* run, size_t i,
                                       rjde_scenario* out);
/* which = 0: nominal design, 1: minimax design. */
RJDE_API rjde_status rjde_run_lambda(const rjde_run* run, int which,
                                     double out[2]);
RJDE_API void rjde_run_free(rjde_run* run);

/* Model built from the model, band and grids sections of a config. */
RJDE_API rjde_status rjde_model_new(const rjde_config* cfg, rjde_model** out);
RJDE_API size_t rjde_model_obs_size(const rjde_model* model);
RJDE_API size_t rjde_model_theta_size(const rjde_model* model, int hypothesis);
RJDE_API rjde_status rjde_model_obs_grid(const rjde_model* model, double* out,
                                         size_t n);
RJDE_API void rjde_model_free(rjde_model* model);

/* Bayes-optimal policy for the nominal densities and the config's costs. */
RJDE_API rjde_status rjde_policy_nominal(const rjde_model* model,
                                         const rjde_config* cfg,
                                         rjde_policy** out);
/* Bayes-optimal policy for the least favorable densities. */
RJDE_API rjde_status rjde_policy_minimax(const rjde_model* model,
                                         const rjde_config* cfg,
                                         rjde_policy** out);
RJDE_API size_t rjde_policy_size(const rjde_policy* policy);
RJDE_API rjde_status rjde_policy_column_values(const rjde_policy* policy,
                                               rjde_policy_column column,
                                               double* out, size_t n);
/* Quadrature performance under the nominal densities. */
RJDE_API rjde_status rjde_policy_evaluate_nominal(const rjde_policy* policy,
                                                  const rjde_model* model,
                                                  rjde_performance* out);
RJDE_API void rjde_policy_free(rjde_policy* policy);

/* Kernels. */
RJDE_API rjde_status rjde_softmin(double a, double b, double xi, double* out);
/* q = median(lower, gamma * candidate, upper) with sum(q) * dx = 1. */
RJDE_API rjde_status rjde_clip_normalize(const double* candidate,
                                         const double* lower,
                                         const double* upper, size_t n,
                                         double dx, double* out,
                                         double* gamma);

#ifdef __cplusplus
}
#endif

#endif /* RJDE_H_ */
