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

// Command-line front end: rjde <solve-bayes|solve-np|simulate|export-figures>
//   [--config PATH] [--out DIR] [--seed N] [--runs N] [--threads N]
//   [--set key=value ...]
//
// Exit codes: 0 success, 2 config or I/O error, 3 feasibility error,
// 4 non-convergence, 1 anything else.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rjde.h"

namespace {

int exit_code(rjde_status s) {
  switch (s) {
    case RJDE_OK:
      return 0;
    case RJDE_ERR_CONFIG:
    case RJDE_ERR_IO:
      return 2;
    case RJDE_ERR_FEASIBILITY:
      return 3;
    case RJDE_ERR_CONVERGENCE:
      return 4;
    default:
      return 1;
  }
}

int report_failure(rjde_status s) {
  std::fprintf(stderr, "rjde: %s: %s\n", rjde_status_name(s),
               rjde_last_error());
  return exit_code(s);
}

struct Options {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> runs;
  unsigned threads = 0;
  std::vector<std::string> overrides;
};

rjde_status apply(rjde_config* cfg, const char* key, const std::string& v) {
  return rjde_config_set(cfg, key, v.c_str());
}

int run(const std::string& command, const Options& opt) {
  rjde_set_threads(opt.threads);
  rjde_config* cfg = nullptr;
  rjde_status s = opt.config.empty() ? rjde_config_new(&cfg)
                                     : rjde_config_load(opt.config.c_str(), &cfg);
  if (s != RJDE_OK) return report_failure(s);
  for (const auto& kv : opt.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "rjde: config error: --set expects key=value, got '%s'\n",
                   kv.c_str());
      rjde_config_free(cfg);
      return 2;
    }
    s = apply(cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1));
    if (s != RJDE_OK) break;
  }
  if (s == RJDE_OK && opt.out) s = apply(cfg, "output.dir", *opt.out);
  if (s == RJDE_OK && opt.seed) {
    s = apply(cfg, "simulation.seed", std::to_string(*opt.seed));
  }
  if (s == RJDE_OK && opt.runs) {
    s = apply(cfg, "simulation.runs", std::to_string(*opt.runs));
  }
  if (s != RJDE_OK) {
    rjde_config_free(cfg);
    return report_failure(s);
  }

  rjde_run* result = nullptr;
  if (command == "solve-bayes") {
    s = rjde_run_solve_bayes(cfg, &result);
  } else if (command == "solve-np") {
    s = rjde_run_solve_np(cfg, &result);
  } else if (command == "simulate") {
    s = rjde_run_simulate(cfg, &result);
  } else {
    s = rjde_run_export_figures(cfg, &result);
  }
  rjde_config_free(cfg);
  if (s != RJDE_OK) return report_failure(s);

  for (size_t i = 0; i < rjde_run_report_count(result); ++i) {
    std::printf("%s\n", rjde_run_report_line(result, i));
  }
  for (size_t i = 0; i < rjde_run_file_count(result); ++i) {
    std::printf("wrote %s\n", rjde_run_file(result, i));
  }
  rjde_run_free(result);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimax robust joint detection and estimation"};
  app.require_subcommand(1);
  Options opt;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"solve-bayes", "Bayesian minimax design: LFDs, policies, performance"},
      {"solve-np", "NP-like minimax design with cost coefficient search"},
      {"simulate", "Monte Carlo evaluation of solve artifacts"},
      {"export-figures", "Figure data from solve artifacts"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config, "Config file (key = value lines)");
    sub->add_option("--out", opt.out, "Output directory (overrides output.dir)");
    sub->add_option("--seed", opt.seed, "Simulation seed (overrides simulation.seed)");
    sub->add_option("--runs", opt.runs, "Monte Carlo runs (overrides simulation.runs)");
    sub->add_option("--threads", opt.threads, "Worker threads, 0 = all cores")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--set", opt.overrides, "Extra key=value config overrides");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  for (const auto& [name, help] : commands) {
    if (app.got_subcommand(name)) return run(name, opt);
  }
  return 2;
}
