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

#include "core/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

namespace rjde {

namespace {

const std::vector<std::pair<std::string, std::string>>& defaults() {
  static const std::vector<std::pair<std::string, std::string>> d = {
      {"model.mean0", "0"},
      {"model.sigma", "1"},
      {"model.theta_lo", "1"},
      {"model.theta_hi", "6"},
      {"model.prior0", "0.5"},
      {"band.c_lo", "0.8"},
      {"band.c_hi", "1.2"},
      {"cost.lambda0", "0.75"},
      {"cost.lambda1", "1"},
      {"cost.mu0", "0"},
      {"cost.mu1", "1.1"},
      {"cost.alpha0_max", "0.05"},
      {"cost.alpha1_max", "0.3"},
      {"grids.n_theta", "77"},
      {"grids.theta_layout", "endpoint"},
      {"grids.m_x", "2201"},
      {"grids.x_lo", "-8"},
      {"grids.x_hi", "14"},
      {"solver.eta0", "10"},
      {"solver.decay", "0.97"},
      {"solver.eta_floor", "0.05"},
      {"solver.max_iters", "5000"},
      {"solver.objective_tol", "1e-7"},
      {"solver.patience", "10"},
      {"solver.smoothing", "soft"},
      {"solver.xi", "10"},
      {"np.max_outer", "60"},
      {"np.tol", "1e-4"},
      {"np.damping", "0.5"},
      {"simulation.runs", "1000000"},
      {"simulation.seed", "1"},
      {"output.dir", "out"},
  };
  return d;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& what) {
  fail(ErrorKind::kConfig,
       key + ": " + what + " (got '" + value + "')");
}

double to_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    bad_value(key, value, "expected a finite number");
  }
  return v;
}

std::uint64_t to_count(const std::string& key, const std::string& value) {
  const double v = to_double(key, value);
  if (v < 0.0 || v != std::floor(v) || v > 9.007199254740992e15) {
    bad_value(key, value, "expected a nonnegative integer");
  }
  return static_cast<std::uint64_t>(v);
}

}  // namespace

ConfigMap::ConfigMap() {
  for (const auto& [k, v] : defaults()) values_[k] = v;
}

const std::vector<std::string>& ConfigMap::keys() {
  static const std::vector<std::string> k = [] {
    std::vector<std::string> out;
    for (const auto& kv : defaults()) out.push_back(kv.first);
    return out;
  }();
  return k;
}

void ConfigMap::set(const std::string& key, const std::string& value) {
  auto it = values_.find(key);
  if (it == values_.end()) {
    fail(ErrorKind::kConfig, "unknown config key '" + key + "'");
  }
  it->second = value;
}

const std::string& ConfigMap::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) {
    fail(ErrorKind::kConfig, "unknown config key '" + key + "'");
  }
  return it->second;
}

ConfigMap ConfigMap::parse(std::string_view text, const std::string& source) {
  ConfigMap cfg;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto where = source + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorKind::kConfig, where + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!seen.insert(key).second) {
      fail(ErrorKind::kConfig, where + ": duplicate key '" + key + "'");
    }
    try {
      cfg.set(key, value);
    } catch (const Error& e) {
      fail(ErrorKind::kConfig, where + ": " + e.what());
    }
  }
  return cfg;
}

ConfigMap ConfigMap::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kConfig, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

RunConfig ConfigMap::resolve() const {
  auto num = [&](const char* k) { return to_double(k, get(k)); };
  auto count = [&](const char* k) { return to_count(k, get(k)); };
  auto check = [&](bool ok, const char* k, const char* what) {
    if (!ok) bad_value(k, get(k), what);
  };

  RunConfig rc;
  rc.model.mean0 = num("model.mean0");
  rc.model.sigma = num("model.sigma");
  check(rc.model.sigma > 0.0, "model.sigma", "must be positive");
  rc.theta_lo = num("model.theta_lo");
  rc.theta_hi = num("model.theta_hi");
  check(rc.theta_hi > rc.theta_lo, "model.theta_hi",
        "must exceed model.theta_lo");
  const double p0 = num("model.prior0");
  check(p0 >= 0.0 && p0 <= 1.0, "model.prior0", "must lie in [0, 1]");
  rc.problem.prior = {p0, 1.0 - p0};

  rc.model.c_lo = num("band.c_lo");
  rc.model.c_hi = num("band.c_hi");

  rc.problem.det_cost = {num("cost.lambda0"), num("cost.lambda1")};
  check(rc.problem.det_cost[0] >= 0.0, "cost.lambda0", "must be nonnegative");
  check(rc.problem.det_cost[1] >= 0.0, "cost.lambda1", "must be nonnegative");
  rc.problem.est_cost = {num("cost.mu0"), num("cost.mu1")};
  check(rc.problem.est_cost[0] >= 0.0, "cost.mu0", "must be nonnegative");
  check(rc.problem.est_cost[1] >= 0.0, "cost.mu1", "must be nonnegative");
  rc.problem.alpha_max = {num("cost.alpha0_max"), num("cost.alpha1_max")};

  rc.n_theta = count("grids.n_theta");
  check(rc.n_theta >= 1, "grids.n_theta", "must be at least 1");
  const std::string& layout = get("grids.theta_layout");
  if (layout == "endpoint") {
    rc.theta_layout = ThetaLayout::kEndpoint;
    check(rc.n_theta >= 2, "grids.n_theta",
          "must be at least 2 for the endpoint layout");
  } else if (layout == "midpoint") {
    rc.theta_layout = ThetaLayout::kMidpoint;
  } else {
    bad_value("grids.theta_layout", layout, "expected endpoint or midpoint");
  }
  rc.m_x = count("grids.m_x");
  check(rc.m_x >= 2, "grids.m_x", "must be at least 2");
  rc.x_lo = num("grids.x_lo");
  rc.x_hi = num("grids.x_hi");
  check(rc.x_hi > rc.x_lo, "grids.x_hi", "must exceed grids.x_lo");

  rc.solver.eta0 = num("solver.eta0");
  rc.solver.decay = num("solver.decay");
  rc.solver.eta_floor = num("solver.eta_floor");
  rc.solver.max_iters = count("solver.max_iters");
  rc.solver.objective_tol = num("solver.objective_tol");
  rc.solver.patience = count("solver.patience");
  const std::string& smoothing = get("solver.smoothing");
  const double xi = num("solver.xi");
  check(xi > 0.0, "solver.xi", "must be positive");
  if (smoothing == "soft") {
    rc.solver.smoothing = Smoothing::soft(xi);
  } else if (smoothing == "hard") {
    rc.solver.smoothing = Smoothing::hard();
    rc.solver.smoothing.xi = xi;
  } else {
    bad_value("solver.smoothing", smoothing, "expected hard or soft");
  }
  check(rc.solver.eta0 > 0.0, "solver.eta0", "must be positive");
  check(rc.solver.decay > 0.0 && rc.solver.decay < 1.0, "solver.decay",
        "must lie in (0, 1)");
  check(rc.solver.eta_floor > 0.0 && rc.solver.eta_floor <= rc.solver.eta0,
        "solver.eta_floor", "must lie in (0, solver.eta0]");
  check(rc.solver.max_iters >= 1, "solver.max_iters", "must be at least 1");
  check(rc.solver.objective_tol >= 0.0, "solver.objective_tol",
        "must be nonnegative");
  check(rc.solver.patience >= 1, "solver.patience", "must be at least 1");

  rc.np.max_outer = count("np.max_outer");
  check(rc.np.max_outer >= 1, "np.max_outer", "must be at least 1");
  rc.np.tol = num("np.tol");
  check(rc.np.tol > 0.0, "np.tol", "must be positive");
  rc.np.damping = num("np.damping");
  check(rc.np.damping > 0.0 && rc.np.damping <= 1.0, "np.damping",
        "must lie in (0, 1]");

  rc.simulation.runs = count("simulation.runs");
  check(rc.simulation.runs >= 1, "simulation.runs", "must be at least 1");
  rc.simulation.seed = count("simulation.seed");

  rc.output_dir = get("output.dir");
  check(!rc.output_dir.empty(), "output.dir", "must not be empty");
  return rc;
}

Model RunConfig::build_model() const {
  ObsGrid obs(x_lo, x_hi, m_x);
  ParamGrid theta = theta_layout == ThetaLayout::kEndpoint
                        ? build_endpoint_param_grid(theta_lo, theta_hi, n_theta)
                        : build_uniform_param_grid(theta_lo, theta_hi, n_theta);
  return make_gaussian_shift_model(model, std::move(obs), std::move(theta));
}

}  // namespace rjde
