/*
 Copyright 2026 The moto authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "moto/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace moto {

namespace {

[[noreturn]] void fail(const std::string& name, int line, const std::string& message) {
  throw std::invalid_argument(name + ":" + std::to_string(line) + ": " + message);
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& name, int line, const std::string& value) {
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &pos);
  } catch (const std::exception&) {
    fail(name, line, "expected a number, got '" + value + "'");
  }
  if (pos != value.size()) fail(name, line, "trailing characters after number '" + value + "'");
  return out;
}

long long parse_int(const std::string& name, int line, const std::string& value) {
  std::size_t pos = 0;
  long long out = 0;
  try {
    out = std::stoll(value, &pos);
  } catch (const std::exception&) {
    fail(name, line, "expected an integer, got '" + value + "'");
  }
  if (pos != value.size()) fail(name, line, "trailing characters after integer '" + value + "'");
  return out;
}

bool parse_bool(const std::string& name, int line, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  fail(name, line, "expected true/false, got '" + value + "'");
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

PendulumParams ExperimentConfig::pendulum_params() const {
  PendulumParams p = env == "quad_link" ? PendulumParams::default_quad_link()
                                        : PendulumParams::default_double_link();
  if (horizon > 0) p.horizon = horizon;
  if (dt > 0.0) p.dt = dt;
  if (substeps > 0) p.substeps = substeps;
  if (torque_limit > 0.0) p.torque_limit = torque_limit;
  if (gravity >= 0.0) p.gravity = gravity;
  if (action_cost_weight >= 0.0) p.action_cost_weight = action_cost_weight;
  if (cost_window > 0) p.cost_window = cost_window;
  if (init_noise_std >= 0.0) p.init_noise_std = init_noise_std;
  p.validate();
  return p;
}

LinearEnvParams ExperimentConfig::linear_params() const {
  LinearEnvParams p = LinearEnvParams::default_instance(noise_std >= 0.0 ? noise_std : 1e-2,
                                                        horizon > 0 ? horizon : 20);
  p.validate();
  return p;
}

std::unique_ptr<Environment> ExperimentConfig::make_env() const {
  if (env == "linquad") return std::make_unique<LinearEnv>(linear_params());
  return std::make_unique<PendulumEnv>(pendulum_params());
}

std::string ExperimentConfig::resolved() const {
  std::ostringstream os;
  os << "env = " << env << '\n';
  os << "eps = " << fmt(moto.eps) << '\n';
  os << "beta0 = " << fmt(moto.beta0) << '\n';
  os << "rollouts = " << moto.M << '\n';
  os << "iterations = " << moto.n_iters << '\n';
  os << "gamma = " << fmt(moto.gamma) << '\n';
  os << "gamma_reference_m = " << moto.gamma_reference_m << '\n';
  os << "k_last = " << moto.k_last << '\n';
  os << "lambda = " << fmt(moto.lambda) << '\n';
  os << "target_mode = "
     << (moto.target_mode == TargetMode::monte_carlo ? "monte_carlo" : "dynamic_programming")
     << '\n';
  os << "statedist_mode = "
     << (moto.statedist_mode == StateDistMode::mixture ? "mixture" : "forward") << '\n';
  os << "reuse = " << (moto.reuse ? "full" : "none") << '\n';
  os << "ess_floor = " << fmt(moto.ess_floor) << '\n';
  os << "sigma0_sq = " << fmt(moto.sigma0_sq) << '\n';
  os << "seed = " << moto.seed << '\n';
  os << "threads = " << moto.threads << '\n';
  os << "log_timing = " << (moto.log_timing ? "true" : "false") << '\n';
  os << "output_dir = " << output_dir << '\n';
  if (env == "linquad") {
    const LinearEnvParams p = linear_params();
    os << "horizon = " << p.horizon << '\n';
    os << "noise_std = " << fmt(noise_std >= 0.0 ? noise_std : 1e-2) << '\n';
  } else {
    const PendulumParams p = pendulum_params();
    os << "horizon = " << p.horizon << '\n';
    os << "dt = " << fmt(p.dt) << '\n';
    os << "substeps = " << p.substeps << '\n';
    os << "torque_limit = " << fmt(p.torque_limit) << '\n';
    os << "gravity = " << fmt(p.gravity) << '\n';
    os << "action_cost_weight = " << fmt(p.action_cost_weight) << '\n';
    os << "cost_window = " << p.cost_window << '\n';
    os << "init_noise_std = " << fmt(p.init_noise_std) << '\n';
  }
  return os.str();
}

ExperimentConfig parse_config_stream(std::istream& is, const std::string& name) {
  ExperimentConfig config;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) fail(name, lineno, "expected 'key = value'");
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    if (key.empty()) fail(name, lineno, "empty key");
    if (value.empty()) fail(name, lineno, "empty value for key '" + key + "'");

    if (key == "env") {
      if (value != "double_link" && value != "quad_link" && value != "linquad") {
        fail(name, lineno, "env must be double_link, quad_link, or linquad");
      }
      config.env = value;
    } else if (key == "eps") {
      config.moto.eps = parse_double(name, lineno, value);
      if (!(config.moto.eps > 0.0)) fail(name, lineno, "eps must be > 0");
    } else if (key == "beta0") {
      config.moto.beta0 = parse_double(name, lineno, value);
      if (config.moto.beta0 < 0.0) fail(name, lineno, "beta0 must be >= 0");
    } else if (key == "rollouts") {
      config.moto.M = static_cast<int>(parse_int(name, lineno, value));
      if (config.moto.M < 1) fail(name, lineno, "rollouts must be >= 1");
    } else if (key == "iterations") {
      config.moto.n_iters = static_cast<int>(parse_int(name, lineno, value));
      if (config.moto.n_iters < 0) fail(name, lineno, "iterations must be >= 0");
    } else if (key == "gamma") {
      config.moto.gamma = parse_double(name, lineno, value);
      if (!(config.moto.gamma > 0.0 && config.moto.gamma <= 1.0)) {
        fail(name, lineno, "gamma must be in (0, 1]");
      }
    } else if (key == "gamma_reference_m") {
      config.moto.gamma_reference_m = static_cast<int>(parse_int(name, lineno, value));
      if (config.moto.gamma_reference_m < 1) fail(name, lineno, "gamma_reference_m >= 1");
    } else if (key == "k_last") {
      config.moto.k_last = static_cast<int>(parse_int(name, lineno, value));
      if (config.moto.k_last < 1) fail(name, lineno, "k_last must be >= 1");
    } else if (key == "lambda") {
      config.moto.lambda = parse_double(name, lineno, value);
      if (config.moto.lambda < 0.0) fail(name, lineno, "lambda must be >= 0");
    } else if (key == "target_mode") {
      if (value == "monte_carlo") {
        config.moto.target_mode = TargetMode::monte_carlo;
      } else if (value == "dynamic_programming") {
        config.moto.target_mode = TargetMode::dynamic_programming;
      } else {
        fail(name, lineno, "target_mode must be monte_carlo or dynamic_programming");
      }
    } else if (key == "statedist_mode") {
      if (value == "mixture") {
        config.moto.statedist_mode = StateDistMode::mixture;
      } else if (value == "forward") {
        config.moto.statedist_mode = StateDistMode::forward;
      } else {
        fail(name, lineno, "statedist_mode must be mixture or forward");
      }
    } else if (key == "reuse") {
      if (value == "full") {
        config.moto.reuse = true;
      } else if (value == "none") {
        config.moto.reuse = false;
      } else {
        fail(name, lineno, "reuse must be full or none");
      }
    } else if (key == "ess_floor") {
      config.moto.ess_floor = parse_double(name, lineno, value);
      if (config.moto.ess_floor < 0.0) fail(name, lineno, "ess_floor must be >= 0");
    } else if (key == "sigma0_sq") {
      config.moto.sigma0_sq = parse_double(name, lineno, value);
      if (!(config.moto.sigma0_sq > 0.0)) fail(name, lineno, "sigma0_sq must be > 0");
    } else if (key == "seed") {
      const long long seed = parse_int(name, lineno, value);
      if (seed < 0) fail(name, lineno, "seed must be >= 0");
      config.moto.seed = static_cast<std::uint64_t>(seed);
    } else if (key == "threads") {
      config.moto.threads = static_cast<int>(parse_int(name, lineno, value));
      if (config.moto.threads < 1) fail(name, lineno, "threads must be >= 1");
    } else if (key == "log_timing") {
      config.moto.log_timing = parse_bool(name, lineno, value);
    } else if (key == "output_dir") {
      config.output_dir = value;
    } else if (key == "horizon") {
      config.horizon = static_cast<int>(parse_int(name, lineno, value));
      if (config.horizon < 1) fail(name, lineno, "horizon must be >= 1");
    } else if (key == "dt") {
      config.dt = parse_double(name, lineno, value);
      if (!(config.dt > 0.0)) fail(name, lineno, "dt must be > 0");
    } else if (key == "substeps") {
      config.substeps = static_cast<int>(parse_int(name, lineno, value));
      if (config.substeps < 1) fail(name, lineno, "substeps must be >= 1");
    } else if (key == "torque_limit") {
      config.torque_limit = parse_double(name, lineno, value);
      if (!(config.torque_limit > 0.0)) fail(name, lineno, "torque_limit must be > 0");
    } else if (key == "gravity") {
      config.gravity = parse_double(name, lineno, value);
      if (config.gravity < 0.0) fail(name, lineno, "gravity must be >= 0");
    } else if (key == "action_cost_weight") {
      config.action_cost_weight = parse_double(name, lineno, value);
      if (config.action_cost_weight < 0.0) fail(name, lineno, "action_cost_weight >= 0");
    } else if (key == "cost_window") {
      config.cost_window = static_cast<int>(parse_int(name, lineno, value));
      if (config.cost_window < 1) fail(name, lineno, "cost_window must be >= 1");
    } else if (key == "init_noise_std") {
      config.init_noise_std = parse_double(name, lineno, value);
      if (config.init_noise_std < 0.0) fail(name, lineno, "init_noise_std must be >= 0");
    } else if (key == "noise_std") {
      config.noise_std = parse_double(name, lineno, value);
      if (config.noise_std < 0.0) fail(name, lineno, "noise_std must be >= 0");
    } else {
      fail(name, lineno, "unknown key '" + key + "'");
    }
  }
  if (config.cost_window > 0 && config.env != "linquad") {
    const int T = config.horizon > 0 ? config.horizon : 100;
    if (config.cost_window > T) {
      throw std::invalid_argument(name + ": cost_window exceeds horizon");
    }
  }
  return config;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("config: cannot open " + path);
  return parse_config_stream(is, path);
}

}  // namespace moto
