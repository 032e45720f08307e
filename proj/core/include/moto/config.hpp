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

#ifndef MOTO_CONFIG_HPP
#define MOTO_CONFIG_HPP

#include <iosfwd>
#include <memory>
#include <string>

#include "moto/linear_env.hpp"
#include "moto/pendulum.hpp"
#include "moto/solver.hpp"

namespace moto {

/// Experiment description: environment preset plus overrides and the
/// algorithm configuration. Parsed from a flat `key = value` file (one key
/// per line, `#` comments); unknown keys, type mismatches, and range
/// violations are rejected with the offending line number.
///
/// Canonical keys: env, eps, beta0, rollouts, iterations, gamma,
/// gamma_reference_m, k_last, lambda, target_mode, statedist_mode, reuse,
/// ess_floor, sigma0_sq, seed, threads, log_timing, output_dir, horizon,
/// dt, substeps, torque_limit, gravity, action_cost_weight, cost_window,
/// init_noise_std, noise_std.
struct ExperimentConfig {
  std::string env = "double_link";  // double_link | quad_link | linquad
  MotoConfig moto;
  std::string output_dir = ".";

  // Environment overrides; negative means "preset default".
  int horizon = -1;
  double dt = -1.0;
  int substeps = -1;
  double torque_limit = -1.0;
  double gravity = -1.0;
  double action_cost_weight = -1.0;
  int cost_window = -1;
  double init_noise_std = -1.0;
  double noise_std = -1.0;  // linquad only

  PendulumParams pendulum_params() const;
  LinearEnvParams linear_params() const;
  std::unique_ptr<Environment> make_env() const;

  /// Every effective value, one key per line (config_resolved.txt).
  std::string resolved() const;
};

ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_stream(std::istream& is, const std::string& name);

}  // namespace moto

#endif
