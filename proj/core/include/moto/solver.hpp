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

#ifndef MOTO_SOLVER_HPP
#define MOTO_SOLVER_HPP

#include <functional>

#include "moto/reuse.hpp"
#include "moto/update.hpp"

namespace moto {

enum class TargetMode { monte_carlo, dynamic_programming };
enum class StateDistMode { mixture, forward };

struct MotoConfig {
  double eps = 0.1;     // KL step size
  double beta0 = 0.1;   // entropy reduction per iteration
  int M = 20;           // rollouts per iteration
  int n_iters = 100;
  double gamma = 0.6;   // reuse decay, calibrated at gamma_reference_m rollouts
  int gamma_reference_m = 20;
  int k_last = 10;      // iteration window kept for reuse
  double lambda = 1e-6; // ridge strength
  TargetMode target_mode = TargetMode::dynamic_programming;
  StateDistMode statedist_mode = StateDistMode::mixture;
  bool reuse = true;    // false: fresh same-t samples only (ablation)
  double ess_floor = 0.0;
  double sigma0_sq = 1.0;  // initial policy covariance scale
  std::uint64_t seed = 0;
  int threads = 1;
  bool log_timing = false;  // false keeps the seconds column 0 for determinism

  void validate() const;
  /// gamma adapted across rollout counts: gamma^(M / gamma_reference_m),
  /// matching the calibration decay at the reference count.
  double effective_gamma() const;
};

struct TimestepLog {
  int t = 0;
  double eta = 0.0;
  double omega = 0.0;
  double kl = 0.0;
  double entropy = 0.0;
  double ess = 0.0;
};

struct IterationLog {
  int iter = 0;
  double return_mean = 0.0;
  double return_stderr = 0.0;
  std::vector<TimestepLog> timesteps;
  double seconds = 0.0;
};

struct MotoResult {
  std::vector<LinGaussPolicy> policy;
  std::vector<IterationLog> logs;
};

/// K_t = 0, k_t = 0, Sigma_t = sigma0_sq * I for every t.
std::vector<LinGaussPolicy> init_policy(const Environment& env, const MotoConfig& config);

/// Full iteration loop: sample M trajectories, fit per-t state
/// distributions, then sweep t = T..1 computing importance weights, fitting
/// Q (and V for dynamic-programming targets), and applying the constrained
/// closed-form update. `on_iteration`, when set, receives each log record as
/// soon as the iteration completes (so partial logs survive late failures).
MotoResult run_moto(const Environment& env, const MotoConfig& config,
                    const std::function<void(const IterationLog&)>& on_iteration = nullptr);

}  // namespace moto

#endif
