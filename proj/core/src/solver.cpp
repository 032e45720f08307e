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

#include "moto/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_map>

namespace moto {

void MotoConfig::validate() const {
  if (!(eps > 0.0)) throw std::invalid_argument("config: eps must be > 0");
  if (beta0 < 0.0) throw std::invalid_argument("config: beta0 must be >= 0");
  if (M < 1) throw std::invalid_argument("config: M must be >= 1");
  if (n_iters < 0) throw std::invalid_argument("config: n_iters must be >= 0");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("config: gamma in (0, 1]");
  if (gamma_reference_m < 1) throw std::invalid_argument("config: gamma_reference_m >= 1");
  if (k_last < 1) throw std::invalid_argument("config: k_last must be >= 1");
  if (lambda < 0.0) throw std::invalid_argument("config: lambda must be >= 0");
  if (!(sigma0_sq > 0.0)) throw std::invalid_argument("config: sigma0_sq must be > 0");
  if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
}

double MotoConfig::effective_gamma() const {
  return std::pow(gamma, static_cast<double>(M) / gamma_reference_m);
}

std::vector<LinGaussPolicy> init_policy(const Environment& env, const MotoConfig& config) {
  const EnvSpec spec = env.spec();
  LinGaussPolicy pol;
  pol.gain = Matrix::Zero(spec.d_a, spec.d_s);
  pol.bias = Vector::Zero(spec.d_a);
  pol.cov = config.sigma0_sq * Matrix::Identity(spec.d_a, spec.d_a);
  return std::vector<LinGaussPolicy>(spec.horizon, pol);
}

namespace {

void fit_state_dists(Dataset& data, int iter, const EnvSpec& spec, const MotoConfig& config) {
  const double gamma = config.effective_gamma();
  if (config.statedist_mode == StateDistMode::mixture) {
    for (int t = 1; t <= spec.horizon; ++t) {
      data.set_state_dist(iter, t, fit_state_dist_mixture(data, t, iter, gamma));
    }
    return;
  }
  // Forward propagation: seed with a fit of the time-1 states (identical in
  // distribution across iterations), then push forward.
  const double floor = config.ess_floor > 0.0 ? config.ess_floor : spec.d_s + 2.0;
  GaussianDist rho = fit_state_dist_mixture(data, 1, iter, gamma);
  data.set_state_dist(iter, 1, rho);
  for (int t = 1; t < spec.horizon; ++t) {
    const ForwardFitResult fr = fit_state_dist_forward(rho, data, t, iter, floor, gamma);
    rho = fr.dist;
    data.set_state_dist(iter, t + 1, rho);
  }
}

// Return-to-go of every stored record, keyed by address (records are stable
// inside the dataset for the duration of an iteration).
std::unordered_map<const TransitionRecord*, double> return_to_go(const Dataset& data) {
  std::unordered_map<const TransitionRecord*, double> out;
  for (const auto& it : data.iterations()) {
    for (const auto& traj : it.trajectories) {
      double suffix = 0.0;
      for (auto rec = traj.rbegin(); rec != traj.rend(); ++rec) {
        suffix += rec->r;
        out.emplace(&*rec, suffix);
      }
    }
  }
  return out;
}

}  // namespace

MotoResult run_moto(const Environment& env, const MotoConfig& config,
                    const std::function<void(const IterationLog&)>& on_iteration) {
  config.validate();
  const EnvSpec spec = env.spec();
  MotoResult result;
  result.policy = init_policy(env, config);
  Dataset data(config.k_last);

  const ReuseMode mode = !config.reuse ? ReuseMode::none
                         : (config.target_mode == TargetMode::monte_carlo
                                ? ReuseMode::same_timestep
                                : ReuseMode::full);

  for (int iter = 1; iter <= config.n_iters; ++iter) {
    const auto t_start = std::chrono::steady_clock::now();
    auto trajectories =
        sample_rollouts(env, result.policy, config.M, config.seed, iter, config.threads);
    const auto [ret_mean, ret_stderr] = policy_return(trajectories);
    data.add_iteration(iter, std::move(trajectories), result.policy);
    fit_state_dists(data, iter, spec, config);

    const WeightEngine engine(data, mode, config.threads);
    std::unordered_map<const TransitionRecord*, double> rtg;
    if (config.target_mode == TargetMode::monte_carlo) rtg = return_to_go(data);

    IterationLog log;
    log.iter = iter;
    log.return_mean = ret_mean;
    log.return_stderr = ret_stderr;

    QuadraticV v_next = QuadraticV::zero(spec.d_s);
    for (int t = spec.horizon; t >= 1; --t) {
      const WeightSet ws = engine.weights_at(t);
      const int n = static_cast<int>(ws.records.size());
      Matrix S(spec.d_s, n);
      Matrix A(spec.d_a, n);
      Vector targets(n);
      for (int r = 0; r < n; ++r) {
        const TransitionRecord& rec = *ws.records[r];
        S.col(r) = rec.s;
        A.col(r) = rec.a;
        if (config.target_mode == TargetMode::dynamic_programming) {
          // The reward is recomputed at the target time-step so records
          // reused across time-steps carry the right time-dependent cost.
          targets[r] = env.reward(t, rec.s, rec.a) + v_next.eval(rec.s_next);
        } else {
          targets[r] = rtg.at(&rec);
        }
      }
      const QuadraticModel q = fit_quadratic_q(S, A, targets, ws.weights, config.lambda);
      if (config.target_mode == TargetMode::dynamic_programming) {
        v_next = fit_quadratic_v(S, targets, ws.weights, config.lambda);
      }

      const GaussianDist& rho = data.iteration(iter).state_dists.at(t - 1);
      const UpdateResult up =
          update_timestep(result.policy[t - 1], q, rho, config.eps, config.beta0);
      result.policy[t - 1] = up.new_policy;
      log.timesteps.push_back(
          {t, up.eta_star, up.omega_star, up.achieved_kl, up.achieved_entropy, ws.ess});
    }
    std::reverse(log.timesteps.begin(), log.timesteps.end());

    if (config.log_timing) {
      log.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
                        .count();
    }
    if (on_iteration) on_iteration(log);
    result.logs.push_back(std::move(log));
  }
  return result;
}

}  // namespace moto
