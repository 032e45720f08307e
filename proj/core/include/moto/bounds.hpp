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

#ifndef MOTO_BOUNDS_HPP
#define MOTO_BOUNDS_HPP

#include <string>
#include <vector>

#include "moto/riccati.hpp"

namespace moto {

/// One checked (in)equality lhs <= rhs: slack = rhs - lhs. For Monte-Carlo
/// identity checks mc_stderr > 0 and pass means |slack| <= 3 mc_stderr;
/// closed-form checks use slack >= -1e-10.
struct BoundCheckReport {
  std::string description;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double mc_stderr = 0.0;
  bool pass = false;
};

/// Exact Gaussian state-marginal propagation through s' = As + Ba + xi under
/// a linear-Gaussian policy.
GaussianDist propagate_state(const LinearEnvParams& params, const GaussianDist& rho,
                             const LinGaussPolicy& pol);

/// Per-t Gaussian state marginals of a policy, rho[t-1] = marginal at t.
std::vector<GaussianDist> state_marginals(const LinearEnvParams& params,
                                          const std::vector<LinGaussPolicy>& policy);

/// E_{a ~ pol(.|s)}[Q(s,a)] as a state quadratic.
QuadraticV expected_q_under_policy(const QuadraticModel& q, const LinGaussPolicy& pol);

/// Return-difference identity: J(p) - J(q) (Monte Carlo, n rollouts each)
/// against the summed expected advantage of q under p's trajectories, with
/// advantages exact from the backward recursion.
BoundCheckReport check_perf_diff(const LinearEnvParams& params,
                                 const std::vector<LinGaussPolicy>& p,
                                 const std::vector<LinGaussPolicy>& q, int n,
                                 std::uint64_t seed);

/// Pinsker-based lower bound on the return difference:
///   J(p) - J(q) >= sum_t E_{s~q_t,a~p_t}[A_t^q] - 2 sum_t delta_t
///   sqrt(eps_t/2),
/// everything closed form except delta_t = max_s |E_{a~p_t}[A_t^q]|, which
/// is maximized over a finite Gaussian-quantile state grid. The grid max
/// lower-bounds the true supremum, which only makes the check stricter.
BoundCheckReport check_advantage_bound(const LinearEnvParams& params,
                                       const std::vector<LinGaussPolicy>& p,
                                       const std::vector<LinGaussPolicy>& q,
                                       int grid_points = 10000);

/// Log-sum-inequality step of the state-KL recursion, per time-step:
///   KL(p_{t+1} || q_{t+1}) <= KL(p_t || q_t) + E_{s~p_t}[KL(p_t || q_t
///   policies)].
std::vector<BoundCheckReport> check_state_kl_recursion(
    const LinearEnvParams& params, const std::vector<LinGaussPolicy>& p,
    const std::vector<LinGaussPolicy>& q);

/// The three closed-form inequalities behind the expected-KL bound, given
/// the preconditions KL(p_t || q_t) <= eps_t and E_{s~q_t}[policy KL] <= eps
/// (verified first; policies must share a bias for the second inequality):
///   (i)   tr(Sigma_q^{-1} Sigma_p) <= 4 eps_t + 2 d_s
///   (ii)  mu_p' M mu_p <= 2 eps (1 + 2 eps_t)
///   (iii) E_{s~p_t}[policy KL] <= 2 eps (3 eps_t + d_s + 1)
/// with M = (K_p - K_q)' Sigma_q,pol^{-1} (K_p - K_q).
std::vector<BoundCheckReport> check_appendix_b(const GaussianDist& p_t,
                                               const GaussianDist& q_t,
                                               const LinGaussPolicy& p_pol,
                                               const LinGaussPolicy& q_pol, double eps,
                                               double eps_t);

struct AppendixBInstance {
  GaussianDist p_t;
  GaussianDist q_t;
  LinGaussPolicy p_pol;
  LinGaussPolicy q_pol;
};

/// Random instance with both KL preconditions met exactly (perturbation
/// scales found by bisection) and equal policy biases.
AppendixBInstance sample_appendix_b_instance(int d_s, int d_a, double eps, double eps_t,
                                             Rng& rng);

/// Randomly perturbed copy of a per-t policy (gain/bias/covariance jitter of
/// the given relative scale); used to build (p, q) pairs for the checks.
std::vector<LinGaussPolicy> perturb_policy(const std::vector<LinGaussPolicy>& policy,
                                           double scale, Rng& rng);

}  // namespace moto

#endif
