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

#ifndef MOTO_RICCATI_HPP
#define MOTO_RICCATI_HPP

#include <vector>

#include "moto/gaussian.hpp"
#include "moto/linear_env.hpp"
#include "moto/quadratic.hpp"

namespace moto {

/// Exact backward recursion on the linear-quadratic environment. q[t-1] and
/// v[t-1] are the time-t models (t in 1..T); v has one extra entry for the
/// terminal V_{T+1} = 0.
struct RiccatiSolution {
  std::vector<QuadraticModel> q;
  std::vector<QuadraticV> v;
  std::vector<LinGaussPolicy> policy;  // deterministic mean map; cov as given
};

/// Finite-horizon optimal solution: V_{T+1} = 0, then for t = T..1
///   Q_t = reward + E[V_{t+1}(As + Ba + xi)], maximized in a.
/// Process noise enters q_0 through 0.5 tr(V Sigma_noise). `policy_cov`
/// (default zero -> identity * 0 skipped; pass a PD matrix to make the
/// returned policies stochastic for rollouts).
RiccatiSolution solve_lqr_optimal(const LinearEnvParams& params, const Matrix& policy_cov);

/// Policy evaluation: same recursion without the argmax; the given
/// time-dependent linear-Gaussian policy is substituted, its exploration
/// covariance contributing 0.5 tr(Q_aa Sigma_t) to the constant.
RiccatiSolution evaluate_linear_policy(const LinearEnvParams& params,
                                       const std::vector<LinGaussPolicy>& policy);

/// E_{s ~ rho}[V(s)] for a Gaussian initial-state distribution.
double expected_value(const QuadraticV& v, const GaussianDist& rho);

}  // namespace moto

#endif
