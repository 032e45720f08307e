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

#include "moto/riccati.hpp"

namespace moto {

namespace {

// Q_t(s,a) = r(s,a) + E_xi[V_{t+1}(As + Ba + xi)].
QuadraticModel backup(const LinearEnvParams& p, const QuadraticV& v_next) {
  QuadraticModel q;
  q.Q_ss = symmetrize(p.R_ss + p.A.transpose() * v_next.V_ss * p.A);
  q.Q_aa = symmetrize(p.R_aa + p.B.transpose() * v_next.V_ss * p.B);
  q.Q_as = p.B.transpose() * v_next.V_ss * p.A;
  q.q_s = p.r_s + p.A.transpose() * v_next.v_s;
  q.q_a = p.B.transpose() * v_next.v_s;
  q.q_0 = v_next.v_0 + 0.5 * (v_next.V_ss * p.noise_cov).trace();
  return q;
}

// V under a = Ks + k + zeta, zeta ~ N(0, Sigma).
QuadraticV substitute_policy(const QuadraticModel& q, const LinGaussPolicy& pol) {
  QuadraticV v;
  v.V_ss = symmetrize(q.Q_ss + pol.gain.transpose() * q.Q_aa * pol.gain +
                      pol.gain.transpose() * q.Q_as + q.Q_as.transpose() * pol.gain);
  v.v_s = pol.gain.transpose() * (q.Q_aa * pol.bias + q.q_a) + q.Q_as.transpose() * pol.bias +
          q.q_s;
  v.v_0 = 0.5 * pol.bias.dot(q.Q_aa * pol.bias) + pol.bias.dot(q.q_a) + q.q_0 +
          0.5 * (q.Q_aa * pol.cov).trace();
  return v;
}

}  // namespace

RiccatiSolution solve_lqr_optimal(const LinearEnvParams& params, const Matrix& policy_cov) {
  params.validate();
  const int T = params.horizon;
  const int d_s = params.state_dim();
  const int d_a = params.action_dim();
  RiccatiSolution sol;
  sol.q.resize(T);
  sol.v.resize(T + 1);
  sol.policy.resize(T);
  sol.v[T] = QuadraticV::zero(d_s);
  for (int t = T; t >= 1; --t) {
    const QuadraticModel q = backup(params, sol.v[t]);
    // a* = -Q_aa^{-1}(Q_as s + q_a); Q_aa must be ND for the max to exist.
    Eigen::LDLT<Matrix> ldlt(Matrix(-q.Q_aa));
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
      throw NumericalError("solve_lqr_optimal: Q_aa not negative definite at t = " +
                           std::to_string(t));
    }
    LinGaussPolicy pol;
    pol.gain = ldlt.solve(q.Q_as);
    pol.bias = ldlt.solve(q.q_a);
    pol.cov = policy_cov.size() > 0 ? policy_cov : Matrix::Zero(d_a, d_a);
    sol.q[t - 1] = q;
    sol.policy[t - 1] = pol;
    sol.v[t - 1] = substitute_policy(q, pol);
  }
  return sol;
}

RiccatiSolution evaluate_linear_policy(const LinearEnvParams& params,
                                       const std::vector<LinGaussPolicy>& policy) {
  params.validate();
  const int T = params.horizon;
  if (static_cast<int>(policy.size()) != T) {
    throw std::invalid_argument("evaluate_linear_policy: policy horizon mismatch");
  }
  RiccatiSolution sol;
  sol.q.resize(T);
  sol.v.resize(T + 1);
  sol.policy = policy;
  sol.v[T] = QuadraticV::zero(params.state_dim());
  for (int t = T; t >= 1; --t) {
    sol.q[t - 1] = backup(params, sol.v[t]);
    sol.v[t - 1] = substitute_policy(sol.q[t - 1], policy[t - 1]);
  }
  return sol;
}

double expected_value(const QuadraticV& v, const GaussianDist& rho) {
  return 0.5 * rho.mean.dot(v.V_ss * rho.mean) + 0.5 * (v.V_ss * rho.cov).trace() +
         rho.mean.dot(v.v_s) + v.v_0;
}

}  // namespace moto
