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

#include "moto/update.hpp"

#include <cmath>

namespace moto {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

// The eta-dependent pieces of the update: F = (eta cov^{-1} - Q_aa)^{-1},
// L = eta cov^{-1} K + Q_as, f = eta cov^{-1} k + q_a.
struct UpdateParts {
  Matrix F;
  Matrix L;
  Vector f;
  double log_det_F = 0.0;
};

UpdateParts make_parts(double eta, const UpdateBlocks& blocks, const LinGaussPolicy& policy,
                       const Matrix& prec) {
  const int d_a = policy.action_dim();
  const Matrix A = symmetrize(eta * prec - blocks.Q_aa);
  Eigen::LLT<Matrix> llt(A);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("dual: eta = " + std::to_string(eta) +
                         " below feasibility floor (eta cov^-1 - Q_aa not PD)");
  }
  UpdateParts parts;
  parts.F = llt.solve(Matrix::Identity(d_a, d_a));
  parts.L = eta * prec * policy.gain + blocks.Q_as;
  parts.f = eta * prec * policy.bias + blocks.q_a;
  parts.log_det_F = -log_det_from_llt(llt);
  return parts;
}

LinGaussPolicy policy_from_parts(const UpdateParts& parts, double eta_plus_omega) {
  LinGaussPolicy out;
  out.gain = parts.F * parts.L;
  out.bias = parts.F * parts.f;
  out.cov = symmetrize(eta_plus_omega * parts.F);
  if (Eigen::LLT<Matrix>(out.cov).info() != Eigen::Success) {
    throw NumericalError("closed_form_update: non-PD covariance (dual infeasibility)");
  }
  return out;
}

// For fixed eta the dual is minimized in omega >= 0 at the point where the
// new-policy entropy meets beta (or at the bound): since the new covariance
// is (eta + omega) F, entropy = beta pins eta + omega in closed form.
double omega_star(double eta, double beta, int d_a, double log_det_F) {
  const double log_sum = (2.0 * beta - d_a * (1.0 + kLog2Pi) - log_det_F) / d_a;
  return std::max(0.0, std::exp(log_sum) - eta);
}

}  // namespace

double entropy_target(const LinGaussPolicy& policy, double beta0) {
  return policy_entropy(policy) - beta0;
}

double dual_eta_floor(const Matrix& Q_aa, const Matrix& cov) {
  const int d = static_cast<int>(cov.rows());
  const Eigen::LLT<Matrix> llt = checked_llt(cov, "dual_eta_floor");
  const Matrix prec = llt.solve(Matrix::Identity(d, d));
  const double delta = 1e-8 * prec.trace();
  Eigen::SelfAdjointEigenSolver<Matrix> cov_es(symmetrize(cov));
  const Matrix sqrt_cov = cov_es.operatorSqrt();
  Eigen::SelfAdjointEigenSolver<Matrix> es(
      symmetrize(sqrt_cov * (symmetrize(Q_aa) + delta * Matrix::Identity(d, d)) * sqrt_cov));
  return std::max(0.0, es.eigenvalues().maxCoeff());
}

double dual_value(const DualVars& dv, const UpdateBlocks& blocks,
                  const LinGaussPolicy& policy, const GaussianDist& rho, double eps,
                  double beta) {
  const int d_a = policy.action_dim();
  const Eigen::LLT<Matrix> cov_llt = checked_llt(policy.cov, "dual_value policy cov");
  const Matrix prec = cov_llt.solve(Matrix::Identity(d_a, d_a));
  const UpdateParts parts = make_parts(dv.eta, blocks, policy, prec);
  const double eta = dv.eta;
  const double omega = dv.omega;

  const Matrix M = 0.5 * (parts.L.transpose() * parts.F * parts.L -
                          eta * policy.gain.transpose() * prec * policy.gain);
  const Vector m = parts.L.transpose() * parts.F * parts.f -
                   eta * policy.gain.transpose() * prec * policy.bias;
  const double log_det_2pi_cov = d_a * kLog2Pi + log_det_from_llt(cov_llt);
  const double log_det_new =
      d_a * (kLog2Pi + std::log(eta + omega)) + parts.log_det_F;
  const double m0 = 0.5 * (parts.f.dot(parts.F * parts.f) -
                           eta * policy.bias.dot(prec * policy.bias) -
                           eta * log_det_2pi_cov + (eta + omega) * log_det_new);
  return eta * eps - omega * beta + rho.mean.dot(M * rho.mean) + (M * rho.cov).trace() +
         rho.mean.dot(m) + m0;
}

std::pair<double, double> dual_gradient(const DualVars& dv, const UpdateBlocks& blocks,
                                        const LinGaussPolicy& policy, const GaussianDist& rho,
                                        double eps, double beta) {
  const LinGaussPolicy next = closed_form_update(policy, blocks, dv);
  return {eps - expected_policy_kl(rho, next, policy), -beta + policy_entropy(next)};
}

LinGaussPolicy closed_form_update(const LinGaussPolicy& policy, const UpdateBlocks& blocks,
                                  const DualVars& dv) {
  const int d_a = policy.action_dim();
  const Matrix prec =
      checked_llt(policy.cov, "closed_form_update policy cov").solve(Matrix::Identity(d_a, d_a));
  const UpdateParts parts = make_parts(dv.eta, blocks, policy, prec);
  return policy_from_parts(parts, dv.eta + dv.omega);
}

DualSolution minimize_dual(const UpdateBlocks& blocks, const LinGaussPolicy& policy,
                           const GaussianDist& rho, double eps, double beta) {
  if (!(eps > 0.0)) throw std::invalid_argument("minimize_dual: eps must be > 0");
  const int d_a = policy.action_dim();
  const Matrix prec =
      checked_llt(policy.cov, "minimize_dual policy cov").solve(Matrix::Identity(d_a, d_a));
  const double floor = dual_eta_floor(blocks.Q_aa, policy.cov);
  const double eta_min = floor > 0.0 ? 1.001 * floor : 1e-10;

  constexpr int kMaxIters = 10000;
  int iters = 0;
  double last_eta = eta_min;
  double last_grad = 0.0;
  // KL achieved by the maximizing policy at (eta, omega*(eta)); monotonically
  // nonincreasing in eta by dual convexity.
  const auto kl_at = [&](double eta, DualVars* vars_out) {
    if (++iters > kMaxIters) {
      throw NumericalError("minimize_dual: iteration cap exceeded at eta = " +
                           std::to_string(last_eta) +
                           ", |dg/deta| = " + std::to_string(std::abs(last_grad)));
    }
    const UpdateParts parts = make_parts(eta, blocks, policy, prec);
    const double omega = omega_star(eta, beta, d_a, parts.log_det_F);
    const LinGaussPolicy next = policy_from_parts(parts, eta + omega);
    const double kl = expected_policy_kl(rho, next, policy);
    last_eta = eta;
    last_grad = eps - kl;
    if (vars_out != nullptr) *vars_out = {eta, omega};
    return kl;
  };

  DualSolution sol;
  DualVars vars;
  double kl_lo = kl_at(eta_min, &vars);
  if (kl_lo <= eps) {
    // KKT at the lower bound: dg/deta = eps - KL >= 0 there, so the
    // minimizer sits on the floor and the KL constraint is slack.
    sol.vars = vars;
    sol.floor_pinned = true;
  } else {
    double lo = eta_min;
    double hi = std::max(1.0, 2.0 * eta_min);
    double kl_hi = kl_at(hi, &vars);
    int doublings = 0;
    while (kl_hi > eps) {
      lo = hi;
      kl_lo = kl_hi;
      hi *= 2.0;
      if (++doublings > 400) {
        throw NumericalError(
            "minimize_dual: KL constraint unreachable (entropy target too tight for eps)");
      }
      kl_hi = kl_at(hi, &vars);
    }
    DualVars best = vars;
    double best_err = std::abs(kl_hi - eps);
    while (std::abs(best_err) > 1e-12 * std::max(1.0, eps) && hi - lo > 1e-15 * hi &&
           iters < kMaxIters - 1) {
      const double mid = 0.5 * (lo + hi);
      DualVars mid_vars;
      const double kl_mid = kl_at(mid, &mid_vars);
      if (std::abs(kl_mid - eps) < best_err) {
        best_err = std::abs(kl_mid - eps);
        best = mid_vars;
      }
      if (kl_mid > eps) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    sol.vars = best;
  }
  sol.iterations = iters;
  sol.dual_value = dual_value(sol.vars, blocks, policy, rho, eps, beta);
  return sol;
}

UpdateResult update_timestep(const LinGaussPolicy& policy, const QuadraticModel& q,
                             const GaussianDist& rho, double eps, double beta0) {
  const UpdateBlocks blocks = extract_update_blocks(q);
  const double beta = entropy_target(policy, beta0);
  const DualSolution sol = minimize_dual(blocks, policy, rho, eps, beta);
  UpdateResult result;
  result.new_policy = closed_form_update(policy, blocks, sol.vars);
  result.eta_star = sol.vars.eta;
  result.omega_star = sol.vars.omega;
  result.achieved_kl = expected_policy_kl(rho, result.new_policy, policy);
  result.achieved_entropy = policy_entropy(result.new_policy);
  result.dual_value = sol.dual_value;
  result.iterations = sol.iterations;
  result.floor_pinned = sol.floor_pinned;
  if (result.achieved_kl > eps + 1e-6) {
    throw NumericalError("update_timestep: KL constraint violated (" +
                         std::to_string(result.achieved_kl) + " > " + std::to_string(eps) + ")");
  }
  if (result.achieved_entropy < beta - 1e-6) {
    throw NumericalError("update_timestep: entropy constraint violated");
  }
  return result;
}

}  // namespace moto
