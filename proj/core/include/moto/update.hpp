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

#ifndef MOTO_UPDATE_HPP
#define MOTO_UPDATE_HPP

#include "moto/gaussian.hpp"
#include "moto/quadratic.hpp"

namespace moto {

/// Lagrange multipliers for the KL (eta) and entropy (omega) constraints.
struct DualVars {
  double eta = 1.0;
  double omega = 0.0;
};

struct DualSolution {
  DualVars vars;
  double dual_value = 0.0;
  int iterations = 0;
  /// eta pinned at its positive-definiteness floor; the KL constraint is
  /// then slack (expected KL < eps) and should be logged as such.
  bool floor_pinned = false;
};

struct UpdateResult {
  LinGaussPolicy new_policy;
  double eta_star = 0.0;
  double omega_star = 0.0;
  double achieved_kl = 0.0;
  double achieved_entropy = 0.0;
  double dual_value = 0.0;
  int iterations = 0;
  bool floor_pinned = false;
};

/// Entropy target beta = H(policy) - beta0.
double entropy_target(const LinGaussPolicy& policy, double beta0);

/// Smallest eta such that eta * cov^{-1} - Q_aa >= delta I, with margin
/// delta = 1e-8 tr(cov^{-1}); the update is well defined for eta above it.
double dual_eta_floor(const Matrix& Q_aa, const Matrix& cov);

/// Closed-form dual of the constrained per-time-step maximization:
///   g(eta, omega) = eta eps - omega beta + mu'M mu + tr(Sigma_s M)
///                   + mu'm + m0,
/// built from F = (eta cov^{-1} - Q_aa)^{-1}, L = eta cov^{-1} K + Q_as,
/// f = eta cov^{-1} k + q_a. Throws NumericalError when F is not PD (eta
/// below the feasibility floor).
double dual_value(const DualVars& dv, const UpdateBlocks& blocks,
                  const LinGaussPolicy& policy, const GaussianDist& rho, double eps,
                  double beta);

/// Exact dual gradient. By the envelope theorem the partials are the
/// constraint residuals at the maximizing policy pi'(eta, omega):
///   dg/deta  = eps - E_rho[KL(pi' || pi)]
///   dg/domega = -beta + H(pi')
/// (equivalently -beta + 0.5 (d_a + log|2 pi (eta+omega) F|)).
std::pair<double, double> dual_gradient(const DualVars& dv, const UpdateBlocks& blocks,
                                        const LinGaussPolicy& policy, const GaussianDist& rho,
                                        double eps, double beta);

/// Minimizes the convex dual over eta >= floor, omega >= 0. omega has a
/// closed-form minimizer for fixed eta (the entropy constraint is met with
/// equality when active), leaving a monotone 1-D root-find in eta; interior
/// solutions satisfy E_rho[KL] = eps to near machine precision.
DualSolution minimize_dual(const UpdateBlocks& blocks, const LinGaussPolicy& policy,
                           const GaussianDist& rho, double eps, double beta);

/// pi' = N(F L s + F f, (eta + omega) F); covariance symmetrized.
LinGaussPolicy closed_form_update(const LinGaussPolicy& policy, const UpdateBlocks& blocks,
                                  const DualVars& dv);

/// Full per-time-step update: entropy target, dual minimization, closed-form
/// policy, and verification of the achieved KL/entropy.
UpdateResult update_timestep(const LinGaussPolicy& policy, const QuadraticModel& q,
                             const GaussianDist& rho, double eps, double beta0);

}  // namespace moto

#endif
