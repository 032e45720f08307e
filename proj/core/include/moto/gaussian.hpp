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

#ifndef MOTO_GAUSSIAN_HPP
#define MOTO_GAUSSIAN_HPP

#include <span>
#include <vector>

#include "moto/common.hpp"

namespace moto {

/// Multivariate Gaussian N(mean, cov). cov must be symmetric positive
/// definite for all calculus routines below.
struct GaussianDist {
  Vector mean;
  Matrix cov;

  int dim() const { return static_cast<int>(mean.size()); }
};

/// Time-step policy a | s ~ N(gain * s + bias, cov).
struct LinGaussPolicy {
  Matrix gain;  // d_a x d_s
  Vector bias;  // d_a
  Matrix cov;   // d_a x d_a, PD

  int state_dim() const { return static_cast<int>(gain.cols()); }
  int action_dim() const { return static_cast<int>(gain.rows()); }
  Vector mean_action(const Vector& s) const { return gain * s + bias; }
};

/// Cholesky factorization that throws NumericalError instead of returning
/// silently invalid results. `context` names the caller in the message.
Eigen::LLT<Matrix> checked_llt(const Matrix& cov, const char* context);

/// Cholesky with the fit-time jitter ladder: on failure adds
/// 1e-9 * tr/d * I escalating x10 up to 1e-3 * tr/d, then throws.
/// On success returns the (possibly jittered) matrix through `out`.
Eigen::LLT<Matrix> jittered_llt(const Matrix& cov, Matrix* out, const char* context);

double log_det_from_llt(const Eigen::LLT<Matrix>& llt);

/// KL(p || q) in nats, exact closed form.
double kl_gaussian(const GaussianDist& p, const GaussianDist& q);

/// Differential entropy 0.5 * log|2 pi e cov| in nats.
double entropy_gaussian(const GaussianDist& p);

/// Entropy of the conditional action distribution (state independent).
double policy_entropy(const LinGaussPolicy& p);

double gaussian_log_density(const GaussianDist& p, const Vector& x);

/// E_{s ~ rho}[ KL(p_new(.|s) || p_old(.|s)) ], exact closed form.
double expected_policy_kl(const GaussianDist& rho, const LinGaussPolicy& p_new,
                          const LinGaussPolicy& p_old);

/// Weighted maximum-likelihood Gaussian fit. Covariance is normalized by the
/// weight sum and regularized to PD via the jitter ladder. Requires at least
/// dim+1 samples with nonzero weight.
GaussianDist weighted_mle_gaussian(std::span<const Vector> samples,
                                   std::span<const double> weights);

/// Column-major batch variant: samples are the columns of X.
GaussianDist weighted_mle_gaussian(const Matrix& X, const Vector& weights);

}  // namespace moto

#endif
