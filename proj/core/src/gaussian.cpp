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

#include "moto/gaussian.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace moto {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;

void check_same_dim(const GaussianDist& p, const GaussianDist& q, const char* context) {
  if (p.dim() != q.dim() || p.cov.rows() != q.cov.rows()) {
    throw std::invalid_argument(std::string(context) + ": dimension mismatch");
  }
}
}  // namespace

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  const int workers = std::min(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  std::atomic<int> next{0};
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

Eigen::LLT<Matrix> checked_llt(const Matrix& cov, const char* context) {
  if (cov.rows() != cov.cols()) {
    throw std::invalid_argument(std::string(context) + ": covariance not square");
  }
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw NumericalError(std::string(context) + ": covariance not positive definite");
  }
  return llt;
}

Eigen::LLT<Matrix> jittered_llt(const Matrix& cov, Matrix* out, const char* context) {
  const int d = static_cast<int>(cov.rows());
  const double base = cov.trace() / std::max(1, d);
  Matrix m = symmetrize(cov);
  Eigen::LLT<Matrix> llt(m);
  double jitter = 1e-9 * std::abs(base);
  if (jitter == 0.0) jitter = 1e-12;
  while (llt.info() != Eigen::Success && jitter <= 1e-3 * std::max(std::abs(base), 1.0)) {
    m = symmetrize(cov) + jitter * Matrix::Identity(d, d);
    llt.compute(m);
    jitter *= 10.0;
  }
  if (llt.info() != Eigen::Success) {
    throw NumericalError(std::string(context) + ": covariance not PD after jitter ladder");
  }
  if (out != nullptr) *out = m;
  return llt;
}

double log_det_from_llt(const Eigen::LLT<Matrix>& llt) {
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

double kl_gaussian(const GaussianDist& p, const GaussianDist& q) {
  check_same_dim(p, q, "kl_gaussian");
  const int d = p.dim();
  auto llt_p = checked_llt(p.cov, "kl_gaussian(p)");
  auto llt_q = checked_llt(q.cov, "kl_gaussian(q)");
  const Matrix qinv_p = llt_q.solve(p.cov);
  const Vector diff = p.mean - q.mean;
  const double maha = diff.dot(llt_q.solve(diff));
  const double logdet = log_det_from_llt(llt_q) - log_det_from_llt(llt_p);
  return 0.5 * (qinv_p.trace() + maha - d + logdet);
}

double entropy_gaussian(const GaussianDist& p) {
  auto llt = checked_llt(p.cov, "entropy_gaussian");
  const int d = p.dim();
  return 0.5 * (d * (1.0 + kLog2Pi) + log_det_from_llt(llt));
}

double policy_entropy(const LinGaussPolicy& p) {
  auto llt = checked_llt(p.cov, "policy_entropy");
  const int d = p.action_dim();
  return 0.5 * (d * (1.0 + kLog2Pi) + log_det_from_llt(llt));
}

double gaussian_log_density(const GaussianDist& p, const Vector& x) {
  auto llt = checked_llt(p.cov, "gaussian_log_density");
  const Vector diff = x - p.mean;
  const double maha = diff.dot(llt.solve(diff));
  return -0.5 * (p.dim() * kLog2Pi + log_det_from_llt(llt) + maha);
}

double expected_policy_kl(const GaussianDist& rho, const LinGaussPolicy& p_new,
                          const LinGaussPolicy& p_old) {
  if (p_new.state_dim() != p_old.state_dim() || p_new.action_dim() != p_old.action_dim() ||
      rho.dim() != p_new.state_dim()) {
    throw std::invalid_argument("expected_policy_kl: dimension mismatch");
  }
  const int d_a = p_new.action_dim();
  auto llt_old = checked_llt(p_old.cov, "expected_policy_kl(old)");
  auto llt_new = checked_llt(p_new.cov, "expected_policy_kl(new)");

  const Matrix gain_diff = p_new.gain - p_old.gain;
  const Vector bias_diff = p_new.bias - p_old.bias;

  // KL = 0.5 [ tr(S_old^-1 S_new) - d + log|S_old|/|S_new| + E ||D s + b||^2_{S_old^-1} ]
  const double trace_term = llt_old.solve(p_new.cov).trace();
  const double logdet = log_det_from_llt(llt_old) - log_det_from_llt(llt_new);
  const Vector mean_shift = gain_diff * rho.mean + bias_diff;
  const double mean_term = mean_shift.dot(llt_old.solve(mean_shift));
  const Matrix m = gain_diff.transpose() * llt_old.solve(gain_diff);
  const double state_term = (m * rho.cov).trace();
  return 0.5 * (trace_term - d_a + logdet + mean_term + state_term);
}

GaussianDist weighted_mle_gaussian(const Matrix& X, const Vector& weights) {
  const int d = static_cast<int>(X.rows());
  const int n = static_cast<int>(X.cols());
  if (weights.size() != n) {
    throw std::invalid_argument("weighted_mle_gaussian: weight count mismatch");
  }
  if (weights.minCoeff() < 0.0) {
    throw std::invalid_argument("weighted_mle_gaussian: negative weight");
  }
  int nonzero = 0;
  for (int i = 0; i < n; ++i) {
    if (weights[i] > 0.0) ++nonzero;
  }
  const double wsum = weights.sum();
  if (nonzero < d + 1 || wsum <= 0.0) {
    throw NumericalError("weighted_mle_gaussian: degenerate fit, need at least dim+1 weighted samples");
  }

  GaussianDist out;
  out.mean = (X * weights) / wsum;
  const Matrix centered = X.colwise() - out.mean;
  Matrix cov = Matrix::Zero(d, d);
  cov.selfadjointView<Eigen::Lower>().rankUpdate(
      centered * weights.cwiseSqrt().asDiagonal(), 1.0 / wsum);
  cov.triangularView<Eigen::StrictlyUpper>() = cov.transpose();
  jittered_llt(cov, &out.cov, "weighted_mle_gaussian");
  out.cov = symmetrize(out.cov);
  return out;
}

GaussianDist weighted_mle_gaussian(std::span<const Vector> samples,
                                   std::span<const double> weights) {
  if (samples.empty()) {
    throw std::invalid_argument("weighted_mle_gaussian: no samples");
  }
  if (samples.size() != weights.size()) {
    throw std::invalid_argument("weighted_mle_gaussian: weight count mismatch");
  }
  const int d = static_cast<int>(samples[0].size());
  const int n = static_cast<int>(samples.size());
  Matrix X(d, n);
  Vector w(n);
  for (int i = 0; i < n; ++i) {
    X.col(i) = samples[static_cast<std::size_t>(i)];
    w[i] = weights[static_cast<std::size_t>(i)];
  }
  return weighted_mle_gaussian(X, w);
}

}  // namespace moto
