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

#include "moto/linear_env.hpp"

namespace moto {

namespace {

// Lower Cholesky factor; accepts PSD input (zero factor for zero matrix).
Matrix psd_chol(const Matrix& m, const char* context) {
  if (m.isZero(0.0)) return Matrix::Zero(m.rows(), m.cols());
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    // Semi-definite case: fall back to an eigendecomposition square root.
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m));
    if (es.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff())) {
      throw NumericalError(std::string(context) + ": matrix not PSD");
    }
    return es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  }
  return llt.matrixL();
}

Vector draw_gaussian(const Matrix& chol, Rng& rng) {
  std::normal_distribution<double> unit(0.0, 1.0);
  Vector z(chol.cols());
  for (int i = 0; i < z.size(); ++i) z[i] = unit(rng);
  return chol * z;
}

}  // namespace

void LinearEnvParams::validate() const {
  const int d_s = state_dim();
  const int d_a = action_dim();
  if (A.cols() != d_s || B.rows() != d_s) {
    throw std::invalid_argument("linear env: A/B dimension mismatch");
  }
  if (noise_cov.rows() != d_s || noise_cov.cols() != d_s) {
    throw std::invalid_argument("linear env: noise_cov dimension mismatch");
  }
  if (R_ss.rows() != d_s || R_ss.cols() != d_s || R_aa.rows() != d_a || R_aa.cols() != d_a ||
      r_s.size() != d_s) {
    throw std::invalid_argument("linear env: reward dimension mismatch");
  }
  if (initial_state_dist.dim() != d_s) {
    throw std::invalid_argument("linear env: initial state dimension mismatch");
  }
  if (horizon < 1) throw std::invalid_argument("linear env: horizon < 1");
  // Well-posed LQR needs R_aa negative definite.
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(R_aa));
  if (es.eigenvalues().maxCoeff() >= 0.0) {
    throw std::invalid_argument("linear env: R_aa must be negative definite");
  }
}

LinearEnvParams LinearEnvParams::default_instance(double noise_std, int horizon) {
  LinearEnvParams p;
  p.A = Matrix(2, 2);
  p.A << 1.0, 0.1, -0.05, 0.98;
  p.B = Matrix(2, 1);
  p.B << 0.05, 0.1;
  p.noise_cov = noise_std * noise_std * Matrix::Identity(2, 2);
  p.R_ss = Matrix(2, 2);
  p.R_ss << -1.0, 0.0, 0.0, -0.1;
  p.R_aa = -0.1 * Matrix::Identity(1, 1);
  p.r_s = Vector::Zero(2);
  p.initial_state_dist.mean = Vector(2);
  p.initial_state_dist.mean << 1.0, 0.5;
  p.initial_state_dist.cov = 0.05 * Matrix::Identity(2, 2);
  p.horizon = horizon;
  return p;
}

Vector linear_step(const LinearEnvParams& p, const Vector& s, const Vector& a, Rng& rng) {
  Vector next = p.A * s + p.B * a;
  if (!p.noise_cov.isZero(0.0)) {
    next += draw_gaussian(psd_chol(p.noise_cov, "linear_step"), rng);
  }
  return next;
}

double linear_reward(const LinearEnvParams& p, const Vector& s, const Vector& a) {
  return 0.5 * s.dot(p.R_ss * s) + 0.5 * a.dot(p.R_aa * a) + s.dot(p.r_s);
}

LinearEnv::LinearEnv(LinearEnvParams params) : params_(std::move(params)) {
  params_.validate();
  noise_chol_ = psd_chol(params_.noise_cov, "LinearEnv noise_cov");
  init_chol_ = psd_chol(params_.initial_state_dist.cov, "LinearEnv initial_state_dist");
}

EnvSpec LinearEnv::spec() const {
  return {params_.state_dim(), params_.action_dim(), params_.horizon};
}

Vector LinearEnv::initial_state(Rng& rng) const {
  return params_.initial_state_dist.mean + draw_gaussian(init_chol_, rng);
}

Vector LinearEnv::step(int, const Vector& s, const Vector& a, Rng& rng) const {
  Vector next = params_.A * s + params_.B * a;
  if (!noise_chol_.isZero(0.0)) next += draw_gaussian(noise_chol_, rng);
  return next;
}

double LinearEnv::reward(int, const Vector& s, const Vector& a) const {
  return linear_reward(params_, s, a);
}

}  // namespace moto
