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

#ifndef MOTO_LINEAR_ENV_HPP
#define MOTO_LINEAR_ENV_HPP

#include "moto/env.hpp"
#include "moto/gaussian.hpp"

namespace moto {

/// Linear dynamics s' = A s + B a + xi, xi ~ N(0, noise_cov), with
/// time-independent quadratic reward
///   r(s,a) = 0.5 s'Rss s + 0.5 a'Raa a + s'rs.
/// Exactly solvable; serves as the correctness oracle environment.
struct LinearEnvParams {
  Matrix A;
  Matrix B;
  Matrix noise_cov;  // PSD; zero for the noiseless variant
  Matrix R_ss;       // NSD
  Matrix R_aa;       // ND
  Vector r_s;
  GaussianDist initial_state_dist;
  int horizon = 20;

  int state_dim() const { return static_cast<int>(A.rows()); }
  int action_dim() const { return static_cast<int>(B.cols()); }
  void validate() const;

  /// Small well-conditioned default instance (d_s = 2, d_a = 1).
  static LinearEnvParams default_instance(double noise_std = 1e-2, int horizon = 20);
};

Vector linear_step(const LinearEnvParams& p, const Vector& s, const Vector& a, Rng& rng);
double linear_reward(const LinearEnvParams& p, const Vector& s, const Vector& a);

class LinearEnv final : public Environment {
 public:
  explicit LinearEnv(LinearEnvParams params);
  EnvSpec spec() const override;
  Vector initial_state(Rng& rng) const override;
  Vector step(int t, const Vector& s, const Vector& a, Rng& rng) const override;
  double reward(int t, const Vector& s, const Vector& a) const override;
  const LinearEnvParams& params() const { return params_; }

 private:
  LinearEnvParams params_;
  Matrix noise_chol_;  // lower factor; zero matrix when noise_cov = 0
  Matrix init_chol_;
};

}  // namespace moto

#endif
