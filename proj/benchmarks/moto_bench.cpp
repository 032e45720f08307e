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

#include <benchmark/benchmark.h>

#include "moto/gaussian.hpp"
#include "moto/pendulum.hpp"
#include "moto/quadratic.hpp"
#include "moto/update.hpp"

namespace {

void BM_PendulumStep(benchmark::State& state) {
  const moto::PendulumParams params = moto::PendulumParams::default_double_link();
  const moto::PendulumEnv env(params);
  moto::Rng rng(1);
  moto::Vector s = env.initial_state(rng);
  const moto::Vector a = moto::Vector::Constant(params.n_links, 0.5);
  for (auto _ : state) {
    s = env.step(1, s, a, rng);
    benchmark::DoNotOptimize(s.data());
  }
}
BENCHMARK(BM_PendulumStep);

void BM_QuadraticFit(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int n = 4 * moto::feature_dim(d, 1);
  moto::Rng rng(2);
  std::normal_distribution<double> gauss;
  moto::Matrix states(d, n);
  moto::Matrix actions(1, n);
  moto::Vector targets(n), weights(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) states(j, i) = gauss(rng);
    actions(0, i) = gauss(rng);
    targets[i] = gauss(rng);
    weights[i] = 1.0;
  }
  for (auto _ : state) {
    auto model = moto::fit_quadratic_q(states, actions, targets, weights, 1e-6);
    benchmark::DoNotOptimize(model.q_0);
  }
}
BENCHMARK(BM_QuadraticFit)->Arg(4)->Arg(8);

void BM_DualSolve(benchmark::State& state) {
  const int d_s = 4, d_a = 2;
  moto::Rng rng(3);
  std::normal_distribution<double> gauss;
  moto::Matrix G(d_a, d_a);
  for (int i = 0; i < d_a; ++i)
    for (int j = 0; j < d_a; ++j) G(i, j) = gauss(rng);
  moto::UpdateBlocks q;
  q.Q_aa = -(G * G.transpose() + 0.1 * moto::Matrix::Identity(d_a, d_a));
  q.Q_as = moto::Matrix::Random(d_a, d_s);
  q.q_a = moto::Vector::Random(d_a);
  moto::LinGaussPolicy pol{moto::Matrix::Zero(d_a, d_s), moto::Vector::Zero(d_a),
                            moto::Matrix::Identity(d_a, d_a)};
  moto::GaussianDist rho{moto::Vector::Zero(d_s), moto::Matrix::Identity(d_s, d_s)};
  const double beta = moto::entropy_target(pol, 0.1);
  for (auto _ : state) {
    auto sol = moto::minimize_dual(q, pol, rho, 0.1, beta);
    benchmark::DoNotOptimize(sol.dual_value);
  }
}
BENCHMARK(BM_DualSolve);

void BM_ExpectedPolicyKl(benchmark::State& state) {
  const int d_s = 8, d_a = 4;
  moto::LinGaussPolicy p{moto::Matrix::Random(d_a, d_s), moto::Vector::Random(d_a),
                          moto::Matrix::Identity(d_a, d_a)};
  moto::LinGaussPolicy q{moto::Matrix::Random(d_a, d_s), moto::Vector::Random(d_a),
                          2.0 * moto::Matrix::Identity(d_a, d_a)};
  moto::GaussianDist rho{moto::Vector::Random(d_s), moto::Matrix::Identity(d_s, d_s)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(moto::expected_policy_kl(rho, p, q));
  }
}
BENCHMARK(BM_ExpectedPolicyKl);

}  // namespace

BENCHMARK_MAIN();
