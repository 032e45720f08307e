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

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "moto/linear_env.hpp"
#include "moto/pendulum.hpp"
#include "moto/rollout.hpp"

using namespace moto;

namespace {

std::vector<LinGaussPolicy> constant_policy(const EnvSpec& spec, double sigma_sq) {
  LinGaussPolicy pol;
  pol.gain = Matrix::Zero(spec.d_a, spec.d_s);
  pol.bias = Vector::Zero(spec.d_a);
  pol.cov = sigma_sq * Matrix::Identity(spec.d_a, spec.d_a);
  return std::vector<LinGaussPolicy>(spec.horizon, pol);
}

}  // namespace

TEST_CASE("sample_rollouts shape and reward consistency") {
  const PendulumEnv env(PendulumParams::default_double_link());
  const auto policy = constant_policy(env.spec(), 1.0);
  const auto trajectories = sample_rollouts(env, policy, 20, 1, 0);
  CHECK(trajectories.size() == 20);
  int records = 0;
  for (const auto& traj : trajectories) {
    CHECK(static_cast<int>(traj.size()) == env.spec().horizon);
    for (int t = 1; t <= env.spec().horizon; ++t) {
      const TransitionRecord& rec = traj[t - 1];
      CHECK(rec.t == t);
      CHECK(rec.r == env.reward(t, rec.s, rec.a));
      if (t > 1) CHECK((rec.s - traj[t - 2].s_next).cwiseAbs().maxCoeff() == 0.0);
      ++records;
    }
  }
  CHECK(records == 20 * env.spec().horizon);
}

TEST_CASE("sample_rollouts deterministic and thread-count independent") {
  const LinearEnv env(LinearEnvParams::default_instance());
  const auto policy = constant_policy(env.spec(), 1.0);
  const auto a = sample_rollouts(env, policy, 16, 99, 2, 1);
  const auto b = sample_rollouts(env, policy, 16, 99, 2, 8);
  REQUIRE(a.size() == b.size());
  for (std::size_t e = 0; e < a.size(); ++e) {
    for (std::size_t t = 0; t < a[e].size(); ++t) {
      CHECK((a[e][t].s - b[e][t].s).cwiseAbs().maxCoeff() == 0.0);
      CHECK((a[e][t].a - b[e][t].a).cwiseAbs().maxCoeff() == 0.0);
      CHECK(a[e][t].r == b[e][t].r);
    }
  }
  // Different seed changes the data.
  const auto c = sample_rollouts(env, policy, 16, 100, 2, 1);
  CHECK((a[0][0].a - c[0][0].a).cwiseAbs().maxCoeff() != 0.0);
}

TEST_CASE("near-deterministic policy collapses trajectories") {
  const PendulumEnv env(PendulumParams::default_double_link());
  // Sigma -> 1e-24 (sigma = 1e-12): all episodes share the initial-state
  // noise scale but identical action noise suppression.
  PendulumParams params = PendulumParams::default_double_link();
  params.init_noise_std = 0.0;
  const PendulumEnv det_env(params);
  const auto policy = constant_policy(det_env.spec(), 1e-24);
  const auto trajectories = sample_rollouts(det_env, policy, 5, 3, 0);
  for (std::size_t e = 1; e < trajectories.size(); ++e) {
    for (std::size_t t = 0; t < trajectories[e].size(); ++t) {
      CHECK((trajectories[e][t].s - trajectories[0][t].s).cwiseAbs().maxCoeff() < 1e-6);
    }
  }
}

TEST_CASE("policy_return statistics") {
  Trajectory traj(3);
  for (int t = 1; t <= 3; ++t) {
    traj[t - 1].t = t;
    traj[t - 1].r = -1.0;
  }
  // Single trajectory: stderr undefined (NaN flag).
  const auto [m1, s1] = policy_return({traj});
  CHECK(m1 == -3.0);
  CHECK(std::isnan(s1));

  Trajectory zeros(3);
  for (int t = 1; t <= 3; ++t) zeros[t - 1].t = t;
  const auto [m2, s2] = policy_return({zeros, zeros});
  CHECK(m2 == 0.0);
  CHECK(s2 == 0.0);

  // Two distinct returns: mean and stderr = sample std / sqrt(M).
  Trajectory other = traj;
  other[0].r = -4.0;
  const auto [m3, s3] = policy_return({traj, other});
  CHECK(m3 == doctest::Approx(-4.5));
  CHECK(s3 == doctest::Approx(std::sqrt(4.5) / std::sqrt(2.0)));
}

TEST_CASE("dataset window eviction and slicing") {
  const LinearEnv env(LinearEnvParams::default_instance());
  const auto policy = constant_policy(env.spec(), 1.0);
  Dataset data(3);
  for (int i = 1; i <= 5; ++i) {
    data.add_iteration(i, sample_rollouts(env, policy, 4, 0, i), policy);
  }
  CHECK(data.iterations().size() == 3);
  CHECK(!data.has_iteration(2));
  CHECK(data.has_iteration(3));
  CHECK(data.iteration(5).iter == 5);

  // Slicing by t partitions the stored records exactly.
  std::size_t total = 0;
  for (int t = 1; t <= env.spec().horizon; ++t) {
    const auto recs = data.records_at(t);
    CHECK(recs.size() == 3 * 4);
    for (const auto* rec : recs) CHECK(rec->t == t);
    total += recs.size();
  }
  CHECK(total == 3u * 4u * static_cast<std::size_t>(env.spec().horizon));
}

TEST_CASE("trajectory csv header and row count") {
  const LinearEnv env(LinearEnvParams::default_instance());
  const auto policy = constant_policy(env.spec(), 1.0);
  const auto trajectories = sample_rollouts(env, policy, 2, 0, 1);
  std::ostringstream os;
  write_trajectories_csv(os, trajectories);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  CHECK(header == "iter,t,episode,s0,s1,a0,r");
  int rows = 0;
  std::string line;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 2 * env.spec().horizon);
}
