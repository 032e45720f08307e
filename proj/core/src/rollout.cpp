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

#include "moto/rollout.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace moto {

Dataset::Dataset(int k_last) : k_last_(k_last) {
  if (k_last < 1) throw std::invalid_argument("Dataset: k_last < 1");
}

void Dataset::add_iteration(int iter, std::vector<Trajectory> trajectories,
                            std::vector<LinGaussPolicy> policy) {
  IterationData data;
  data.iter = iter;
  data.trajectories = std::move(trajectories);
  data.policy = std::move(policy);
  data.state_dists.resize(data.policy.size());
  iterations_.push_back(std::move(data));
  while (static_cast<int>(iterations_.size()) > k_last_) iterations_.pop_front();
}

void Dataset::set_state_dist(int iter, int t, GaussianDist dist) {
  for (auto& it : iterations_) {
    if (it.iter == iter) {
      it.state_dists.at(t - 1) = std::move(dist);
      return;
    }
  }
  throw std::invalid_argument("Dataset::set_state_dist: iteration not stored");
}

const IterationData& Dataset::iteration(int iter) const {
  for (const auto& it : iterations_) {
    if (it.iter == iter) return it;
  }
  throw std::invalid_argument("Dataset::iteration: iteration not stored");
}

bool Dataset::has_iteration(int iter) const {
  for (const auto& it : iterations_) {
    if (it.iter == iter) return true;
  }
  return false;
}

std::vector<const TransitionRecord*> Dataset::records_at(int t) const {
  std::vector<const TransitionRecord*> out;
  for (const auto& it : iterations_) {
    for (const auto& traj : it.trajectories) {
      out.push_back(&traj.at(t - 1));
    }
  }
  return out;
}

std::vector<Trajectory> sample_rollouts(const Environment& env,
                                        const std::vector<LinGaussPolicy>& policy, int M,
                                        std::uint64_t seed, int iter, int threads) {
  const EnvSpec spec = env.spec();
  if (static_cast<int>(policy.size()) != spec.horizon) {
    throw std::invalid_argument("sample_rollouts: policy horizon mismatch");
  }
  std::vector<Matrix> chol(spec.horizon);
  for (int t = 0; t < spec.horizon; ++t) {
    chol[t] = checked_llt(policy[t].cov, "sample_rollouts policy cov").matrixL();
  }

  std::vector<Trajectory> trajectories(M);
  std::vector<std::string> errors(M);
  parallel_for(M, threads, [&](int ep) {
    Rng rng = make_stream(seed, static_cast<std::uint64_t>(iter),
                          static_cast<std::uint64_t>(ep));
    std::normal_distribution<double> unit(0.0, 1.0);
    Trajectory traj;
    traj.reserve(spec.horizon);
    Vector s = env.initial_state(rng);
    for (int t = 1; t <= spec.horizon; ++t) {
      if (!s.allFinite()) {
        errors[ep] = "sample_rollouts: non-finite state at episode " + std::to_string(ep) +
                     ", t = " + std::to_string(t);
        return;
      }
      const LinGaussPolicy& pol = policy[t - 1];
      Vector z(spec.d_a);
      for (int k = 0; k < spec.d_a; ++k) z[k] = unit(rng);
      const Vector a = pol.mean_action(s) + chol[t - 1] * z;
      const double r = env.reward(t, s, a);
      Vector s_next = env.step(t, s, a, rng);
      traj.push_back({iter, t, s, a, r, s_next});
      s = std::move(s_next);
    }
    trajectories[ep] = std::move(traj);
  });
  for (const auto& err : errors) {
    if (!err.empty()) throw NumericalError(err);
  }
  return trajectories;
}

std::pair<double, double> policy_return(const std::vector<Trajectory>& trajectories) {
  const int n = static_cast<int>(trajectories.size());
  if (n == 0) throw std::invalid_argument("policy_return: no trajectories");
  Vector returns(n);
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (const auto& rec : trajectories[i]) sum += rec.r;
    returns[i] = sum;
  }
  const double mean = returns.mean();
  if (n == 1) return {mean, std::numeric_limits<double>::quiet_NaN()};
  const double var = (returns.array() - mean).square().sum() / (n - 1);
  return {mean, std::sqrt(var / n)};
}

void write_trajectories_csv(std::ostream& os, const std::vector<Trajectory>& trajectories) {
  if (trajectories.empty()) return;
  const int d_s = static_cast<int>(trajectories[0][0].s.size());
  const int d_a = static_cast<int>(trajectories[0][0].a.size());
  os << "iter,t,episode";
  for (int i = 0; i < d_s; ++i) os << ",s" << i;
  for (int i = 0; i < d_a; ++i) os << ",a" << i;
  os << ",r\n";
  os.precision(17);
  for (std::size_t ep = 0; ep < trajectories.size(); ++ep) {
    for (const auto& rec : trajectories[ep]) {
      os << rec.iter << ',' << rec.t << ',' << ep;
      for (int i = 0; i < d_s; ++i) os << ',' << rec.s[i];
      for (int i = 0; i < d_a; ++i) os << ',' << rec.a[i];
      os << ',' << rec.r << '\n';
    }
  }
}

}  // namespace moto
