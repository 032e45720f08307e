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

#ifndef MOTO_ROLLOUT_HPP
#define MOTO_ROLLOUT_HPP

#include <deque>
#include <iosfwd>
#include <vector>

#include "moto/env.hpp"
#include "moto/gaussian.hpp"

namespace moto {

struct TransitionRecord {
  int iter = 0;  // iteration index i
  int t = 0;     // time-step, 1-based
  Vector s;
  Vector a;
  double r = 0.0;
  Vector s_next;
};

/// One episode: exactly T transitions, t = 1..T in order.
using Trajectory = std::vector<TransitionRecord>;

/// Everything retained for one iteration: the M trajectories, the policy
/// that generated them, and the per-t fitted state distributions (filled in
/// during the backward sweep).
struct IterationData {
  int iter = 0;
  std::vector<Trajectory> trajectories;
  std::vector<LinGaussPolicy> policy;      // index t-1
  std::vector<GaussianDist> state_dists;   // index t-1; may lag the sweep
};

/// Rolling store of the K most recent iterations with their policies and
/// state distributions; older iterations are evicted wholesale.
class Dataset {
 public:
  explicit Dataset(int k_last = 10);

  void add_iteration(int iter, std::vector<Trajectory> trajectories,
                     std::vector<LinGaussPolicy> policy);
  void set_state_dist(int iter, int t, GaussianDist dist);

  const std::deque<IterationData>& iterations() const { return iterations_; }
  const IterationData& iteration(int iter) const;
  bool has_iteration(int iter) const;
  int k_last() const { return k_last_; }

  /// All stored records at time-step t, oldest iteration first, episode
  /// order preserved within an iteration.
  std::vector<const TransitionRecord*> records_at(int t) const;

 private:
  int k_last_;
  std::deque<IterationData> iterations_;
};

/// Executes the policy for M episodes. Per-episode RNG streams are derived
/// from (seed, iter, episode), so results are independent of the thread
/// count. Throws NumericalError naming (episode, t) on a non-finite state.
std::vector<Trajectory> sample_rollouts(const Environment& env,
                                        const std::vector<LinGaussPolicy>& policy, int M,
                                        std::uint64_t seed, int iter, int threads = 1);

/// Mean and standard error of the per-episode summed reward. With a single
/// episode the standard error is NaN (undefined).
std::pair<double, double> policy_return(const std::vector<Trajectory>& trajectories);

/// CSV dump, header iter,t,episode,s...,a...,r.
void write_trajectories_csv(std::ostream& os, const std::vector<Trajectory>& trajectories);

}  // namespace moto

#endif
