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

#ifndef MOTO_REUSE_HPP
#define MOTO_REUSE_HPP

#include "moto/rollout.hpp"

namespace moto {

/// (sum w)^2 / sum w^2.
double effective_sample_size(const Vector& weights);

/// log of the joint state-action density z(s,a) = rho(s) pol(a|s).
double log_state_action_density(const GaussianDist& rho, const LinGaussPolicy& pol,
                                const Vector& s, const Vector& a);

/// Gaussian fitted to the time-t states of all stored iterations j <= i,
/// each sample weighted gamma^(i-j).
GaussianDist fit_state_dist_mixture(const Dataset& data, int t, int cur_iter, double gamma);

struct ForwardFitResult {
  GaussianDist dist;
  double ess = 0.0;
  bool fell_back = false;  // ESS below floor; mixture estimate returned
};

/// Forward propagation: Gaussian fitted to the stored next-states at time t,
/// weighted z_t^i / z_t^{1:i} with z_t^i built from `rho_t` (the current
/// iteration's time-t estimate) and the data-collecting policies. Falls back
/// to the mixture fit when the weight ESS drops below ess_floor.
ForwardFitResult fit_state_dist_forward(const GaussianDist& rho_t, const Dataset& data, int t,
                                        int cur_iter, double ess_floor, double gamma);

/// Cross-time-step weight within one iteration: z_t / ((1/T) sum_t' z_t'),
/// all densities from `cur` (state_dists must be set for every t).
double iw_timestep(const IterationData& cur, int t, const Vector& s, const Vector& a);

/// Combined cross-time, cross-iteration weight z_t^i / z^{1:i} over the
/// stored window, with z_t^{1:i} the iteration average of z_t^j and z^{1:i}
/// the time average of z_t^{1:i}. Reduces to iw_timestep for a single
/// stored iteration.
double iw_full(const Dataset& data, int t, const Vector& s, const Vector& a);

enum class ReuseMode {
  none,           // current-iteration, same-t records, unit weights
  same_timestep,  // same-t records of the window, weights z_t^i / z_t^{1:i}
  full,           // all records of the window, weights z_t^i / z^{1:i}
};

struct WeightSet {
  std::vector<const TransitionRecord*> records;
  Vector weights;  // aligned with records; unnormalized
  double ess = 0.0;
};

/// Batch weight computation for the fitting sweep. The denominators are
/// shared across time-steps in `full` mode, so they are evaluated once at
/// construction; weights_at(t) then only evaluates the numerator densities.
/// Requires state_dists set for every stored iteration and time-step.
class WeightEngine {
 public:
  WeightEngine(const Dataset& data, ReuseMode mode, int threads = 1);
  WeightSet weights_at(int t) const;

 private:
  const Dataset& data_;
  ReuseMode mode_;
  int threads_;
  int horizon_ = 0;
  std::vector<const TransitionRecord*> all_records_;  // full mode
  Vector log_denom_;                                  // full mode, per record
};

}  // namespace moto

#endif
