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

#ifndef MOTO_PENDULUM_HPP
#define MOTO_PENDULUM_HPP

#include "moto/env.hpp"

namespace moto {

/// n-link planar pendulum, point mass at each link tip. State is
/// (q, qdot): relative joint angles (unwrapped, q = 0 upright) and joint
/// velocities. Actions are joint torques, clipped to +/- torque_limit.
struct PendulumParams {
  int n_links = 2;
  Vector masses;   // kg, per link
  Vector lengths;  // m, per link
  double gravity = 9.81;
  double torque_limit = 25.0;
  bool joint_limit_enabled = false;
  double joint_limit_threshold = 2.0 * M_PI / 3.0;  // rad, joints >= 2
  double joint_limit_kp = 100.0;
  double joint_limit_kd = 10.0;
  double dt = 0.02;
  int substeps = 4;
  int horizon = 100;
  Vector state_cost_weights;  // length 2 n_links (angles then velocities)
  double action_cost_weight = 1e-3;
  int cost_window = 20;
  double init_noise_std = 0.01;

  static PendulumParams default_double_link();
  static PendulumParams default_quad_link();
  void validate() const;
};

/// One control step: RK4 over `substeps` subdivisions; torque recomputed at
/// each substep entry (clip, then joint-limit push-back override).
Vector pendulum_step(const PendulumParams& params, const Vector& state, const Vector& action);

double pendulum_reward(const PendulumParams& params, int t, const Vector& s, const Vector& a);

/// Total mechanical energy (kinetic + potential), zero of potential at the
/// base pivot height.
double pendulum_energy(const PendulumParams& params, const Vector& state);

/// Hanging rest state: q1 = pi, remaining angles and all velocities zero.
Vector pendulum_hanging_state(const PendulumParams& params);

class PendulumEnv final : public Environment {
 public:
  explicit PendulumEnv(PendulumParams params);
  EnvSpec spec() const override;
  Vector initial_state(Rng& rng) const override;
  Vector step(int t, const Vector& s, const Vector& a, Rng& rng) const override;
  double reward(int t, const Vector& s, const Vector& a) const override;
  const PendulumParams& params() const { return params_; }

 private:
  PendulumParams params_;
};

}  // namespace moto

#endif
