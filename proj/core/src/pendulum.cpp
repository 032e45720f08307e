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

#include "moto/pendulum.hpp"

#include <cmath>

namespace moto {

namespace {

// Dynamics are integrated in absolute link angles alpha = W q with W the
// lower-triangular ones matrix; the mass matrix is then
//   M_jk = mbar_max(j,k) l_j l_k cos(alpha_j - alpha_k),
// with mbar_j the total mass carried by link j and below the chain tip.
struct AbsCoords {
  Vector alpha;
  Vector alpha_dot;
};

AbsCoords to_absolute(const Vector& state, int n) {
  AbsCoords out;
  out.alpha = Vector(n);
  out.alpha_dot = Vector(n);
  double acc_q = 0.0;
  double acc_qd = 0.0;
  for (int i = 0; i < n; ++i) {
    acc_q += state[i];
    acc_qd += state[n + i];
    out.alpha[i] = acc_q;
    out.alpha_dot[i] = acc_qd;
  }
  return out;
}

Vector from_absolute_diff(const Vector& v, int n) {
  // W^{-1}: first differences.
  Vector out(n);
  out[0] = v[0];
  for (int i = 1; i < n; ++i) out[i] = v[i] - v[i - 1];
  return out;
}

Vector tail_mass(const PendulumParams& p) {
  Vector mbar(p.n_links);
  double acc = 0.0;
  for (int i = p.n_links - 1; i >= 0; --i) {
    acc += p.masses[i];
    mbar[i] = acc;
  }
  return mbar;
}

// alpha-space acceleration given joint torques tau (generalized forces on
// the relative coordinates).
Vector abs_accel(const PendulumParams& p, const Vector& alpha, const Vector& alpha_dot,
                 const Vector& tau) {
  const int n = p.n_links;
  const Vector mbar = tail_mass(p);
  Matrix mass(n, n);
  Vector rhs(n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const double c = mbar[std::max(j, k)] * p.lengths[j] * p.lengths[k];
      mass(j, k) = c * std::cos(alpha[j] - alpha[k]);
    }
  }
  for (int j = 0; j < n; ++j) {
    double coriolis = 0.0;
    for (int k = 0; k < n; ++k) {
      const double c = mbar[std::max(j, k)] * p.lengths[j] * p.lengths[k];
      coriolis += c * std::sin(alpha[j] - alpha[k]) * alpha_dot[k] * alpha_dot[k];
    }
    const double gravity = -p.gravity * mbar[j] * p.lengths[j] * std::sin(alpha[j]);
    // Q_alpha,j = tau_j - tau_{j+1}
    const double force = tau[j] - (j + 1 < n ? tau[j + 1] : 0.0);
    rhs[j] = force - coriolis - gravity;
  }
  return mass.ldlt().solve(rhs);
}

// Effective torque at a substep entry: clip to the limit, then replace the
// policy torque with the push-back controller on limited joints.
Vector effective_torque(const PendulumParams& p, const Vector& q, const Vector& qd,
                        const Vector& action) {
  Vector tau = action.cwiseMax(-p.torque_limit).cwiseMin(p.torque_limit);
  if (p.joint_limit_enabled) {
    for (int j = 1; j < p.n_links; ++j) {
      if (std::abs(q[j]) > p.joint_limit_threshold) {
        const double target = (q[j] > 0.0 ? 1.0 : -1.0) * p.joint_limit_threshold;
        double pb = -p.joint_limit_kp * (q[j] - target) - p.joint_limit_kd * qd[j];
        tau[j] = std::clamp(pb, -p.torque_limit, p.torque_limit);
      }
    }
  }
  return tau;
}

}  // namespace

PendulumParams PendulumParams::default_double_link() {
  PendulumParams p;
  p.n_links = 2;
  p.masses = Vector::Ones(2);
  p.lengths = Vector::Ones(2);
  p.state_cost_weights = Vector(4);
  p.state_cost_weights << 1e2, 1e2, 1e0, 1e0;
  return p;
}

PendulumParams PendulumParams::default_quad_link() {
  PendulumParams p;
  p.n_links = 4;
  p.masses = Vector::Ones(4);
  p.lengths = Vector::Ones(4);
  p.joint_limit_enabled = true;
  p.state_cost_weights = Vector(8);
  p.state_cost_weights << 1e2, 1e2, 1e2, 1e2, 1e0, 1e0, 1e0, 1e0;
  return p;
}

void PendulumParams::validate() const {
  if (n_links < 1) throw std::invalid_argument("pendulum: n_links < 1");
  if (masses.size() != n_links || lengths.size() != n_links) {
    throw std::invalid_argument("pendulum: masses/lengths size mismatch");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("pendulum: dt must be > 0");
  if (substeps < 1) throw std::invalid_argument("pendulum: substeps < 1");
  if (!(torque_limit > 0.0)) throw std::invalid_argument("pendulum: torque_limit must be > 0");
  if (horizon < 1) throw std::invalid_argument("pendulum: horizon < 1");
  if (cost_window > horizon) throw std::invalid_argument("pendulum: cost_window > horizon");
  if (state_cost_weights.size() != 2 * n_links) {
    throw std::invalid_argument("pendulum: state_cost_weights size mismatch");
  }
}

Vector pendulum_step(const PendulumParams& p, const Vector& state, const Vector& action) {
  const int n = p.n_links;
  if (state.size() != 2 * n || action.size() != n) {
    throw std::invalid_argument("pendulum_step: dimension mismatch");
  }
  if (!state.allFinite() || !action.allFinite()) {
    throw NumericalError("pendulum_step: non-finite input");
  }
  AbsCoords ac = to_absolute(state, n);
  const double h = p.dt / p.substeps;
  Vector q(n), qd(n);
  for (int sub = 0; sub < p.substeps; ++sub) {
    // Relative coordinates at substep entry for limit handling.
    q[0] = ac.alpha[0];
    qd[0] = ac.alpha_dot[0];
    for (int i = 1; i < n; ++i) {
      q[i] = ac.alpha[i] - ac.alpha[i - 1];
      qd[i] = ac.alpha_dot[i] - ac.alpha_dot[i - 1];
    }
    const Vector tau = effective_torque(p, q, qd, action);

    const auto deriv = [&](const Vector& a, const Vector& ad) {
      return abs_accel(p, a, ad, tau);
    };
    const Vector k1_v = deriv(ac.alpha, ac.alpha_dot);
    const Vector k1_x = ac.alpha_dot;
    const Vector k2_v = deriv(ac.alpha + 0.5 * h * k1_x, ac.alpha_dot + 0.5 * h * k1_v);
    const Vector k2_x = ac.alpha_dot + 0.5 * h * k1_v;
    const Vector k3_v = deriv(ac.alpha + 0.5 * h * k2_x, ac.alpha_dot + 0.5 * h * k2_v);
    const Vector k3_x = ac.alpha_dot + 0.5 * h * k2_v;
    const Vector k4_v = deriv(ac.alpha + h * k3_x, ac.alpha_dot + h * k3_v);
    const Vector k4_x = ac.alpha_dot + h * k3_v;
    ac.alpha += (h / 6.0) * (k1_x + 2.0 * k2_x + 2.0 * k3_x + k4_x);
    ac.alpha_dot += (h / 6.0) * (k1_v + 2.0 * k2_v + 2.0 * k3_v + k4_v);
  }
  Vector out(2 * n);
  out.head(n) = from_absolute_diff(ac.alpha, n);
  out.tail(n) = from_absolute_diff(ac.alpha_dot, n);
  return out;
}

double pendulum_reward(const PendulumParams& p, int t, const Vector& s, const Vector& a) {
  const Vector clipped = a.cwiseMax(-p.torque_limit).cwiseMin(p.torque_limit);
  double r = -p.action_cost_weight * clipped.squaredNorm();
  if (t > p.horizon - p.cost_window) {
    r -= s.dot(p.state_cost_weights.asDiagonal() * s);
  }
  return r;
}

double pendulum_energy(const PendulumParams& p, const Vector& state) {
  const int n = p.n_links;
  const AbsCoords ac = to_absolute(state, n);
  const Vector mbar = tail_mass(p);
  double kinetic = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const double c = mbar[std::max(j, k)] * p.lengths[j] * p.lengths[k];
      kinetic += 0.5 * c * std::cos(ac.alpha[j] - ac.alpha[k]) * ac.alpha_dot[j] * ac.alpha_dot[k];
    }
  }
  double potential = 0.0;
  for (int j = 0; j < n; ++j) {
    potential += p.gravity * mbar[j] * p.lengths[j] * std::cos(ac.alpha[j]);
  }
  return kinetic + potential;
}

Vector pendulum_hanging_state(const PendulumParams& p) {
  Vector s = Vector::Zero(2 * p.n_links);
  s[0] = M_PI;
  return s;
}

PendulumEnv::PendulumEnv(PendulumParams params) : params_(std::move(params)) {
  params_.validate();
}

EnvSpec PendulumEnv::spec() const {
  return {2 * params_.n_links, params_.n_links, params_.horizon};
}

Vector PendulumEnv::initial_state(Rng& rng) const {
  Vector s = pendulum_hanging_state(params_);
  std::normal_distribution<double> noise(0.0, params_.init_noise_std);
  for (int i = 0; i < s.size(); ++i) s[i] += noise(rng);
  return s;
}

Vector PendulumEnv::step(int, const Vector& s, const Vector& a, Rng&) const {
  return pendulum_step(params_, s, a);
}

double PendulumEnv::reward(int t, const Vector& s, const Vector& a) const {
  return pendulum_reward(params_, t, s, a);
}

}  // namespace moto
