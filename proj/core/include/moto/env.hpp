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

#ifndef MOTO_ENV_HPP
#define MOTO_ENV_HPP

#include "moto/common.hpp"

namespace moto {

struct EnvSpec {
  int d_s = 0;
  int d_a = 0;
  int horizon = 0;  // T
};

/// Finite-horizon environment. Time-steps are 1-based (t in 1..T).
/// Implementations are immutable after construction; stepping is pure given
/// an explicit RNG, so rollouts may run in parallel with independent streams.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual EnvSpec spec() const = 0;
  virtual Vector initial_state(Rng& rng) const = 0;
  virtual Vector step(int t, const Vector& s, const Vector& a, Rng& rng) const = 0;
  virtual double reward(int t, const Vector& s, const Vector& a) const = 0;
};

}  // namespace moto

#endif
