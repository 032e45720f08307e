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

#ifndef MOTO_COMMON_HPP
#define MOTO_COMMON_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>

namespace moto {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Rng = std::mt19937_64;

/// Thrown on numerical failures (non-PD matrices, singular solves,
/// infeasible dual points, non-finite states).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

inline Matrix symmetrize(const Matrix& a) { return 0.5 * (a + a.transpose()); }

inline bool is_symmetric(const Matrix& a, double rel_tol = 1e-10) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

// splitmix64; used to derive independent per-episode RNG streams.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic RNG stream for (seed, iteration, episode), independent of
/// scheduling order.
inline Rng make_stream(std::uint64_t seed, std::uint64_t iter, std::uint64_t episode) {
  return Rng(mix64(seed ^ mix64(iter ^ mix64(episode + 0x51ed270b7a64fc1dULL))));
}

/// Runs fn(i) for i in [0, n). Results must be written to disjoint slots so
/// the outcome is identical for any thread count.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace moto

#endif
