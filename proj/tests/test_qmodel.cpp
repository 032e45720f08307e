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
#include <random>
#include <vector>

#include "doctest.h"
#include "moto/quadratic.hpp"

using namespace moto;

namespace {

QuadraticModel random_model(int d_s, int d_a, Rng& rng) {
  std::normal_distribution<double> gauss;
  QuadraticModel q = QuadraticModel::zero(d_s, d_a);
  const auto fill = [&](Matrix& m) {
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) m(i, j) = gauss(rng);
  };
  fill(q.Q_as);
  Matrix tmp(d_a, d_a);
  fill(tmp);
  q.Q_aa = symmetrize(tmp);
  tmp.resize(d_s, d_s);
  fill(tmp);
  q.Q_ss = symmetrize(tmp);
  for (int i = 0; i < d_a; ++i) q.q_a[i] = gauss(rng);
  for (int i = 0; i < d_s; ++i) q.q_s[i] = gauss(rng);
  q.q_0 = gauss(rng);
  return q;
}

}  // namespace

TEST_CASE("feature dimension formula") {
  CHECK(feature_dim(1, 1) == 6);
  CHECK(feature_dim(2, 1) == 10);
  for (int d_s = 1; d_s <= 4; ++d_s) {
    for (int d_a = 1; d_a <= 3; ++d_a) {
      const int d = d_s + d_a;
      CHECK(feature_dim(d_s, d_a) == 1 + d * (d + 3) / 2);
    }
  }
}

TEST_CASE("features at the origin and evaluation identity") {
  const Vector phi0 = features(Vector::Zero(2), Vector::Zero(1));
  CHECK(phi0[0] == 1.0);
  CHECK(phi0.tail(phi0.size() - 1).cwiseAbs().maxCoeff() == 0.0);

  // <coeffs_from_quadratic(q), features(s,a)> == q.eval(s,a) to 1e-10.
  Rng rng(1);
  std::normal_distribution<double> gauss;
  for (int rep = 0; rep < 50; ++rep) {
    const int d_s = 1 + static_cast<int>(rng() % 3);
    const int d_a = 1 + static_cast<int>(rng() % 2);
    const QuadraticModel q = random_model(d_s, d_a, rng);
    Vector s(d_s), a(d_a);
    for (int i = 0; i < d_s; ++i) s[i] = gauss(rng);
    for (int i = 0; i < d_a; ++i) a[i] = gauss(rng);
    const double lin = coeffs_from_quadratic(q).dot(features(s, a));
    CHECK(std::abs(lin - q.eval(s, a)) < 1e-10);
  }
}

TEST_CASE("coefficient bijection round trips") {
  Rng rng(2);
  for (int rep = 0; rep < 20; ++rep) {
    const int d_s = 1 + static_cast<int>(rng() % 3);
    const int d_a = 1 + static_cast<int>(rng() % 2);
    const QuadraticModel q = random_model(d_s, d_a, rng);
    const QuadraticModel back = quadratic_from_coeffs(coeffs_from_quadratic(q), d_s, d_a);
    CHECK((back.Q_aa - q.Q_aa).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((back.Q_as - q.Q_as).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((back.Q_ss - q.Q_ss).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((back.q_a - q.q_a).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((back.q_s - q.q_s).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(back.q_0 - q.q_0) < 1e-12);
    // Coefficient-space round trip too.
    const Vector c = coeffs_from_quadratic(q);
    CHECK((coeffs_from_quadratic(quadratic_from_coeffs(c, d_s, d_a)) - c)
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
}

TEST_CASE("ridge regression plant and recover") {
  Rng rng(3);
  std::normal_distribution<double> gauss;
  const int d_s = 2, d_a = 1;
  const QuadraticModel truth = random_model(d_s, d_a, rng);
  const int n = 3 * feature_dim(d_s, d_a);
  Matrix S(d_s, n), A(d_a, n);
  Vector y(n), w(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d_s; ++j) S(j, i) = gauss(rng);
    A(0, i) = gauss(rng);
    y[i] = truth.eval(S.col(i), A.col(i));
    w[i] = 0.5 + 0.5 * std::abs(gauss(rng));
  }
  const QuadraticModel fit = fit_quadratic_q(S, A, y, w, 1e-10);
  CHECK((fit.Q_aa - truth.Q_aa).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((fit.Q_as - truth.Q_as).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((fit.Q_ss - truth.Q_ss).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((fit.q_a - truth.q_a).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((fit.q_s - truth.q_s).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(std::abs(fit.q_0 - truth.q_0) < 1e-6);
}

TEST_CASE("ridge regression constant targets") {
  Rng rng(4);
  std::normal_distribution<double> gauss;
  const int n = 30;
  Matrix X(n, 4);
  for (int i = 0; i < n; ++i) {
    X(i, 0) = 1.0;
    for (int j = 1; j < 4; ++j) X(i, j) = gauss(rng);
  }
  const Vector y = Vector::Constant(n, 2.5);
  const Vector w = Vector::Ones(n);
  const Vector coeffs = fit_weighted_ridge(X, y, w, 1e-10);
  CHECK(coeffs[0] == doctest::Approx(2.5).epsilon(1e-8));
  CHECK(coeffs.tail(3).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("ridge penalty drives non-bias coefficients to zero monotonically") {
  Rng rng(5);
  std::normal_distribution<double> gauss;
  const int n = 60;
  Matrix X(n, 5);
  Vector y(n);
  for (int i = 0; i < n; ++i) {
    X(i, 0) = 1.0;
    for (int j = 1; j < 5; ++j) X(i, j) = gauss(rng);
    y[i] = gauss(rng);
  }
  const Vector w = Vector::Ones(n);
  double prev = std::numeric_limits<double>::infinity();
  for (double lambda : {1e-4, 1e-2, 1.0, 1e2, 1e4, 1e8}) {
    const Vector coeffs = fit_weighted_ridge(X, y, w, lambda);
    const double norm = coeffs.tail(4).norm();
    CHECK(norm <= prev + 1e-12);
    prev = norm;
  }
  CHECK(prev < 1e-6);
}

TEST_CASE("ridge singularity error at lambda = 0") {
  // Duplicated column makes the normal matrix singular.
  Matrix X(10, 3);
  for (int i = 0; i < 10; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = static_cast<double>(i);
    X(i, 2) = static_cast<double>(i);
  }
  const Vector y = Vector::Ones(10);
  const Vector w = Vector::Ones(10);
  CHECK_THROWS_WITH_AS(fit_weighted_ridge(X, y, w, 0.0),
                       doctest::Contains("nonzero ridge"), NumericalError);
}

TEST_CASE("weighted residual orthogonality") {
  // Normal-equation residual: X' W (X c - y) + lambda-adjusted term = 0 in
  // the standardized coordinates; checked here at lambda = 0 where the
  // weighted residual is exactly orthogonal to the feature span.
  Rng rng(6);
  std::normal_distribution<double> gauss;
  const int n = 50;
  Matrix X(n, 4);
  Vector y(n), w(n);
  for (int i = 0; i < n; ++i) {
    X(i, 0) = 1.0;
    for (int j = 1; j < 4; ++j) X(i, j) = gauss(rng);
    y[i] = gauss(rng);
    w[i] = 0.1 + std::abs(gauss(rng));
  }
  const Vector coeffs = fit_weighted_ridge(X, y, w, 0.0);
  const Vector residual = X * coeffs - y;
  const Vector grad = X.transpose() * (w.asDiagonal() * residual);
  CHECK(grad.cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("monte carlo targets are suffix sums") {
  std::vector<double> rewards = {-1.0, -1.0, -1.0};
  CHECK(mc_target(rewards, 3) == -1.0);
  CHECK(mc_target(std::vector<double>(100, -1.0), 1) == -100.0);

  Rng rng(7);
  std::normal_distribution<double> gauss;
  std::vector<double> random_rewards(17);
  for (auto& r : random_rewards) r = gauss(rng);
  // Reversed-cumulative-sum oracle.
  std::vector<double> suffix(random_rewards.size() + 1, 0.0);
  for (int t = static_cast<int>(random_rewards.size()); t >= 1; --t) {
    suffix[t - 1] = random_rewards[t - 1] + suffix[t];
  }
  for (int t = 1; t <= static_cast<int>(random_rewards.size()); ++t) {
    CHECK(mc_target(random_rewards, t) == doctest::Approx(suffix[t - 1]).epsilon(1e-12));
  }
}

TEST_CASE("dp targets") {
  const QuadraticV zero = QuadraticV::zero(2);
  const Vector s_next = Vector::Ones(2);
  CHECK(dp_target(-2.5, s_next, zero) == -2.5);
  QuadraticV v = QuadraticV::zero(2);
  v.V_ss = -Matrix::Identity(2, 2);
  v.v_s = Vector::Ones(2);
  v.v_0 = 0.5;
  CHECK(dp_target(-1.0, s_next, v) == doctest::Approx(-1.0 + v.eval(s_next)).epsilon(1e-12));
}

TEST_CASE("extract_update_blocks") {
  Rng rng(8);
  QuadraticModel q = random_model(3, 2, rng);
  const UpdateBlocks blocks = extract_update_blocks(q);
  CHECK((blocks.Q_aa - q.Q_aa).cwiseAbs().maxCoeff() == 0.0);
  CHECK((blocks.Q_as - q.Q_as).cwiseAbs().maxCoeff() == 0.0);
  CHECK((blocks.q_a - q.q_a).cwiseAbs().maxCoeff() == 0.0);

  // State-only model -> zero blocks.
  QuadraticModel state_only = QuadraticModel::zero(3, 2);
  state_only.Q_ss = Matrix::Identity(3, 3);
  state_only.q_s = Vector::Ones(3);
  state_only.q_0 = 4.0;
  const UpdateBlocks zero_blocks = extract_update_blocks(state_only);
  CHECK(zero_blocks.Q_aa.cwiseAbs().maxCoeff() == 0.0);
  CHECK(zero_blocks.Q_as.cwiseAbs().maxCoeff() == 0.0);
  CHECK(zero_blocks.q_a.cwiseAbs().maxCoeff() == 0.0);

  // Advantage model (Q minus any state-only part) yields identical blocks.
  QuadraticModel advantage = q;
  advantage.Q_ss.setZero();
  advantage.q_s.setZero();
  advantage.q_0 = 0.0;
  const UpdateBlocks adv_blocks = extract_update_blocks(advantage);
  CHECK((adv_blocks.Q_aa - blocks.Q_aa).cwiseAbs().maxCoeff() == 0.0);
  CHECK((adv_blocks.Q_as - blocks.Q_as).cwiseAbs().maxCoeff() == 0.0);
  CHECK((adv_blocks.q_a - blocks.q_a).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("state-only v fit recovers a planted quadratic") {
  Rng rng(9);
  std::normal_distribution<double> gauss;
  QuadraticV truth = QuadraticV::zero(3);
  Matrix tmp = Matrix::Random(3, 3);
  truth.V_ss = symmetrize(tmp);
  truth.v_s = Vector::Random(3);
  truth.v_0 = 1.25;
  const int n = 4 * state_feature_dim(3);
  Matrix S(3, n);
  Vector y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < 3; ++j) S(j, i) = gauss(rng);
    y[i] = truth.eval(S.col(i));
  }
  const QuadraticV fit = fit_quadratic_v(S, y, Vector::Ones(n), 1e-10);
  CHECK((fit.V_ss - truth.V_ss).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((fit.v_s - truth.v_s).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(std::abs(fit.v_0 - truth.v_0) < 1e-6);
}
