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

#ifndef MOTO_QUADRATIC_HPP
#define MOTO_QUADRATIC_HPP

#include "moto/common.hpp"

namespace moto {

/// Quadratic model in (s, a):
///   Q(s,a) = 0.5 a'Qaa a + a'Qas s + a'qa + 0.5 s'Qss s + s'qs + q0.
struct QuadraticModel {
  Matrix Q_aa;
  Matrix Q_as;
  Matrix Q_ss;
  Vector q_a;
  Vector q_s;
  double q_0 = 0.0;

  int state_dim() const { return static_cast<int>(Q_as.cols()); }
  int action_dim() const { return static_cast<int>(Q_as.rows()); }
  double eval(const Vector& s, const Vector& a) const;
  static QuadraticModel zero(int d_s, int d_a);
};

/// State-only quadratic V(s) = 0.5 s'Vss s + s'vs + v0.
struct QuadraticV {
  Matrix V_ss;
  Vector v_s;
  double v_0 = 0.0;

  int dim() const { return static_cast<int>(v_s.size()); }
  double eval(const Vector& s) const;
  static QuadraticV zero(int d_s);
};

/// Action-dependent blocks entering the policy update.
struct UpdateBlocks {
  Matrix Q_aa;
  Matrix Q_as;
  Vector q_a;
};

/// Feature dimension 1 + (d_a + d_s)(d_a + d_s + 3)/2.
int feature_dim(int d_s, int d_a);
int state_feature_dim(int d_s);

/// Feature map [1, z, upper-triangular monomials z_j z_k (j <= k)] with
/// z = (s; a). Cross terms appear once, in row-major upper-triangular order.
Vector features(const Vector& s, const Vector& a);
Vector state_features(const Vector& s);

/// Row k of the output is features(s_k, a_k); S and A are column-sample
/// matrices (d x n).
Matrix feature_matrix(const Matrix& S, const Matrix& A);
Matrix state_feature_matrix(const Matrix& S);

/// Weighted ridge regression: minimizes
///   sum_k w_k (<w, x_k> - y_k)^2 / sum_k w_k + lambda |w_nb|^2,
/// where w_nb excludes the bias coefficient (column 0) and features are
/// standardized internally (the penalty acts on the standardized
/// coefficients; the returned vector is de-standardized).
/// Throws if the normal matrix is singular at lambda = 0.
Vector fit_weighted_ridge(const Matrix& X, const Vector& y, const Vector& w, double lambda);

/// Bijection between coefficient vectors of `features` and QuadraticModel.
QuadraticModel quadratic_from_coeffs(const Vector& coeffs, int d_s, int d_a);
Vector coeffs_from_quadratic(const QuadraticModel& q);
QuadraticV v_from_coeffs(const Vector& coeffs, int d_s);
Vector coeffs_from_v(const QuadraticV& v);

QuadraticModel fit_quadratic_q(const Matrix& S, const Matrix& A, const Vector& targets,
                               const Vector& weights, double lambda);
QuadraticV fit_quadratic_v(const Matrix& S, const Vector& targets, const Vector& weights,
                           double lambda);

/// Monte-Carlo target at time t (1-based): suffix sum of rewards r_t..r_T.
double mc_target(const std::vector<double>& rewards, int t);

/// Dynamic-programming target r + V(s_next); pass QuadraticV::zero at t = T.
double dp_target(double reward, const Vector& s_next, const QuadraticV& v_next);

UpdateBlocks extract_update_blocks(const QuadraticModel& q);

}  // namespace moto

#endif
