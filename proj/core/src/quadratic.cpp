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

#include "moto/quadratic.hpp"

#include <cmath>

namespace moto {

double QuadraticModel::eval(const Vector& s, const Vector& a) const {
  return 0.5 * a.dot(Q_aa * a) + a.dot(Q_as * s) + a.dot(q_a) + 0.5 * s.dot(Q_ss * s) +
         s.dot(q_s) + q_0;
}

QuadraticModel QuadraticModel::zero(int d_s, int d_a) {
  return {Matrix::Zero(d_a, d_a), Matrix::Zero(d_a, d_s), Matrix::Zero(d_s, d_s),
          Vector::Zero(d_a), Vector::Zero(d_s), 0.0};
}

double QuadraticV::eval(const Vector& s) const {
  return 0.5 * s.dot(V_ss * s) + s.dot(v_s) + v_0;
}

QuadraticV QuadraticV::zero(int d_s) {
  return {Matrix::Zero(d_s, d_s), Vector::Zero(d_s), 0.0};
}

int feature_dim(int d_s, int d_a) {
  const int d = d_s + d_a;
  return 1 + d * (d + 3) / 2;
}

int state_feature_dim(int d_s) { return 1 + d_s * (d_s + 3) / 2; }

namespace {

Vector monomial_features(const Vector& z) {
  const int d = static_cast<int>(z.size());
  Vector phi(1 + d * (d + 3) / 2);
  phi[0] = 1.0;
  phi.segment(1, d) = z;
  int idx = 1 + d;
  for (int j = 0; j < d; ++j) {
    for (int k = j; k < d; ++k) {
      phi[idx++] = z[j] * z[k];
    }
  }
  return phi;
}

// Symmetric matrix H with 0.5 z'Hz = sum_{j<=k} c_{jk} z_j z_k.
Matrix hessian_from_upper(const Vector& coeffs, int offset, int d) {
  Matrix h(d, d);
  int idx = offset;
  for (int j = 0; j < d; ++j) {
    for (int k = j; k < d; ++k) {
      const double c = coeffs[idx++];
      if (j == k) {
        h(j, j) = 2.0 * c;
      } else {
        h(j, k) = c;
        h(k, j) = c;
      }
    }
  }
  return h;
}

void upper_from_hessian(const Matrix& h, Vector* coeffs, int offset) {
  const int d = static_cast<int>(h.rows());
  int idx = offset;
  for (int j = 0; j < d; ++j) {
    for (int k = j; k < d; ++k) {
      (*coeffs)[idx++] = (j == k) ? 0.5 * h(j, j) : h(j, k);
    }
  }
}

}  // namespace

Vector features(const Vector& s, const Vector& a) {
  Vector z(s.size() + a.size());
  z << s, a;
  return monomial_features(z);
}

Vector state_features(const Vector& s) { return monomial_features(s); }

Matrix feature_matrix(const Matrix& S, const Matrix& A) {
  const int n = static_cast<int>(S.cols());
  if (A.cols() != n) throw std::invalid_argument("feature_matrix: sample count mismatch");
  Matrix X(n, feature_dim(static_cast<int>(S.rows()), static_cast<int>(A.rows())));
  Vector z(S.rows() + A.rows());
  for (int i = 0; i < n; ++i) {
    z << S.col(i), A.col(i);
    X.row(i) = monomial_features(z);
  }
  return X;
}

Matrix state_feature_matrix(const Matrix& S) {
  const int n = static_cast<int>(S.cols());
  Matrix X(n, state_feature_dim(static_cast<int>(S.rows())));
  for (int i = 0; i < n; ++i) {
    X.row(i) = monomial_features(S.col(i));
  }
  return X;
}

Vector fit_weighted_ridge(const Matrix& X, const Vector& y, const Vector& w, double lambda) {
  const int n = static_cast<int>(X.rows());
  const int p = static_cast<int>(X.cols());
  if (y.size() != n || w.size() != n) {
    throw std::invalid_argument("fit_weighted_ridge: size mismatch");
  }
  if (lambda < 0.0) throw std::invalid_argument("fit_weighted_ridge: lambda < 0");
  const double wsum = w.sum();
  if (!(wsum > 0.0) || w.minCoeff() < 0.0) {
    throw std::invalid_argument("fit_weighted_ridge: need nonnegative weights, not all zero");
  }

  // Standardize the non-bias columns with weighted mean/std. Constant
  // columns get a zero coefficient.
  const Vector wn = w / wsum;
  Vector mean = Vector::Zero(p);
  Vector scale = Vector::Ones(p);
  Matrix Xs = X;
  for (int j = 1; j < p; ++j) {
    mean[j] = X.col(j).dot(wn);
    const double var = (X.col(j).array() - mean[j]).square().matrix().dot(wn);
    const double sd = std::sqrt(var);
    if (sd > 1e-300) {
      scale[j] = sd;
      Xs.col(j) = (X.col(j).array() - mean[j]) / sd;
    } else {
      scale[j] = 0.0;
      Xs.col(j).setZero();
    }
  }

  Matrix gram = Matrix::Zero(p, p);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(
      (Xs.transpose() * wn.cwiseSqrt().asDiagonal()), 1.0);
  gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
  for (int j = 1; j < p; ++j) gram(j, j) += lambda;
  const Vector rhs = Xs.transpose() * (wn.cwiseProduct(y));

  Vector sol;
  if (lambda == 0.0) {
    Eigen::FullPivLU<Matrix> lu(gram);
    lu.setThreshold(1e-12);
    if (lu.rank() < p) {
      throw NumericalError(
          "fit_weighted_ridge: singular normal matrix at lambda = 0; use a nonzero ridge");
    }
    sol = lu.solve(rhs);
  } else {
    sol = Eigen::LDLT<Matrix>(gram).solve(rhs);
  }

  // De-standardize.
  Vector out = Vector::Zero(p);
  double bias_shift = 0.0;
  for (int j = 1; j < p; ++j) {
    if (scale[j] > 0.0) {
      out[j] = sol[j] / scale[j];
      bias_shift += sol[j] * mean[j] / scale[j];
    }
  }
  out[0] = sol[0] - bias_shift;
  return out;
}

QuadraticModel quadratic_from_coeffs(const Vector& coeffs, int d_s, int d_a) {
  const int d = d_s + d_a;
  if (coeffs.size() != feature_dim(d_s, d_a)) {
    throw std::invalid_argument("quadratic_from_coeffs: wrong coefficient count");
  }
  const Matrix h = hessian_from_upper(coeffs, 1 + d, d);
  QuadraticModel q;
  q.Q_ss = h.topLeftCorner(d_s, d_s);
  q.Q_as = h.bottomLeftCorner(d_a, d_s);
  q.Q_aa = h.bottomRightCorner(d_a, d_a);
  q.q_s = coeffs.segment(1, d_s);
  q.q_a = coeffs.segment(1 + d_s, d_a);
  q.q_0 = coeffs[0];
  return q;
}

Vector coeffs_from_quadratic(const QuadraticModel& q) {
  const int d_s = q.state_dim();
  const int d_a = q.action_dim();
  const int d = d_s + d_a;
  Matrix h(d, d);
  h.topLeftCorner(d_s, d_s) = symmetrize(q.Q_ss);
  h.bottomLeftCorner(d_a, d_s) = q.Q_as;
  h.topRightCorner(d_s, d_a) = q.Q_as.transpose();
  h.bottomRightCorner(d_a, d_a) = symmetrize(q.Q_aa);
  Vector coeffs(feature_dim(d_s, d_a));
  coeffs[0] = q.q_0;
  coeffs.segment(1, d_s) = q.q_s;
  coeffs.segment(1 + d_s, d_a) = q.q_a;
  upper_from_hessian(h, &coeffs, 1 + d);
  return coeffs;
}

QuadraticV v_from_coeffs(const Vector& coeffs, int d_s) {
  if (coeffs.size() != state_feature_dim(d_s)) {
    throw std::invalid_argument("v_from_coeffs: wrong coefficient count");
  }
  QuadraticV v;
  v.V_ss = hessian_from_upper(coeffs, 1 + d_s, d_s);
  v.v_s = coeffs.segment(1, d_s);
  v.v_0 = coeffs[0];
  return v;
}

Vector coeffs_from_v(const QuadraticV& v) {
  const int d_s = v.dim();
  Vector coeffs(state_feature_dim(d_s));
  coeffs[0] = v.v_0;
  coeffs.segment(1, d_s) = v.v_s;
  upper_from_hessian(symmetrize(v.V_ss), &coeffs, 1 + d_s);
  return coeffs;
}

QuadraticModel fit_quadratic_q(const Matrix& S, const Matrix& A, const Vector& targets,
                               const Vector& weights, double lambda) {
  const Matrix X = feature_matrix(S, A);
  const Vector coeffs = fit_weighted_ridge(X, targets, weights, lambda);
  QuadraticModel q =
      quadratic_from_coeffs(coeffs, static_cast<int>(S.rows()), static_cast<int>(A.rows()));
  q.Q_aa = symmetrize(q.Q_aa);
  q.Q_ss = symmetrize(q.Q_ss);
  return q;
}

QuadraticV fit_quadratic_v(const Matrix& S, const Vector& targets, const Vector& weights,
                           double lambda) {
  const Matrix X = state_feature_matrix(S);
  const Vector coeffs = fit_weighted_ridge(X, targets, weights, lambda);
  QuadraticV v = v_from_coeffs(coeffs, static_cast<int>(S.rows()));
  v.V_ss = symmetrize(v.V_ss);
  return v;
}

double mc_target(const std::vector<double>& rewards, int t) {
  if (t < 1 || t > static_cast<int>(rewards.size())) {
    throw std::invalid_argument("mc_target: t out of range");
  }
  double sum = 0.0;
  for (std::size_t i = static_cast<std::size_t>(t - 1); i < rewards.size(); ++i) {
    sum += rewards[i];
  }
  return sum;
}

double dp_target(double reward, const Vector& s_next, const QuadraticV& v_next) {
  return reward + v_next.eval(s_next);
}

UpdateBlocks extract_update_blocks(const QuadraticModel& q) {
  return {symmetrize(q.Q_aa), q.Q_as, q.q_a};
}

}  // namespace moto
