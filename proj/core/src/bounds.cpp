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

#include "moto/bounds.hpp"

#include <cmath>

#include "moto/rollout.hpp"

namespace moto {

namespace {

constexpr double kClosedFormTol = 1e-10;

// Acklam's rational approximation of the standard normal quantile,
// |error| < 1.2e-9 over (0, 1).
double inverse_normal_cdf(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("inverse_normal_cdf: p in (0,1)");
  const double plow = 0.02425;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Deterministic state grid under a Gaussian: quantile grid in 1-2
// dimensions, fixed-seed draws above.
std::vector<Vector> quantile_grid(const GaussianDist& rho, int n) {
  const int d = rho.dim();
  const Matrix L = checked_llt(rho.cov, "quantile_grid").matrixL();
  std::vector<Vector> points;
  points.reserve(n);
  if (d == 1) {
    for (int i = 0; i < n; ++i) {
      Vector z(1);
      z[0] = inverse_normal_cdf((i + 0.5) / n);
      points.push_back(rho.mean + L * z);
    }
  } else if (d == 2) {
    const int m = std::max(2, static_cast<int>(std::sqrt(static_cast<double>(n))));
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        Vector z(2);
        z[0] = inverse_normal_cdf((i + 0.5) / m);
        z[1] = inverse_normal_cdf((j + 0.5) / m);
        points.push_back(rho.mean + L * z);
      }
    }
  } else {
    Rng rng(0x5eedULL);
    std::normal_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
      Vector z(d);
      for (int k = 0; k < d; ++k) z[k] = unit(rng);
      points.push_back(rho.mean + L * z);
    }
  }
  return points;
}

QuadraticV subtract(const QuadraticV& a, const QuadraticV& b) {
  return {a.V_ss - b.V_ss, a.v_s - b.v_s, a.v_0 - b.v_0};
}

Matrix random_matrix(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> unit(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = unit(rng);
  }
  return m;
}

Matrix random_pd(int d, Rng& rng, double base = 0.5) {
  const Matrix r = random_matrix(d, d, rng);
  return symmetrize(r * r.transpose() / d + base * Matrix::Identity(d, d));
}

// Smallest c > 0 with f(c) = target, where f(0) = 0 and f grows without
// bound; bracket by doubling, then bisect.
double bisect_to_target(const std::function<double(double)>& f, double target) {
  double hi = 1.0;
  int guard = 0;
  while (f(hi) < target) {
    hi *= 2.0;
    if (++guard > 200) throw NumericalError("bisect_to_target: failed to bracket");
  }
  double lo = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < target ? lo : hi) = mid;
  }
  return hi;
}

std::pair<double, double> mean_stderr(const Vector& x) {
  const int n = static_cast<int>(x.size());
  const double mean = x.mean();
  const double var = (x.array() - mean).square().sum() / (n - 1);
  return {mean, std::sqrt(var / n)};
}

}  // namespace

GaussianDist propagate_state(const LinearEnvParams& params, const GaussianDist& rho,
                             const LinGaussPolicy& pol) {
  const Matrix closed = params.A + params.B * pol.gain;
  GaussianDist next;
  next.mean = closed * rho.mean + params.B * pol.bias;
  next.cov = symmetrize(closed * rho.cov * closed.transpose() +
                        params.B * pol.cov * params.B.transpose() + params.noise_cov);
  return next;
}

std::vector<GaussianDist> state_marginals(const LinearEnvParams& params,
                                          const std::vector<LinGaussPolicy>& policy) {
  std::vector<GaussianDist> out;
  out.reserve(policy.size());
  out.push_back(params.initial_state_dist);
  for (std::size_t t = 0; t + 1 < policy.size(); ++t) {
    out.push_back(propagate_state(params, out.back(), policy[t]));
  }
  return out;
}

QuadraticV expected_q_under_policy(const QuadraticModel& q, const LinGaussPolicy& pol) {
  QuadraticV v;
  v.V_ss = symmetrize(q.Q_ss + pol.gain.transpose() * q.Q_aa * pol.gain +
                      pol.gain.transpose() * q.Q_as + q.Q_as.transpose() * pol.gain);
  v.v_s = pol.gain.transpose() * (q.Q_aa * pol.bias + q.q_a) + q.Q_as.transpose() * pol.bias +
          q.q_s;
  v.v_0 = 0.5 * pol.bias.dot(q.Q_aa * pol.bias) + pol.bias.dot(q.q_a) + q.q_0 +
          0.5 * (q.Q_aa * pol.cov).trace();
  return v;
}

BoundCheckReport check_perf_diff(const LinearEnvParams& params,
                                 const std::vector<LinGaussPolicy>& p,
                                 const std::vector<LinGaussPolicy>& q, int n,
                                 std::uint64_t seed) {
  const LinearEnv env(params);
  const RiccatiSolution qsol = evaluate_linear_policy(params, q);
  const auto p_trajs = sample_rollouts(env, p, n, seed, 1);
  const auto q_trajs = sample_rollouts(env, q, n, seed, 2);

  Vector p_returns(n), q_returns(n), adv_sums(n);
  for (int i = 0; i < n; ++i) {
    double ret = 0.0, adv = 0.0;
    for (const auto& rec : p_trajs[i]) {
      ret += rec.r;
      adv += qsol.q[rec.t - 1].eval(rec.s, rec.a) - qsol.v[rec.t - 1].eval(rec.s);
    }
    p_returns[i] = ret;
    adv_sums[i] = adv;
    double qret = 0.0;
    for (const auto& rec : q_trajs[i]) qret += rec.r;
    q_returns[i] = qret;
  }
  const auto [jp, jp_se] = mean_stderr(p_returns);
  const auto [jq, jq_se] = mean_stderr(q_returns);
  const auto [adv, adv_se] = mean_stderr(adv_sums);

  BoundCheckReport report;
  report.description = "return difference equals summed expected advantage";
  report.lhs = jp - jq;
  report.rhs = adv;
  report.slack = report.rhs - report.lhs;
  report.mc_stderr = std::sqrt(jp_se * jp_se + jq_se * jq_se + adv_se * adv_se);
  report.pass = std::abs(report.slack) <= 3.0 * report.mc_stderr;
  return report;
}

BoundCheckReport check_advantage_bound(const LinearEnvParams& params,
                                       const std::vector<LinGaussPolicy>& p,
                                       const std::vector<LinGaussPolicy>& q,
                                       int grid_points) {
  const int T = params.horizon;
  const RiccatiSolution psol = evaluate_linear_policy(params, p);
  const RiccatiSolution qsol = evaluate_linear_policy(params, q);
  const auto p_marg = state_marginals(params, p);
  const auto q_marg = state_marginals(params, q);
  const double jdiff = expected_value(psol.v[0], params.initial_state_dist) -
                       expected_value(qsol.v[0], params.initial_state_dist);

  double adv_term = 0.0;
  double penalty = 0.0;
  for (int t = 1; t <= T; ++t) {
    const QuadraticV adv = subtract(expected_q_under_policy(qsol.q[t - 1], p[t - 1]),
                                    qsol.v[t - 1]);
    adv_term += expected_value(adv, q_marg[t - 1]);
    const double eps_t = kl_gaussian(p_marg[t - 1], q_marg[t - 1]);
    double delta_t = 0.0;
    const int half = grid_points / 2;
    for (const auto& s : quantile_grid(p_marg[t - 1], half)) {
      delta_t = std::max(delta_t, std::abs(adv.eval(s)));
    }
    for (const auto& s : quantile_grid(q_marg[t - 1], grid_points - half)) {
      delta_t = std::max(delta_t, std::abs(adv.eval(s)));
    }
    penalty += 2.0 * delta_t * std::sqrt(0.5 * eps_t);
  }

  BoundCheckReport report;
  report.description = "Pinsker lower bound on the return difference (grid delta)";
  report.lhs = adv_term - penalty;
  report.rhs = jdiff;
  report.slack = report.rhs - report.lhs;
  report.pass = report.slack >= -kClosedFormTol;
  return report;
}

std::vector<BoundCheckReport> check_state_kl_recursion(
    const LinearEnvParams& params, const std::vector<LinGaussPolicy>& p,
    const std::vector<LinGaussPolicy>& q) {
  const auto p_marg = state_marginals(params, p);
  const auto q_marg = state_marginals(params, q);
  std::vector<BoundCheckReport> reports;
  for (std::size_t t = 1; t < p.size(); ++t) {
    BoundCheckReport report;
    report.description = "state-KL recursion at t = " + std::to_string(t);
    report.lhs = kl_gaussian(p_marg[t], q_marg[t]);
    report.rhs = kl_gaussian(p_marg[t - 1], q_marg[t - 1]) +
                 expected_policy_kl(p_marg[t - 1], p[t - 1], q[t - 1]);
    report.slack = report.rhs - report.lhs;
    report.pass = report.slack >= -kClosedFormTol;
    reports.push_back(std::move(report));
  }
  return reports;
}

std::vector<BoundCheckReport> check_appendix_b(const GaussianDist& p_t,
                                               const GaussianDist& q_t,
                                               const LinGaussPolicy& p_pol,
                                               const LinGaussPolicy& q_pol, double eps,
                                               double eps_t) {
  const int d_s = p_t.dim();
  if (kl_gaussian(p_t, q_t) > eps_t + 1e-9) {
    throw std::invalid_argument("check_appendix_b: state-KL precondition violated");
  }
  if (expected_policy_kl(q_t, p_pol, q_pol) > eps + 1e-9) {
    throw std::invalid_argument("check_appendix_b: policy-KL precondition violated");
  }

  const int d_a = q_pol.action_dim();
  const Matrix prec_q =
      checked_llt(q_pol.cov, "check_appendix_b").solve(Matrix::Identity(d_a, d_a));
  const Matrix D = p_pol.gain - q_pol.gain;
  const Matrix M = D.transpose() * prec_q * D;
  const Matrix prec_state =
      checked_llt(q_t.cov, "check_appendix_b").solve(Matrix::Identity(d_s, d_s));

  std::vector<BoundCheckReport> reports(3);
  reports[0].description = "trace bound tr(Sq^-1 Sp) <= 4 eps_t + 2 d_s";
  reports[0].lhs = (prec_state * p_t.cov).trace();
  reports[0].rhs = 4.0 * eps_t + 2.0 * d_s;

  reports[1].description = "mean bound mu_p' M mu_p <= 2 eps (1 + 2 eps_t)";
  reports[1].lhs = p_t.mean.dot(M * p_t.mean);
  reports[1].rhs = 2.0 * eps * (1.0 + 2.0 * eps_t);

  reports[2].description = "expected policy KL under p_t <= 2 eps (3 eps_t + d_s + 1)";
  reports[2].lhs = expected_policy_kl(p_t, p_pol, q_pol);
  reports[2].rhs = 2.0 * eps * (3.0 * eps_t + d_s + 1.0);

  for (auto& report : reports) {
    report.slack = report.rhs - report.lhs;
    report.pass = report.slack >= -kClosedFormTol;
  }
  return reports;
}

AppendixBInstance sample_appendix_b_instance(int d_s, int d_a, double eps, double eps_t,
                                             Rng& rng) {
  AppendixBInstance inst;
  std::normal_distribution<double> unit(0.0, 1.0);

  inst.q_t.mean = random_matrix(d_s, 1, rng);
  inst.q_t.cov = random_pd(d_s, rng);
  const Vector shift = random_matrix(d_s, 1, rng);
  const Matrix cov_dir = random_pd(d_s, rng, 0.1);
  const double c_state = bisect_to_target(
      [&](double c) {
        const GaussianDist cand{inst.q_t.mean + c * shift,
                                Matrix(inst.q_t.cov + c * cov_dir)};
        return kl_gaussian(cand, inst.q_t);
      },
      eps_t);
  inst.p_t = {inst.q_t.mean + c_state * shift, Matrix(inst.q_t.cov + c_state * cov_dir)};

  inst.q_pol.gain = random_matrix(d_a, d_s, rng) / std::sqrt(static_cast<double>(d_s));
  inst.q_pol.bias = random_matrix(d_a, 1, rng);
  inst.q_pol.cov = random_pd(d_a, rng);
  const Matrix gain_dir = random_matrix(d_a, d_s, rng) / std::sqrt(static_cast<double>(d_s));
  const Matrix pol_cov_dir = random_pd(d_a, rng, 0.1);
  const double c_pol = bisect_to_target(
      [&](double c) {
        LinGaussPolicy cand;
        cand.gain = inst.q_pol.gain + c * gain_dir;
        cand.bias = inst.q_pol.bias;  // equal biases: required by bound (ii)
        cand.cov = inst.q_pol.cov + c * pol_cov_dir;
        return expected_policy_kl(inst.q_t, cand, inst.q_pol);
      },
      eps);
  inst.p_pol.gain = inst.q_pol.gain + c_pol * gain_dir;
  inst.p_pol.bias = inst.q_pol.bias;
  inst.p_pol.cov = inst.q_pol.cov + c_pol * pol_cov_dir;
  return inst;
}

std::vector<LinGaussPolicy> perturb_policy(const std::vector<LinGaussPolicy>& policy,
                                           double scale, Rng& rng) {
  std::vector<LinGaussPolicy> out = policy;
  for (auto& pol : out) {
    const int d_a = pol.action_dim();
    const int d_s = pol.state_dim();
    pol.gain += scale * random_matrix(d_a, d_s, rng);
    pol.bias += scale * random_matrix(d_a, 1, rng);
    const Matrix a = Matrix::Identity(d_a, d_a) + scale * random_matrix(d_a, d_a, rng);
    pol.cov = symmetrize(a * pol.cov * a.transpose());
  }
  return out;
}

}  // namespace moto
