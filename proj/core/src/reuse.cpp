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

#include "moto/reuse.hpp"

#include <cmath>
#include <limits>

namespace moto {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

// Cached Cholesky evaluator for log N(diff | 0, cov).
struct GaussEval {
  Matrix L;
  double log_norm = 0.0;

  double operator()(Vector diff) const {
    L.triangularView<Eigen::Lower>().solveInPlace(diff);
    return log_norm - 0.5 * diff.squaredNorm();
  }
};

GaussEval make_eval(const Matrix& cov, const char* context) {
  GaussEval e;
  e.L = checked_llt(cov, context).matrixL();
  e.log_norm = -0.5 * cov.rows() * kLog2Pi - e.L.diagonal().array().log().sum();
  return e;
}

double logsumexp(const std::vector<double>& v) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double x : v) mx = std::max(mx, x);
  if (!std::isfinite(mx)) return mx;
  double acc = 0.0;
  for (double x : v) acc += std::exp(x - mx);
  return mx + std::log(acc);
}

// log z_t^j(s,a) for one stored iteration's time-t pair.
double log_z(const GaussianDist& rho, const LinGaussPolicy& pol, const Vector& s,
             const Vector& a) {
  return log_state_action_density(rho, pol, s, a);
}

}  // namespace

double effective_sample_size(const Vector& weights) {
  const double sum = weights.sum();
  const double sq = weights.squaredNorm();
  if (!(sq > 0.0)) return 0.0;
  return sum * sum / sq;
}

double log_state_action_density(const GaussianDist& rho, const LinGaussPolicy& pol,
                                const Vector& s, const Vector& a) {
  return gaussian_log_density(rho, s) +
         gaussian_log_density({pol.mean_action(s), pol.cov}, a);
}

GaussianDist fit_state_dist_mixture(const Dataset& data, int t, int cur_iter, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("fit_state_dist_mixture: gamma must be in (0, 1]");
  }
  std::vector<Vector> samples;
  std::vector<double> weights;
  for (const auto& it : data.iterations()) {
    if (it.iter > cur_iter) continue;
    const double w = std::pow(gamma, cur_iter - it.iter);
    for (const auto& traj : it.trajectories) {
      samples.push_back(traj.at(t - 1).s);
      weights.push_back(w);
    }
  }
  return weighted_mle_gaussian(samples, weights);
}

ForwardFitResult fit_state_dist_forward(const GaussianDist& rho_t, const Dataset& data, int t,
                                        int cur_iter, double ess_floor, double gamma) {
  const auto records = data.records_at(t);
  const int n = static_cast<int>(records.size());
  if (n == 0) throw std::invalid_argument("fit_state_dist_forward: no records");
  const auto& cur = data.iteration(cur_iter);
  const LinGaussPolicy& cur_pol = cur.policy.at(t - 1);
  const int n_iters = static_cast<int>(data.iterations().size());

  Vector w(n);
  for (int r = 0; r < n; ++r) {
    const Vector& s = records[r]->s;
    const Vector& a = records[r]->a;
    const double num = log_z(rho_t, cur_pol, s, a);
    std::vector<double> per_iter;
    per_iter.reserve(n_iters);
    for (const auto& it : data.iterations()) {
      const GaussianDist& rho =
          (it.iter == cur_iter) ? rho_t : it.state_dists.at(t - 1);
      per_iter.push_back(log_z(rho, it.policy.at(t - 1), s, a));
    }
    const double denom = logsumexp(per_iter) - std::log(static_cast<double>(n_iters));
    w[r] = std::exp(num - denom);
  }

  ForwardFitResult out;
  out.ess = effective_sample_size(w);
  if (out.ess < ess_floor) {
    // Degenerate weights: mixture fit over the same next-state samples with
    // per-iteration decay instead.
    out.fell_back = true;
    for (int r = 0; r < n; ++r) {
      w[r] = std::pow(gamma, cur_iter - records[r]->iter);
    }
  }
  Matrix X(records[0]->s_next.size(), n);
  for (int r = 0; r < n; ++r) X.col(r) = records[r]->s_next;
  out.dist = weighted_mle_gaussian(X, w);
  return out;
}

double iw_timestep(const IterationData& cur, int t, const Vector& s, const Vector& a) {
  const int T = static_cast<int>(cur.policy.size());
  std::vector<double> vals(T);
  for (int u = 1; u <= T; ++u) {
    vals[u - 1] = log_z(cur.state_dists.at(u - 1), cur.policy.at(u - 1), s, a);
  }
  const double denom = logsumexp(vals) - std::log(static_cast<double>(T));
  return std::exp(vals[t - 1] - denom);
}

double iw_full(const Dataset& data, int t, const Vector& s, const Vector& a) {
  const int n_iters = static_cast<int>(data.iterations().size());
  if (n_iters == 0) throw std::invalid_argument("iw_full: empty dataset");
  const auto& latest = data.iterations().back();
  const int T = static_cast<int>(latest.policy.size());
  std::vector<double> all;
  all.reserve(n_iters * T);
  double num = 0.0;
  for (int u = 1; u <= T; ++u) {
    for (const auto& it : data.iterations()) {
      const double lz = log_z(it.state_dists.at(u - 1), it.policy.at(u - 1), s, a);
      all.push_back(lz);
      if (u == t && it.iter == latest.iter) num = lz;
    }
  }
  const double denom = logsumexp(all) - std::log(static_cast<double>(n_iters * T));
  return std::exp(num - denom);
}

WeightEngine::WeightEngine(const Dataset& data, ReuseMode mode, int threads)
    : data_(data), mode_(mode), threads_(threads) {
  if (data.iterations().empty()) throw std::invalid_argument("WeightEngine: empty dataset");
  horizon_ = static_cast<int>(data.iterations().back().policy.size());
  if (mode_ != ReuseMode::full) return;

  const int n_iters = static_cast<int>(data.iterations().size());
  // Record order: iteration, then episode, then time-step.
  for (const auto& it : data_.iterations()) {
    for (const auto& traj : it.trajectories) {
      for (const auto& rec : traj) all_records_.push_back(&rec);
    }
  }
  const int n = static_cast<int>(all_records_.size());

  // Cache Cholesky evaluators for every stored (iteration, t) pair.
  struct ZEval {
    const GaussianDist* rho;
    const LinGaussPolicy* pol;
    GaussEval rho_eval;
    GaussEval pol_eval;
  };
  std::vector<std::vector<ZEval>> evals;
  for (const auto& it : data_.iterations()) {
    std::vector<ZEval> row;
    for (int u = 0; u < horizon_; ++u) {
      ZEval e;
      e.rho = &it.state_dists.at(u);
      e.pol = &it.policy.at(u);
      e.rho_eval = make_eval(e.rho->cov, "WeightEngine state dist");
      e.pol_eval = make_eval(e.pol->cov, "WeightEngine policy cov");
      row.push_back(std::move(e));
    }
    evals.push_back(std::move(row));
  }

  log_denom_ = Vector(n);
  const double log_count = std::log(static_cast<double>(n_iters * horizon_));
  parallel_for(n, threads_, [&](int r) {
    const Vector& s = all_records_[r]->s;
    const Vector& a = all_records_[r]->a;
    double mx = -std::numeric_limits<double>::infinity();
    double acc = 0.0;
    for (const auto& row : evals) {
      for (const auto& e : row) {
        const double lz = e.rho_eval(s - e.rho->mean) +
                          e.pol_eval(a - (e.pol->gain * s + e.pol->bias));
        // Streaming logsumexp with max shift.
        if (lz > mx) {
          acc = acc * std::exp(mx - lz) + 1.0;
          mx = lz;
        } else {
          acc += std::exp(lz - mx);
        }
      }
    }
    log_denom_[r] = mx + std::log(acc) - log_count;
  });
}

WeightSet WeightEngine::weights_at(int t) const {
  WeightSet out;
  const auto& latest = data_.iterations().back();
  if (mode_ == ReuseMode::none) {
    for (const auto& traj : latest.trajectories) out.records.push_back(&traj.at(t - 1));
    out.weights = Vector::Ones(static_cast<int>(out.records.size()));
    out.ess = static_cast<double>(out.records.size());
    return out;
  }

  const GaussianDist& rho = latest.state_dists.at(t - 1);
  const LinGaussPolicy& pol = latest.policy.at(t - 1);
  const GaussEval rho_eval = make_eval(rho.cov, "weights_at state dist");
  const GaussEval pol_eval = make_eval(pol.cov, "weights_at policy cov");
  const auto numerator = [&](const TransitionRecord& rec) {
    return rho_eval(rec.s - rho.mean) + pol_eval(rec.a - (pol.gain * rec.s + pol.bias));
  };

  if (mode_ == ReuseMode::same_timestep) {
    const int n_iters = static_cast<int>(data_.iterations().size());
    out.records = data_.records_at(t);
    const int n = static_cast<int>(out.records.size());
    out.weights = Vector(n);
    std::vector<GaussEval> rho_evals, pol_evals;
    for (const auto& it : data_.iterations()) {
      rho_evals.push_back(make_eval(it.state_dists.at(t - 1).cov, "weights_at state dist"));
      pol_evals.push_back(make_eval(it.policy.at(t - 1).cov, "weights_at policy cov"));
    }
    parallel_for(n, threads_, [&](int r) {
      const auto& rec = *out.records[r];
      std::vector<double> per_iter;
      per_iter.reserve(n_iters);
      int j = 0;
      for (const auto& it : data_.iterations()) {
        const auto& jrho = it.state_dists.at(t - 1);
        const auto& jpol = it.policy.at(t - 1);
        per_iter.push_back(rho_evals[j](rec.s - jrho.mean) +
                           pol_evals[j](rec.a - (jpol.gain * rec.s + jpol.bias)));
        ++j;
      }
      const double denom = logsumexp(per_iter) - std::log(static_cast<double>(n_iters));
      out.weights[r] = std::exp(numerator(rec) - denom);
    });
    out.ess = effective_sample_size(out.weights);
    return out;
  }

  // full
  const int n = static_cast<int>(all_records_.size());
  out.records = all_records_;
  out.weights = Vector(n);
  parallel_for(n, threads_, [&](int r) {
    out.weights[r] = std::exp(numerator(*all_records_[r]) - log_denom_[r]);
  });
  out.ess = effective_sample_size(out.weights);
  return out;
}

}  // namespace moto
