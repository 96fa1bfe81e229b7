// Copyright 2026 The seqmi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "seqmi/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "seqmi/errors.hpp"
#include "seqmi/special.hpp"

namespace seqmi {

double loglr_batch_mean_uni(double batch_mean, double mu, double sigma2, int n,
                            double target) {
  if (n < 2) throw ConfigError("batch size must be >= 2");
  if (!(sigma2 > 0.0)) throw ConfigError("variance must be positive");
  const double nn = static_cast<double>(n);
  const double dev = batch_mean - mu;
  const double shift = target - mu;
  return -0.5 * std::log((nn - 1.0) / nn)
         - nn / (2.0 * (nn - 1.0) * sigma2) * dev * dev
         + shift * nn / ((nn - 1.0) * sigma2) * dev
         - shift * shift / (2.0 * (nn - 1.0) * sigma2);
}

double loglr_batch_mean_mv(const Vec& batch_mean, const GaussianParams& dist,
                           int n, const Vec& target) {
  if (n < 2) throw ConfigError("batch size must be >= 2");
  const int d = dist.dim();
  if (batch_mean.size() != d || target.size() != d) {
    throw ConfigError("dimension mismatch in batch-mean statistic");
  }
  if (dist.degenerate()) throw NumericError("covariance not positive definite");
  const double nn = static_cast<double>(n);
  const Vec dev = batch_mean - dist.mean();
  const Vec shift = target - dist.mean();
  // Whitened via the Cholesky factor: w' w = x' Sigma^{-1} y.
  const auto lower = dist.chol().triangularView<Eigen::Lower>();
  const Vec wdev = lower.solve(dev);
  const Vec wshift = lower.solve(shift);
  const double m_star = wshift.squaredNorm();
  return -0.5 * d * std::log((nn - 1.0) / nn)
         - nn / (2.0 * (nn - 1.0)) * wdev.squaredNorm()
         + nn / (nn - 1.0) * wdev.dot(wshift)
         - m_star / (2.0 * (nn - 1.0));
}

double loglr_uniform_tau(std::span<const double> per_time_loglrs) {
  return log_sum_exp(per_time_loglrs) -
         std::log(static_cast<double>(per_time_loglrs.size()));
}

double loglr_max_tau(std::span<const double> per_time_loglrs) {
  if (per_time_loglrs.empty()) throw ConfigError("empty statistic list");
  return *std::max_element(per_time_loglrs.begin(), per_time_loglrs.end());
}

double loglr_final_obs_uni(double final_mean, double mu, double sigma2, int n,
                           int T, double target) {
  if (T < 1) throw ConfigError("step count must be >= 1");
  return loglr_batch_mean_uni(final_mean, mu, sigma2, n * T, target);
}

double loglr_final_obs_mv(const Vec& final_mean, const GaussianParams& dist,
                          int n, int T, const Vec& target) {
  if (T < 1) throw ConfigError("step count must be >= 1");
  return loglr_batch_mean_mv(final_mean, dist, n * T, target);
}

double loglr_sgd(const Vec& theta_prev, const Vec& theta_next, double eta,
                 int n, const GradientStats& stats, const Vec& target_grad) {
  if (!(eta > 0.0)) throw ConfigError("learning rate must be positive");
  if (n < 2) throw ConfigError("batch size must be >= 2");
  const int d = static_cast<int>(stats.mean.size());
  if (theta_prev.size() != d || theta_next.size() != d || target_grad.size() != d) {
    throw ConfigError("dimension mismatch in sgd statistic");
  }
  const double nn = static_cast<double>(n);
  const Vec dev = theta_next - theta_prev + eta * stats.mean;
  const Vec grad_dev = target_grad - stats.mean;
  const Mat lower = cholesky_lower(stats.cov);
  const Vec wdev = lower.triangularView<Eigen::Lower>().solve(dev);
  const Vec wgrad = lower.triangularView<Eigen::Lower>().solve(grad_dev);
  const double m_star = wgrad.squaredNorm();
  return -0.5 * d * std::log((nn - 1.0) / nn)
         - nn / (2.0 * (nn - 1.0) * eta * eta) * wdev.squaredNorm()
         - nn / ((nn - 1.0) * eta) * wdev.dot(wgrad)
         - m_star / (2.0 * (nn - 1.0));
}

BaselineStats baseline_statistics(std::span<const double> losses) {
  if (losses.size() < 2) throw ConfigError("loss trace needs at least two points");
  for (double v : losses) {
    if (!std::isfinite(v)) throw ConfigError("loss trace must be finite");
  }
  BaselineStats out;
  out.delta_diff = -std::numeric_limits<double>::infinity();
  out.delta_ratio = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 1; t < losses.size(); ++t) {
    out.delta_diff = std::max(out.delta_diff, losses[t - 1] - losses[t]);
    if (!(losses[t] > 0.0)) throw NumericError("ratio undefined");
    out.delta_ratio = std::max(out.delta_ratio, losses[t - 1] / losses[t]);
  }
  out.backfront_diff = losses.front() - losses.back();
  if (!(losses.back() > 0.0)) throw NumericError("ratio undefined");
  out.backfront_ratio = losses.front() / losses.back();
  return out;
}

}  // namespace seqmi
