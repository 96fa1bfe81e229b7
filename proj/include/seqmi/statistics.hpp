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

#ifndef SEQMI_STATISTICS_HPP_
#define SEQMI_STATISTICS_HPP_

#include <span>

#include "seqmi/gaussian.hpp"

namespace seqmi {

// Membership-inference test statistics. Every function returns a log
// likelihood ratio (or a heuristic score) in log scale; thresholds are always
// in the same units.
//
// The batch-mean statistics consume the *recovered* batch mean, not the raw
// trace. Recovery (recover_batch_mean / the parameter-difference form for
// gradient descent) is the only place the rest of the sequence enters, which
// is what makes the statistics independent of the insertion time and of the
// number of steps.

// Log-LR of the insertion hypothesis given the batch mean of the insertion
// batch, for univariate data N(mu, sigma2) with batch size n and target z.
double loglr_batch_mean_uni(double batch_mean, double mu, double sigma2, int n,
                            double target);

// Multivariate version; dist carries (mu, Sigma). Reduces exactly to the
// univariate statistic at dimension 1.
double loglr_batch_mean_mv(const Vec& batch_mean, const GaussianParams& dist,
                           int n, const Vec& target);

// Log-LR under a uniform prior on the insertion time:
// log( (1/T) sum_t LR_t ) = logsumexp(loglrs) - log T.
double loglr_uniform_tau(std::span<const double> per_time_loglrs);

// Generalized-likelihood-ratio statistic: max_t log LR_t.
double loglr_max_tau(std::span<const double> per_time_loglrs);

// Final-observation test: the batch-mean statistic applied to the last output
// with effective batch size n*T.
double loglr_final_obs_uni(double final_mean, double mu, double sigma2, int n,
                           int T, double target);
double loglr_final_obs_mv(const Vec& final_mean, const GaussianParams& dist,
                          int n, int T, const Vec& target);

// First two moments of the per-sample gradient at a parameter point, either
// from a closed form or estimated from reference data.
struct GradientStats {
  Vec mean;
  Mat cov;
  enum class Provenance { kExact, kEstimated };
  Provenance provenance = Provenance::kExact;
  double ridge = 0.0;  // ridge added to the covariance when estimated
};

// Log-LR for one gradient-descent transition theta_prev -> theta_next with
// learning rate eta and batch size n, given gradient statistics at theta_prev
// and the target's gradient there.
double loglr_sgd(const Vec& theta_prev, const Vec& theta_next, double eta,
                 int n, const GradientStats& stats, const Vec& target_grad);

// Loss-trajectory heuristics over losses[0..T] evaluated at the target.
// The ratio statistics throw NumericError("ratio undefined") when a
// denominator is not strictly positive.
struct BaselineStats {
  double delta_diff;       // max_t (loss[t-1] - loss[t])
  double delta_ratio;      // max_t loss[t-1] / loss[t]
  double backfront_diff;   // loss[0] - loss[T]
  double backfront_ratio;  // loss[0] / loss[T]
};
BaselineStats baseline_statistics(std::span<const double> losses);

}  // namespace seqmi

#endif  // SEQMI_STATISTICS_HPP_
