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

#ifndef SEQMI_ERROR_THEORY_HPP_
#define SEQMI_ERROR_THEORY_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace seqmi {

// Closed-form Type I / Type II errors for the batch-mean log-LR tests.
// m_star is the squared Mahalanobis distance of the target from the data
// mean, (z - mu)^2 / sigma^2 in the univariate case. Thresholds gamma are in
// log-LR units.

// Largest attainable statistic value: 0.5 * (m_star - log((n-1)/n)).
// Above it the test never rejects.
double gamma_max(int n, double m_star);

// Known-insertion-time test. alpha is 0 for gamma > gamma_max; beta is 1
// there (the test never rejects).
double alpha_lr(double gamma, int n, double m_star);
double beta_lr(double gamma, int n, double m_star);

// Final-observation test: the same family with n replaced by n*T.
double gamma_max_final_obs(int n, int T, double m_star);
double alpha_final_obs(double gamma, int n, int T, double m_star);
double beta_final_obs(double gamma, int n, int T, double m_star);

// Max-over-time (GLR) test built from T i.i.d. per-step statistics:
// alpha_max = 1 - (1 - alpha_0)^T, beta_max = beta_0 * (1 - alpha_0)^{T-1}.
double alpha_max_tau(double gamma, int n, double m_star, int T);
double beta_max_tau(double gamma, int n, double m_star, int T);

// Threshold gamma with alpha_lr(gamma) = level, by bisection on
// [-50, gamma_max]; residual below 1e-10. Throws ConfigError when the level
// is not attainable on the bracket.
double threshold_for_alpha_lr(double level, int n, double m_star);
double threshold_for_alpha_final_obs(double level, int n, int T, double m_star);
// Solves the per-step level 1 - (1 - level)^{1/T} so that the max-over-time
// test has overall Type I error = level.
double threshold_for_alpha_max_tau(double level, int n, double m_star, int T);

// Power 1 - beta at the threshold calibrated to the given Type I level.
double power_lr_at_alpha(double level, int n, double m_star);
double power_final_obs_at_alpha(double level, int n, int T, double m_star);
double power_max_tau_at_alpha(double level, int n, double m_star, int T);

// Multivariate diagonal-covariance Type I error,
// alpha(gamma) = F_{chi2_d(n m_star)}(n R2(gamma)) with
// R2(gamma) = (2(n-1)/n) [ m_star/2 - gamma - (d/2) log((n-1)/n) ].
// Returns 0 beyond the multivariate gamma_max.
double gamma_max_mv(int n, int d, double m_star);
double alpha_lr_mv_diag(double gamma, int n, int d, double m_star);

// alpha/beta sampled on a threshold grid, plus CSV emission with columns
// gamma, alpha, beta, power.
struct ErrorCurve {
  std::vector<double> gamma;
  std::vector<double> alpha;
  std::vector<double> beta;
  int n = 0;
  int T = 1;
  double m_star = 0.0;
  std::string test;
};

ErrorCurve error_curve_lr(const std::vector<double>& gamma_grid, int n, double m_star);
ErrorCurve error_curve_final_obs(const std::vector<double>& gamma_grid, int n, int T,
                                 double m_star);
ErrorCurve error_curve_max_tau(const std::vector<double>& gamma_grid, int n,
                               double m_star, int T);
void write_power_curve_csv(const ErrorCurve& curve, std::ostream& os);

}  // namespace seqmi

#endif  // SEQMI_ERROR_THEORY_HPP_
