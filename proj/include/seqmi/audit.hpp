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

#ifndef SEQMI_AUDIT_HPP_
#define SEQMI_AUDIT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "seqmi/game.hpp"

namespace seqmi {

// DKW half-width sqrt(log(4/xi) / (2 n)). Two one-sided bands at xi/4 each
// per error curve; a union bound over the two curves gives overall level xi.
double dkw_half_width(double xi, std::int64_t n);

// Empirical errors plus the DKW half-width, clipped to at most 1. The band is
// uniform in gamma, so no union bound over the grid is needed.
struct UcbCurves {
  std::vector<double> gamma;
  std::vector<double> alpha_ucb;
  std::vector<double> beta_ucb;
  std::int64_t n0 = 0;
  std::int64_t n1 = 0;
};
UcbCurves ucb_errors(const GameRecords& records, int stat_column,
                     std::span<const double> gamma_grid, double xi);

// High-probability lower bound on the privacy parameter:
// eps_lb = log max_gamma max[(1 - delta - alpha_ucb)/beta_ucb,
//                            (1 - delta - beta_ucb)/alpha_ucb],
// maximized over the observed statistic values (the empirical error curves
// are step functions, so the supremum over all real thresholds is attained
// there), clamped at 0. Holds with probability at least 1 - xi.
struct AuditOutcome {
  double epsilon_lb = 0.0;
  double gamma = 0.0;
  std::string side;        // "alpha" or "beta": which numerator won
  double alpha_ucb = 1.0;  // at the winning gamma
  double beta_ucb = 1.0;
  std::int64_t n0 = 0;
  std::int64_t n1 = 0;
  double xi = 0.0;
  double delta = 0.0;
};
AuditOutcome epsilon_lower_bound(const GameRecords& records, int stat_column,
                                 double delta, double xi);

// JSON object with fields epsilon_lb, gamma, side, alpha_ucb, beta_ucb,
// n0, n1, xi, delta.
std::string audit_to_json(const AuditOutcome& outcome);

// Smallest eps such that the Gaussian mechanism with the given noise
// multiplier (noise std / sensitivity) satisfies (eps, delta)-DP, from the
// analytic delta(eps) = Phi(1/(2s) - eps s) - e^eps Phi(-1/(2s) - eps s).
double gaussian_mechanism_epsilon(double noise_multiplier, double delta);

// T-fold composition of the Gaussian mechanism, treated exactly as a single
// Gaussian mechanism with noise multiplier sigma / sqrt(T). Returns +inf when
// sigma == 0.
double composed_gaussian_epsilon(double noise_multiplier, int steps, double delta);

// Inverse of composed_gaussian_epsilon in the noise multiplier.
double noise_multiplier_for_epsilon(double epsilon, int steps, double delta);

}  // namespace seqmi

#endif  // SEQMI_AUDIT_HPP_
