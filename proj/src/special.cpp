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

#include "seqmi/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "seqmi/errors.hpp"

namespace seqmi {

double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / 1.4142135623730950488);
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) throw ConfigError("empty statistic list");
  const double m = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(m)) {
    // All -inf collapses to -inf; a +inf element dominates.
    return m;
  }
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - m);
  return m + std::log(sum);
}

namespace {

// Lower incomplete gamma by its power series, for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int i = 0; i < 10000; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw NumericError("incomplete gamma series failed to converge");
}

// Upper incomplete gamma Q(a, x) by modified Lentz continued fraction,
// for x >= a + 1.
double gamma_q_continued_fraction(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) {
      return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw NumericError("incomplete gamma continued fraction failed to converge");
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (a <= 0.0) throw ConfigError("gamma shape must be positive");
  if (x < 0.0) throw ConfigError("gamma argument must be nonnegative");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_continued_fraction(a, x);
}

double chi2_cdf(double x, int dof) {
  if (dof < 1) throw ConfigError("chi-squared dof must be >= 1");
  if (x <= 0.0) return 0.0;
  return regularized_gamma_p(0.5 * dof, 0.5 * x);
}

double noncentral_chi2_cdf(double x, int dof, double lambda) {
  if (dof < 1) throw ConfigError("chi-squared dof must be >= 1");
  if (lambda < 0.0) throw ConfigError("non-centrality must be nonnegative");
  if (x <= 0.0) return 0.0;
  if (lambda == 0.0) return chi2_cdf(x, dof);

  // Poisson mixture sum_k w_k F_central(x; dof + 2k), w_k ~ Poisson(lambda/2).
  // Start at the Poisson mode and expand outward so the largest weights are
  // accumulated first; stop when the remaining mass is below 1e-14, which
  // bounds the truncation error since each CDF term is <= 1.
  const double half_lambda = 0.5 * lambda;
  const long k_mode = static_cast<long>(half_lambda);
  const double log_w_mode = -half_lambda + k_mode * std::log(half_lambda) -
                            std::lgamma(static_cast<double>(k_mode) + 1.0);
  const double w_mode = std::exp(log_w_mode);

  double total = w_mode * chi2_cdf(x, dof + 2 * static_cast<int>(k_mode));
  double mass = w_mode;

  double w_down = w_mode;
  long k_down = k_mode;
  double w_up = w_mode;
  long k_up = k_mode;
  while (1.0 - mass > 1e-14) {
    bool advanced = false;
    if (k_down > 0) {
      w_down *= static_cast<double>(k_down) / half_lambda;
      --k_down;
      total += w_down * chi2_cdf(x, dof + 2 * static_cast<int>(k_down));
      mass += w_down;
      advanced = true;
    }
    ++k_up;
    w_up *= half_lambda / static_cast<double>(k_up);
    if (w_up > 0.0) {
      total += w_up * chi2_cdf(x, dof + 2 * static_cast<int>(k_up));
      mass += w_up;
      advanced = true;
    }
    if (!advanced) break;
  }
  return std::min(total, 1.0);
}

}  // namespace seqmi
