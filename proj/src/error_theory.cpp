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

#include "seqmi/error_theory.hpp"

#include <cmath>
#include <ostream>

#include "seqmi/csv.hpp"
#include "seqmi/errors.hpp"
#include "seqmi/special.hpp"

namespace seqmi {
namespace {

void check_args(int n, double m_star) {
  if (n < 2) throw ConfigError("batch size must be >= 2");
  if (m_star < 0.0) throw ConfigError("m_star must be nonnegative");
}

// b(gamma) = sqrt((n-1) (m_star - log(1 - 1/n) - 2 gamma)); the argument is
// nonnegative exactly when gamma <= gamma_max.
double b_of_gamma(double gamma, int n, double m_star) {
  const double nn = static_cast<double>(n);
  const double arg = m_star - std::log1p(-1.0 / nn) - 2.0 * gamma;
  return std::sqrt((nn - 1.0) * std::max(arg, 0.0));
}

}  // namespace

double gamma_max(int n, double m_star) {
  check_args(n, m_star);
  return 0.5 * (m_star - std::log1p(-1.0 / static_cast<double>(n)));
}

double alpha_lr(double gamma, int n, double m_star) {
  check_args(n, m_star);
  if (gamma > gamma_max(n, m_star)) return 0.0;
  const double a = std::sqrt(m_star * static_cast<double>(n));
  const double b = b_of_gamma(gamma, n, m_star);
  return std_normal_cdf(a + b) - std_normal_cdf(a - b);
}

double beta_lr(double gamma, int n, double m_star) {
  check_args(n, m_star);
  if (gamma > gamma_max(n, m_star)) return 1.0;
  const double nn = static_cast<double>(n);
  const double a = std::sqrt(m_star * nn);
  const double b = b_of_gamma(gamma, n, m_star);
  const double shrink = std::sqrt((nn - 1.0) / nn);
  const double grow = std::sqrt(nn / (nn - 1.0));
  return std_normal_cdf(a * shrink - b * grow) +
         std_normal_cdf(-a * shrink - b * grow);
}

double gamma_max_final_obs(int n, int T, double m_star) {
  if (T < 1) throw ConfigError("step count must be >= 1");
  if (n * T < 2) throw ConfigError("effective batch size must be >= 2");
  return gamma_max(n * T, m_star);
}

double alpha_final_obs(double gamma, int n, int T, double m_star) {
  if (T < 1) throw ConfigError("step count must be >= 1");
  if (n * T < 2) throw ConfigError("effective batch size must be >= 2");
  return alpha_lr(gamma, n * T, m_star);
}

double beta_final_obs(double gamma, int n, int T, double m_star) {
  if (T < 1) throw ConfigError("step count must be >= 1");
  if (n * T < 2) throw ConfigError("effective batch size must be >= 2");
  return beta_lr(gamma, n * T, m_star);
}

double alpha_max_tau(double gamma, int n, double m_star, int T) {
  if (T < 1) throw ConfigError("step count must be >= 1");
  const double a0 = alpha_lr(gamma, n, m_star);
  return 1.0 - std::pow(1.0 - a0, static_cast<double>(T));
}

double beta_max_tau(double gamma, int n, double m_star, int T) {
  if (T < 1) throw ConfigError("step count must be >= 1");
  const double a0 = alpha_lr(gamma, n, m_star);
  const double b0 = beta_lr(gamma, n, m_star);
  return b0 * std::pow(1.0 - a0, static_cast<double>(T - 1));
}

namespace {

// alpha_lr is continuous and nonincreasing in gamma, so bisection applies.
double bisect_alpha(double level, int n, double m_star) {
  if (!(level > 0.0 && level < 1.0)) {
    throw ConfigError("alpha level must be in (0, 1)");
  }
  double lo = -50.0;
  double hi = gamma_max(n, m_star);
  if (alpha_lr(lo, n, m_star) < level) {
    throw ConfigError("alpha level not attainable on bracket");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double a = alpha_lr(mid, n, m_star);
    if (a > level) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (std::fabs(a - level) <= 1e-12 || hi - lo < 1e-14) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double threshold_for_alpha_lr(double level, int n, double m_star) {
  return bisect_alpha(level, n, m_star);
}

double threshold_for_alpha_final_obs(double level, int n, int T, double m_star) {
  if (T < 1) throw ConfigError("step count must be >= 1");
  return bisect_alpha(level, n * T, m_star);
}

double threshold_for_alpha_max_tau(double level, int n, double m_star, int T) {
  if (T < 1) throw ConfigError("step count must be >= 1");
  if (!(level > 0.0 && level < 1.0)) {
    throw ConfigError("alpha level must be in (0, 1)");
  }
  const double per_step = 1.0 - std::pow(1.0 - level, 1.0 / static_cast<double>(T));
  return bisect_alpha(per_step, n, m_star);
}

double power_lr_at_alpha(double level, int n, double m_star) {
  return 1.0 - beta_lr(threshold_for_alpha_lr(level, n, m_star), n, m_star);
}

double power_final_obs_at_alpha(double level, int n, int T, double m_star) {
  return 1.0 - beta_final_obs(threshold_for_alpha_final_obs(level, n, T, m_star),
                              n, T, m_star);
}

double power_max_tau_at_alpha(double level, int n, double m_star, int T) {
  const double gamma = threshold_for_alpha_max_tau(level, n, m_star, T);
  return 1.0 - beta_max_tau(gamma, n, m_star, T);
}

double gamma_max_mv(int n, int d, double m_star) {
  check_args(n, m_star);
  if (d < 1) throw ConfigError("dimension must be >= 1");
  return 0.5 * (m_star - d * std::log1p(-1.0 / static_cast<double>(n)));
}

double alpha_lr_mv_diag(double gamma, int n, int d, double m_star) {
  check_args(n, m_star);
  if (d < 1) throw ConfigError("dimension must be >= 1");
  if (gamma > gamma_max_mv(n, d, m_star)) return 0.0;
  const double nn = static_cast<double>(n);
  const double r2 = 2.0 * (nn - 1.0) / nn *
                    (0.5 * m_star - gamma -
                     0.5 * d * std::log1p(-1.0 / nn));
  if (r2 <= 0.0) return 0.0;
  return noncentral_chi2_cdf(nn * r2, d, nn * m_star);
}

namespace {

ErrorCurve make_curve(const std::vector<double>& grid, int n, int T, double m_star,
                      const std::string& test, double (*af)(double, int, double, int),
                      double (*bf)(double, int, double, int)) {
  ErrorCurve c;
  c.gamma = grid;
  c.n = n;
  c.T = T;
  c.m_star = m_star;
  c.test = test;
  c.alpha.reserve(grid.size());
  c.beta.reserve(grid.size());
  for (double g : grid) {
    c.alpha.push_back(af(g, n, m_star, T));
    c.beta.push_back(bf(g, n, m_star, T));
  }
  return c;
}

}  // namespace

ErrorCurve error_curve_lr(const std::vector<double>& gamma_grid, int n, double m_star) {
  return make_curve(
      gamma_grid, n, 1, m_star, "lr_tau",
      [](double g, int nn, double m, int) { return alpha_lr(g, nn, m); },
      [](double g, int nn, double m, int) { return beta_lr(g, nn, m); });
}

ErrorCurve error_curve_final_obs(const std::vector<double>& gamma_grid, int n, int T,
                                 double m_star) {
  return make_curve(
      gamma_grid, n, T, m_star, "final_obs",
      [](double g, int nn, double m, int t) { return alpha_final_obs(g, nn, t, m); },
      [](double g, int nn, double m, int t) { return beta_final_obs(g, nn, t, m); });
}

ErrorCurve error_curve_max_tau(const std::vector<double>& gamma_grid, int n,
                               double m_star, int T) {
  return make_curve(gamma_grid, n, T, m_star, "lr_max", &alpha_max_tau, &beta_max_tau);
}

void write_power_curve_csv(const ErrorCurve& curve, std::ostream& os) {
  os << "gamma,alpha,beta,power\n";
  for (std::size_t i = 0; i < curve.gamma.size(); ++i) {
    os << csv_double(curve.gamma[i]) << ',' << csv_double(curve.alpha[i]) << ','
       << csv_double(curve.beta[i]) << ',' << csv_double(1.0 - curve.beta[i]) << "\n";
  }
}

}  // namespace seqmi
