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

#include "seqmi/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "seqmi/errors.hpp"
#include "seqmi/special.hpp"

namespace seqmi {

double dkw_half_width(double xi, std::int64_t n) {
  if (!(xi > 0.0 && xi < 1.0)) throw ConfigError("confidence parameter must be in (0, 1)");
  if (n < 1) throw ConfigError("need at least one sample per class");
  return std::sqrt(std::log(4.0 / xi) / (2.0 * static_cast<double>(n)));
}

UcbCurves ucb_errors(const GameRecords& records, int stat_column,
                     std::span<const double> gamma_grid, double xi) {
  const ErrorEstimate est = estimate_errors(records, stat_column, gamma_grid);
  const double h0 = dkw_half_width(xi, est.n0);
  const double h1 = dkw_half_width(xi, est.n1);
  UcbCurves out;
  out.gamma = est.gamma;
  out.n0 = est.n0;
  out.n1 = est.n1;
  out.alpha_ucb.reserve(est.alpha.size());
  out.beta_ucb.reserve(est.beta.size());
  for (double a : est.alpha) out.alpha_ucb.push_back(std::min(1.0, a + h0));
  for (double b : est.beta) out.beta_ucb.push_back(std::min(1.0, b + h1));
  return out;
}

AuditOutcome epsilon_lower_bound(const GameRecords& records, int stat_column,
                                 double delta, double xi) {
  if (!(delta >= 0.0 && delta < 1.0)) throw ConfigError("delta must be in [0, 1)");
  const std::vector<double> grid = observed_gamma_grid(records, stat_column);
  const UcbCurves curves = ucb_errors(records, stat_column, grid, xi);

  AuditOutcome best;
  best.xi = xi;
  best.delta = delta;
  best.n0 = curves.n0;
  best.n1 = curves.n1;
  best.epsilon_lb = 0.0;
  best.side = "alpha";
  best.gamma = grid.front();
  best.alpha_ucb = curves.alpha_ucb.front();
  best.beta_ucb = curves.beta_ucb.front();

  double best_ratio = 1.0;  // ratios below 1 clamp to eps = 0
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double a = curves.alpha_ucb[i];
    const double b = curves.beta_ucb[i];
    // UCBs include a positive half-width, so the denominators are positive.
    const double from_alpha = (1.0 - delta - a) / b;
    const double from_beta = (1.0 - delta - b) / a;
    if (from_alpha > best_ratio) {
      best_ratio = from_alpha;
      best.side = "alpha";
      best.gamma = grid[i];
      best.alpha_ucb = a;
      best.beta_ucb = b;
    }
    if (from_beta > best_ratio) {
      best_ratio = from_beta;
      best.side = "beta";
      best.gamma = grid[i];
      best.alpha_ucb = a;
      best.beta_ucb = b;
    }
  }
  best.epsilon_lb = std::max(0.0, std::log(best_ratio));
  return best;
}

std::string audit_to_json(const AuditOutcome& outcome) {
  nlohmann::ordered_json j;
  j["epsilon_lb"] = outcome.epsilon_lb;
  j["gamma"] = std::isfinite(outcome.gamma)
                   ? nlohmann::ordered_json(outcome.gamma)
                   : nlohmann::ordered_json(outcome.gamma > 0 ? "inf" : "-inf");
  j["side"] = outcome.side;
  j["alpha_ucb"] = outcome.alpha_ucb;
  j["beta_ucb"] = outcome.beta_ucb;
  j["n0"] = outcome.n0;
  j["n1"] = outcome.n1;
  j["xi"] = outcome.xi;
  j["delta"] = outcome.delta;
  return j.dump(2);
}

namespace {

// delta(eps) for the Gaussian mechanism with noise multiplier s; strictly
// decreasing in eps.
double gaussian_delta(double eps, double s) {
  const double a = 1.0 / (2.0 * s);
  const double b = eps * s;
  return std_normal_cdf(a - b) - std::exp(eps) * std_normal_cdf(-a - b);
}

}  // namespace

double gaussian_mechanism_epsilon(double noise_multiplier, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must be in (0, 1)");
  if (noise_multiplier < 0.0) throw ConfigError("noise multiplier must be nonnegative");
  if (noise_multiplier == 0.0) return std::numeric_limits<double>::infinity();
  if (gaussian_delta(0.0, noise_multiplier) <= delta) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (gaussian_delta(hi, noise_multiplier) > delta) {
    hi *= 2.0;
    if (hi > 1e6) throw NumericError("epsilon search failed to bracket");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (gaussian_delta(mid, noise_multiplier) > delta) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-12 * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

double composed_gaussian_epsilon(double noise_multiplier, int steps, double delta) {
  if (steps < 1) throw ConfigError("step count must be >= 1");
  if (noise_multiplier == 0.0) return std::numeric_limits<double>::infinity();
  return gaussian_mechanism_epsilon(
      noise_multiplier / std::sqrt(static_cast<double>(steps)), delta);
}

double noise_multiplier_for_epsilon(double epsilon, int steps, double delta) {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (steps < 1) throw ConfigError("step count must be >= 1");
  // composed_gaussian_epsilon is strictly decreasing in the multiplier.
  double lo = 1e-3;
  double hi = 1.0;
  while (composed_gaussian_epsilon(hi, steps, delta) > epsilon) {
    hi *= 2.0;
    if (hi > 1e9) throw NumericError("noise multiplier search failed to bracket");
  }
  while (composed_gaussian_epsilon(lo, steps, delta) < epsilon) {
    lo *= 0.5;
    if (lo < 1e-12) throw NumericError("noise multiplier search failed to bracket");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (composed_gaussian_epsilon(mid, steps, delta) > epsilon) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-12 * hi) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace seqmi
