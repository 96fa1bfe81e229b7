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

#include <cmath>
#include <vector>

#include <doctest.h>

#include <json.hpp>

#include "oracles.hpp"
#include "seqmi/errors.hpp"
#include "seqmi/special.hpp"

namespace seqmi {
namespace {

TEST_SUITE_BEGIN("audit");

TEST_CASE("dkw half-width anchors") {
  // xi -> 1 leaves sqrt(log 4 / (2N)).
  CHECK(dkw_half_width(0.999999999, 100) ==
        doctest::Approx(std::sqrt(std::log(4.0) / 200.0)).epsilon(1e-6));
  CHECK(dkw_half_width(0.05, 50000) ==
        doctest::Approx(std::sqrt(std::log(80.0) / 100000.0)).epsilon(1e-12));
  CHECK(dkw_half_width(0.05, 50000) == doctest::Approx(0.00662).epsilon(1e-3));
  CHECK_THROWS_AS(dkw_half_width(0.0, 100), ConfigError);
  CHECK_THROWS_AS(dkw_half_width(1.0, 100), ConfigError);
}

GameRecords separated_records(std::int64_t per_class) {
  GameRecords records({"stat"}, 2 * per_class);
  for (std::int64_t i = 0; i < per_class; ++i) {
    records.set_round(i, 0, 1, {-1.0 - static_cast<double>(i % 7)});
    records.set_round(per_class + i, 1, 1, {1.0 + static_cast<double>(i % 5)});
  }
  return records;
}

TEST_CASE("ucb curves dominate the empirical errors") {
  const GameRecords records = separated_records(500);
  const std::vector<double> grid = observed_gamma_grid(records, 0);
  const UcbCurves curves = ucb_errors(records, 0, grid, 0.05);
  const ErrorEstimate est = estimate_errors(records, 0, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(curves.alpha_ucb[i] >= est.alpha[i]);
    CHECK(curves.beta_ucb[i] >= est.beta[i]);
    CHECK(curves.alpha_ucb[i] <= 1.0);
    CHECK(curves.beta_ucb[i] <= 1.0);
  }
}

TEST_CASE("epsilon lower bound under perfect separation") {
  const std::int64_t per_class = 1000;
  const double xi = 0.05;
  const double delta = 1e-4;
  const GameRecords records = separated_records(per_class);
  const AuditOutcome outcome = epsilon_lower_bound(records, 0, delta, xi);
  const double h = std::sqrt(std::log(4.0 / xi) / (2.0 * per_class));
  CHECK(outcome.epsilon_lb ==
        doctest::Approx(std::log((1.0 - delta - h) / h)).epsilon(1e-10));
  CHECK(outcome.n0 == per_class);
  CHECK(outcome.n1 == per_class);
  CHECK(outcome.alpha_ucb == doctest::Approx(h));
  CHECK(outcome.beta_ucb == doctest::Approx(h));
}

TEST_CASE("no signal clamps to zero") {
  // Statistics independent of membership.
  const std::int64_t rounds = 4000;
  GameRecords records({"stat"}, rounds);
  RngStream rng(1, 0);
  for (std::int64_t r = 0; r < rounds; ++r) {
    records.set_round(r, rng.uniform() < 0.5 ? 1 : 0, 1, {rng.gaussian()});
  }
  const AuditOutcome outcome = epsilon_lower_bound(records, 0, 1e-4, 0.05);
  CHECK(outcome.epsilon_lb == 0.0);
}

TEST_CASE("bound grows with the round count on a non-private mechanism") {
  const AuditOutcome small =
      epsilon_lower_bound(separated_records(1000), 0, 1e-4, 0.05);
  const AuditOutcome large =
      epsilon_lower_bound(separated_records(10000), 0, 1e-4, 0.05);
  CHECK(large.epsilon_lb > small.epsilon_lb);
}

TEST_CASE("audit json fields") {
  const AuditOutcome outcome =
      epsilon_lower_bound(separated_records(100), 0, 1e-4, 0.05);
  const auto parsed = nlohmann::json::parse(audit_to_json(outcome));
  for (const char* field : {"epsilon_lb", "gamma", "side", "alpha_ucb", "beta_ucb",
                            "n0", "n1", "xi", "delta"}) {
    CHECK(parsed.contains(field));
  }
  CHECK(parsed["epsilon_lb"].get<double>() == doctest::Approx(outcome.epsilon_lb));
}

TEST_CASE("gaussian accountant anchors") {
  // Noise large enough that delta(0) <= delta leaves epsilon at zero.
  CHECK(gaussian_mechanism_epsilon(1e5, 1e-4) == 0.0);
  // Zero noise is unbounded.
  CHECK(std::isinf(composed_gaussian_epsilon(0.0, 5, 1e-4)));
  // Round trip: delta(eps(sigma)) == delta via the closed form.
  for (double sigma : {0.4, 0.8, 1.5, 4.0}) {
    const double eps = gaussian_mechanism_epsilon(sigma, 1e-4);
    const double a = 1.0 / (2.0 * sigma);
    const double b = eps * sigma;
    const double delta_back =
        std_normal_cdf(a - b) - std::exp(eps) * std_normal_cdf(-a - b);
    CHECK(delta_back == doctest::Approx(1e-4).epsilon(1e-6));
  }
}

TEST_CASE("accountant agrees with the trade-off-curve oracle") {
  for (double sigma : {0.5, 1.0, 2.0}) {
    const double closed = gaussian_mechanism_epsilon(sigma, 1e-4);
    const double numeric = oracle::tradeoff_curve_epsilon(1.0 / sigma, 1e-4);
    CHECK(std::fabs(closed - numeric) < 1e-3);
  }
  // Tighter single-point check at sigma = 1 with a finer tolerance.
  const double closed = gaussian_mechanism_epsilon(1.0, 1e-3);
  const double numeric = oracle::tradeoff_curve_epsilon(1.0, 1e-3);
  CHECK(std::fabs(closed - numeric) < 1e-3);
}

TEST_CASE("composition scales the effective noise") {
  const double delta = 1e-4;
  const double single = composed_gaussian_epsilon(2.0, 1, delta);
  const double doubled = composed_gaussian_epsilon(2.0, 2, delta);
  CHECK(doubled > single);
  // T-fold composition equals the single mechanism at sigma / sqrt(T).
  CHECK(composed_gaussian_epsilon(2.0, 4, delta) ==
        doctest::Approx(gaussian_mechanism_epsilon(1.0, delta)).epsilon(1e-10));
}

TEST_CASE("noise multiplier inversion round trips") {
  const double delta = 1e-4;
  for (double eps : {0.5, 1.0, 2.0, 4.0}) {
    for (int T : {1, 10}) {
      const double sigma = noise_multiplier_for_epsilon(eps, T, delta);
      CHECK(composed_gaussian_epsilon(sigma, T, delta) ==
            doctest::Approx(eps).epsilon(1e-8));
    }
  }
}

TEST_SUITE_END();

}  // namespace
}  // namespace seqmi
