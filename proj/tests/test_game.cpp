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

#include "seqmi/game.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include <doctest.h>

#include "seqmi/error_theory.hpp"
#include "seqmi/errors.hpp"

namespace seqmi {
namespace {

TEST_SUITE_BEGIN("game");

MeanGameSpec standard_spec(int T, int tau, double nu_b = 0.5) {
  MeanGameSpec spec{
      DistributionSchedule::stationary(GaussianParams::univariate(0.0, 1.0), T), 10,
      CrafterConfig{}, {Adversary::kLrTau, Adversary::kLrUnif, Adversary::kLrMax,
                        Adversary::kFinalObs}};
  spec.crafter.nu_b = nu_b;
  spec.crafter.nu_tau = TauDistribution::point_mass(tau);
  Vec target(1);
  target << 3.0;
  spec.crafter.target = target;
  return spec;
}

TEST_CASE("crafter honors degenerate membership distributions") {
  const int T = 6;
  CrafterConfig config;
  config.nu_b = 0.0;
  config.nu_tau = TauDistribution::point_mass(3);
  RngStream stream(1, 0);
  for (int i = 0; i < 200; ++i) {
    const CrafterDraw draw = draw_crafter(config, T, 10, stream);
    CHECK(draw.b == 0);
    CHECK(draw.tau == 3);
    CHECK(draw.replaced_index >= 1);
    CHECK(draw.replaced_index <= 10);
  }
  config.nu_b = 1.0;
  for (int i = 0; i < 200; ++i) {
    CHECK(draw_crafter(config, T, 10, stream).b == 1);
  }
}

TEST_CASE("uniform insertion times are uniform") {
  const int T = 10;
  CrafterConfig config;
  config.nu_b = 1.0;
  config.nu_tau = TauDistribution::uniform();
  std::vector<int> counts(T, 0);
  const int samples = 100000;
  RngStream stream(2, 0);
  for (int i = 0; i < samples; ++i) {
    ++counts[draw_crafter(config, T, 10, stream).tau - 1];
  }
  // chi-squared, 9 dof, 0.001 critical value 27.88.
  double chi2 = 0.0;
  const double expected = static_cast<double>(samples) / T;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < 27.88);
}

TEST_CASE("tau weight validation") {
  CHECK_THROWS_AS(TauDistribution::weights({0.5, 0.4}).validate(2), ConfigError);
  CHECK_THROWS_AS(TauDistribution::weights({0.5, 0.5}).validate(3), ConfigError);
  CHECK_THROWS_AS(TauDistribution::weights({1.5, -0.5}).validate(2), ConfigError);
  CHECK_NOTHROW(TauDistribution::weights({0.25, 0.75}).validate(2));
  CHECK_THROWS_AS(TauDistribution::point_mass(4).validate(3), ConfigError);
}

TEST_CASE("single round produces every requested statistic") {
  const GameRecords records = run_mean_game(standard_spec(5, 2), 1, 42, 1);
  CHECK(records.rounds() == 1);
  CHECK(records.stat_count() == 4);
  for (int i = 0; i < records.stat_count(); ++i) {
    CHECK(std::isfinite(records.stat(i, 0)));
  }
}

TEST_CASE("games are deterministic across thread counts") {
  const GameRecords serial = run_mean_game(standard_spec(8, 4), 400, 7, 1);
  const GameRecords parallel = run_mean_game(standard_spec(8, 4), 400, 7, 4);
  REQUIRE(serial.rounds() == parallel.rounds());
  for (std::int64_t r = 0; r < serial.rounds(); ++r) {
    CHECK(serial.b(r) == parallel.b(r));
    CHECK(serial.tau(r) == parallel.tau(r));
    for (int i = 0; i < serial.stat_count(); ++i) {
      CHECK(serial.stat(i, r) == parallel.stat(i, r));
    }
  }
}

TEST_CASE("membership frequency matches nu_b") {
  const std::int64_t rounds = 20000;
  const GameRecords records = run_mean_game(standard_spec(5, 3), rounds, 11, 0);
  const double frequency =
      static_cast<double>(records.count_b(1)) / static_cast<double>(rounds);
  CHECK(std::fabs(frequency - 0.5) <= 3.0 * std::sqrt(0.25 / rounds));
}

TEST_CASE("error estimation counts thresholds as printed") {
  GameRecords records({"stat"}, 6);
  // Hand-placed statistics: OUT rounds {1, 2, 3}, IN rounds {2, 4, 5}.
  records.set_round(0, 0, 1, {1.0});
  records.set_round(1, 0, 1, {2.0});
  records.set_round(2, 0, 1, {3.0});
  records.set_round(3, 1, 1, {2.0});
  records.set_round(4, 1, 1, {4.0});
  records.set_round(5, 1, 1, {5.0});
  const std::vector<double> grid = {0.0, 2.0, 10.0};
  const ErrorEstimate est = estimate_errors(records, 0, grid);
  CHECK(est.n0 == 3);
  CHECK(est.n1 == 3);
  // gamma below all statistics: alpha = 1, beta = 0.
  CHECK(est.alpha[0] == doctest::Approx(1.0));
  CHECK(est.beta[0] == doctest::Approx(0.0));
  // gamma = 2: strict > for alpha (only 3.0 exceeds), <= for beta (only 2.0).
  CHECK(est.alpha[1] == doctest::Approx(1.0 / 3.0));
  CHECK(est.beta[1] == doctest::Approx(1.0 / 3.0));
  // gamma above all: alpha = 0, beta = 1.
  CHECK(est.alpha[2] == doctest::Approx(0.0));
  CHECK(est.beta[2] == doctest::Approx(1.0));
}

TEST_CASE("error estimation needs both classes") {
  GameRecords records({"stat"}, 2);
  records.set_round(0, 1, 1, {0.0});
  records.set_round(1, 1, 1, {1.0});
  const std::vector<double> grid = {0.0};
  CHECK_THROWS_WITH_AS(estimate_errors(records, 0, grid),
                       "need both member and non-member rounds", ConfigError);
}

TEST_CASE("roc endpoints and separation") {
  SUBCASE("perfect separation") {
    GameRecords records({"stat"}, 6);
    records.set_round(0, 0, 1, {-3.0});
    records.set_round(1, 0, 1, {-2.0});
    records.set_round(2, 0, 1, {-1.0});
    records.set_round(3, 1, 1, {1.0});
    records.set_round(4, 1, 1, {2.0});
    records.set_round(5, 1, 1, {3.0});
    const RocCurve curve = roc_curve(records, 0);
    CHECK(curve.auc == doctest::Approx(1.0));
    CHECK(tpr_at_fpr(curve, 0.01) == doctest::Approx(1.0));
  }

  SUBCASE("label-independent statistics give chance AUC") {
    const std::int64_t rounds = 20000;
    GameRecords records({"stat"}, rounds);
    RngStream rng(3, 0);
    for (std::int64_t r = 0; r < rounds; ++r) {
      records.set_round(r, rng.uniform() < 0.5 ? 1 : 0, 1, {rng.gaussian()});
    }
    const RocCurve curve = roc_curve(records, 0);
    CHECK(std::fabs(curve.auc - 0.5) < 0.02);
  }

  SUBCASE("monotone curve") {
    const GameRecords records = run_mean_game(standard_spec(5, 3), 5000, 17, 0);
    const RocCurve curve = roc_curve(records, 0);
    for (std::size_t i = 1; i < curve.fpr.size(); ++i) {
      CHECK(curve.fpr[i] >= curve.fpr[i - 1]);
      CHECK(curve.tpr[i] >= curve.tpr[i - 1]);
    }
    CHECK(curve.fpr.front() == 0.0);
    CHECK(curve.fpr.back() == 1.0);
  }
}

TEST_CASE("tpr_at_fpr never interpolates above observed points") {
  RocCurve curve;
  curve.fpr = {0.0, 0.02, 0.5, 1.0};
  curve.tpr = {0.0, 0.40, 0.9, 1.0};
  curve.n0 = curve.n1 = 100;
  // 0.01 sits below the first observed positive FPR: conservative answer 0.
  CHECK(tpr_at_fpr(curve, 0.01) == 0.0);
  CHECK(tpr_at_fpr(curve, 0.02) == doctest::Approx(0.40));
  CHECK(tpr_at_fpr(curve, 0.3) == doctest::Approx(0.40));
  CHECK_THROWS_AS(tpr_at_fpr(curve, 0.0), ConfigError);
  CHECK_THROWS_AS(tpr_at_fpr(curve, 1.0), ConfigError);
}

TEST_CASE("known-tau statistic tracks the closed-form errors") {
  // MC alpha/beta at a few thresholds against the closed forms.
  const int T = 10;
  const int tau = 5;
  const std::int64_t rounds = 20000;
  const GameRecords records = run_mean_game(standard_spec(T, tau), rounds, 23, 0);
  const std::vector<double> grid = {-2.0, 0.0, 2.0, 4.0};
  const ErrorEstimate est = estimate_errors(records, 0, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double alpha = alpha_lr(grid[i], 10, 9.0);
    const double beta = beta_lr(grid[i], 10, 9.0);
    const double se_a =
        std::sqrt(std::max(alpha * (1 - alpha), 1e-12) / static_cast<double>(est.n0));
    const double se_b =
        std::sqrt(std::max(beta * (1 - beta), 1e-12) / static_cast<double>(est.n1));
    CHECK(std::fabs(est.alpha[i] - alpha) <= 3.5 * se_a + 1e-9);
    CHECK(std::fabs(est.beta[i] - beta) <= 3.5 * se_b + 1e-9);
  }
}

TEST_CASE("records csv layout") {
  GameRecords records({"lr_tau", "final_obs"}, 2);
  records.set_round(0, 0, 3, {1.5, -0.25});
  records.set_round(1, 1, 4, {2.0, 0.5});
  std::ostringstream os;
  records.write_csv(os);
  CHECK(os.str() ==
        "round,B,tau,stat_lr_tau,stat_final_obs\n"
        "0,0,3,1.5,-0.25\n"
        "1,1,4,2,0.5\n");
}

TEST_CASE("shift game observation model") {
  ShiftGameSpec spec;
  spec.shift = 2.0;
  spec.noise_std = 1.0;
  spec.nu_b = 0.5;
  const GameRecords records = run_shift_game(spec, 50000, 5, 0);
  // Class-conditional means near 0 and the shift.
  double sum0 = 0.0, sum1 = 0.0;
  std::int64_t n0 = 0, n1 = 0;
  for (std::int64_t r = 0; r < records.rounds(); ++r) {
    if (records.b(r) == 0) {
      sum0 += records.stat(0, r);
      ++n0;
    } else {
      sum1 += records.stat(0, r);
      ++n1;
    }
  }
  CHECK(std::fabs(sum0 / n0) < 0.03);
  CHECK(std::fabs(sum1 / n1 - 2.0) < 0.03);
}

TEST_CASE("sgd game covers lr and baselines") {
  auto problem = std::make_shared<LinRegProblem>(Vec::Ones(3), Mat::Identity(3, 3), 1.0);
  SgdGameSpec spec;
  spec.problem = problem;
  Vec theta0 = Vec::Ones(3);
  theta0(0) += 1.0;
  spec.sgd = SgdConfig::constant(5, 10, 0.1, theta0);
  spec.crafter.nu_b = 0.5;
  spec.crafter.nu_tau = TauDistribution::point_mass(3);
  Vec x = Vec::Zero(3);
  x(0) = 2.0;
  spec.crafter.target = problem->make_point(x, problem->theta_star().dot(x) + 6.0);
  spec.adversaries = {Adversary::kLrSgd, Adversary::kDeltaDiff, Adversary::kDeltaRatio,
                      Adversary::kBackFrontDiff, Adversary::kBackFrontRatio};
  const GameRecords records = run_sgd_game(spec, 2000, 13, 0);
  CHECK(records.rounds() == 2000);
  // The LR adversary must separate members from non-members clearly here.
  const RocCurve curve = roc_curve(records, records.stat_index("lr_sgd"));
  CHECK(curve.auc > 0.9);
  // And it is deterministic across thread counts.
  const GameRecords again = run_sgd_game(spec, 2000, 13, 3);
  for (std::int64_t r = 0; r < records.rounds(); ++r) {
    CHECK(records.stat(0, r) == again.stat(0, r));
  }
}

TEST_CASE("tau-agnostic statistics carry no tau information") {
  // With the same seed, point-mass and uniform crafters give each round the
  // same trace whenever (B, tau) agree; lr_unif and lr_max never read tau, so
  // records from OUT rounds are identical across crafters.
  MeanGameSpec point_spec = standard_spec(6, 2, 0.0);
  MeanGameSpec unif_spec = point_spec;
  unif_spec.crafter.nu_tau = TauDistribution::uniform();
  const GameRecords a = run_mean_game(point_spec, 500, 31, 0);
  const GameRecords b = run_mean_game(unif_spec, 500, 31, 0);
  const int unif_col = a.stat_index("lr_unif");
  const int max_col = a.stat_index("lr_max");
  for (std::int64_t r = 0; r < a.rounds(); ++r) {
    REQUIRE(a.b(r) == 0);
    CHECK(a.stat(unif_col, r) == b.stat(unif_col, r));
    CHECK(a.stat(max_col, r) == b.stat(max_col, r));
  }
}

TEST_SUITE_END();

}  // namespace
}  // namespace seqmi
