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

#include "seqmi/mean_mechanism.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include <doctest.h>

#include "oracles.hpp"
#include "seqmi/errors.hpp"
#include "seqmi/statistics.hpp"

namespace seqmi {
namespace {

TEST_SUITE_BEGIN("mean_mechanism");

DistributionSchedule standard_schedule(int T, int d = 1) {
  return DistributionSchedule::stationary(
      GaussianParams(Vec::Zero(d), Mat::Identity(d, d)), T);
}

TEST_CASE("single batch mean is the sample average") {
  RngStream stream(1, 0);
  const Mat means = simulate_batch_means(standard_schedule(1), 2,
                                         InsertionSpec::out(), stream);
  // Replay the same substream to recover the raw samples.
  RngStream replay = stream.child(1);
  GaussianParams params(Vec::Zero(1), Mat::Identity(1, 1));
  const Mat raw = sample_gaussian(replay, params, 2);
  CHECK(means(0, 0) == doctest::Approx((raw(0, 0) + raw(1, 0)) / 2.0).epsilon(1e-15));
}

TEST_CASE("insertion pins the replaced sample") {
  // n=2, tau=1, z=5: the batch mean is (5 + other)/2 where the other sample
  // is the second replayed draw.
  Vec target(1);
  target << 5.0;
  RngStream stream(2, 0);
  const Mat means = simulate_batch_means(standard_schedule(1), 2,
                                         InsertionSpec::in(1, target, 1), stream);
  RngStream replay = stream.child(1);
  GaussianParams params(Vec::Zero(1), Mat::Identity(1, 1));
  const Mat raw = sample_gaussian(replay, params, 2);
  CHECK(means(0, 0) == doctest::Approx((5.0 + raw(1, 0)) / 2.0).epsilon(1e-15));
}

TEST_CASE("trace follows the cumulative-mean recursion") {
  Mat batch_means(4, 1);
  batch_means << 1.0, 2.0, 3.0, 4.0;
  const MeanTrace trace = trace_from_batch_means(batch_means, 2);
  CHECK(trace.values(0, 0) == doctest::Approx(1.0));
  CHECK(trace.values(1, 0) == doctest::Approx(1.5));
  CHECK(trace.values(2, 0) == doctest::Approx(2.0));
  CHECK(trace.values(3, 0) == doctest::Approx(2.5));
}

TEST_CASE("recover_batch_mean inverts the trace") {
  SUBCASE("tau = 1 returns the first output") {
    Mat batch_means(3, 2);
    batch_means << 1.0, -1.0, 0.5, 2.0, -3.0, 0.25;
    const MeanTrace trace = trace_from_batch_means(batch_means, 4);
    CHECK((recover_batch_mean(trace, 1) - trace.values.row(0).transpose()).norm() ==
          0.0);
  }

  SUBCASE("constant trace recovers the constant") {
    MeanTrace trace;
    trace.batch_size = 3;
    trace.values = Mat::Constant(5, 1, 0.8);
    for (int t = 1; t <= 5; ++t) {
      CHECK(recover_batch_mean(trace, t)(0) == doctest::Approx(0.8).epsilon(1e-12));
    }
  }

  SUBCASE("round trip over random traces") {
    RngStream rng(99, 0);
    for (int trial = 0; trial < 500; ++trial) {
      const int T = 1 + static_cast<int>(rng.uniform_int(20));
      const int d = rng.uniform() < 0.5 ? 1 : 5;
      Mat batch_means(T, d);
      for (int t = 0; t < T; ++t) {
        for (int j = 0; j < d; ++j) batch_means(t, j) = 4.0 * (rng.uniform() - 0.5);
      }
      const MeanTrace trace = trace_from_batch_means(batch_means, 10);
      for (int t = 1; t <= T; ++t) {
        const Vec recovered = recover_batch_mean(trace, t);
        const Vec truth = batch_means.row(t - 1).transpose();
        CHECK((recovered - truth).norm() <= 1e-12 * std::max(1.0, truth.norm()));
      }
    }
  }

  SUBCASE("out of range throws") {
    const MeanTrace trace = trace_from_batch_means(Mat::Zero(3, 1), 2);
    CHECK_THROWS_AS(recover_batch_mean(trace, 0), ConfigError);
    CHECK_THROWS_AS(recover_batch_mean(trace, 4), ConfigError);
  }
}

TEST_CASE("batch size below two is rejected") {
  RngStream stream(1, 0);
  CHECK_THROWS_WITH_AS(
      simulate_batch_means(standard_schedule(2), 1, InsertionSpec::out(), stream),
      "batch size must be >= 2", ConfigError);
  Vec target(1);
  target << 1.0;
  CHECK_THROWS_WITH_AS(
      simulate_batch_means(standard_schedule(2), 4, InsertionSpec::in(3, target, 1),
                           stream),
      "insertion time out of range", ConfigError);
}

TEST_CASE("recovered batch means under the null are N(mu, sigma2/n)") {
  // Standardized recovered means across many traces pass a KS check.
  const int trials = 10000;
  const int T = 10;
  const int n = 10;
  std::vector<double> standardized;
  standardized.reserve(trials * 2);
  const DistributionSchedule schedule = standard_schedule(T);
  for (int i = 0; i < trials; ++i) {
    RngStream stream(123, static_cast<std::uint64_t>(i));
    const MeanTrace trace = run_mean_mechanism(schedule, n, InsertionSpec::out(), stream);
    for (int t : {3, 8}) {
      standardized.push_back(recover_batch_mean(trace, t)(0) * std::sqrt(1.0 * n));
    }
  }
  CHECK(oracle::ks_distance_vs_normal(standardized) <
        oracle::ks_critical_001(standardized.size()));
}

TEST_CASE("statistic ignores parameter changes outside the insertion batch") {
  // Two schedules agreeing only at step tau; the same per-batch substreams
  // replay identical batch-tau samples. The batch-mean statistic computed at
  // tau must be bit-identical, and the trace-mediated recovery must agree to
  // rounding.
  const int T = 6;
  const int n = 8;
  const int tau = 4;
  std::vector<GaussianParams> base;
  std::vector<GaussianParams> shifted;
  for (int t = 1; t <= T; ++t) {
    base.emplace_back(GaussianParams::univariate(0.0, 1.0));
    if (t == tau) {
      shifted.emplace_back(GaussianParams::univariate(0.0, 1.0));
    } else {
      shifted.emplace_back(GaussianParams::univariate(0.5 * t, 2.0 + 0.1 * t));
    }
  }
  Vec target(1);
  target << 3.0;
  const InsertionSpec spec = InsertionSpec::in(tau, target, 2);
  RngStream stream(7, 11);
  const Mat means_a =
      simulate_batch_means(DistributionSchedule(base), n, spec, stream);
  const Mat means_b =
      simulate_batch_means(DistributionSchedule(shifted), n, spec, stream);
  CHECK(means_a(tau - 1, 0) == means_b(tau - 1, 0));

  const double stat_a = loglr_batch_mean_uni(means_a(tau - 1, 0), 0.0, 1.0, n, 3.0);
  const double stat_b = loglr_batch_mean_uni(means_b(tau - 1, 0), 0.0, 1.0, n, 3.0);
  CHECK(stat_a == stat_b);

  const MeanTrace trace_a = trace_from_batch_means(means_a, n);
  const MeanTrace trace_b = trace_from_batch_means(means_b, n);
  const double recovered_a = recover_batch_mean(trace_a, tau)(0);
  const double recovered_b = recover_batch_mean(trace_b, tau)(0);
  CHECK(recovered_a == doctest::Approx(recovered_b).epsilon(1e-12));
}

TEST_CASE("trace csv layout") {
  Mat batch_means(2, 2);
  batch_means << 1.0, 2.0, 3.0, 4.0;
  const MeanTrace trace = trace_from_batch_means(batch_means, 2);
  std::ostringstream os;
  write_trace_csv(trace, os);
  CHECK(os.str() == "t,dim_0,dim_1\n1,1,2\n2,2,3\n");
}

TEST_SUITE_END();

}  // namespace
}  // namespace seqmi
