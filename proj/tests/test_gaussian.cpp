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

#include "seqmi/gaussian.hpp"

#include <cmath>

#include <doctest.h>

#include "seqmi/errors.hpp"

namespace seqmi {
namespace {

TEST_SUITE_BEGIN("gaussian");

TEST_CASE("mahalanobis against hand inverse") {
  Vec v(2);
  v << 2.0, 1.0;
  Mat sigma(2, 2);
  sigma << 2.0, 0.0, 0.0, 1.0;
  CHECK(mahalanobis_sq(v, sigma) == doctest::Approx(3.0).epsilon(1e-14));

  CHECK(mahalanobis_sq(Vec::Zero(3), Mat::Identity(3, 3)) == 0.0);

  Vec w(3);
  w << 1.0, -2.0, 0.5;
  CHECK(mahalanobis_sq(w, Mat::Identity(3, 3)) ==
        doctest::Approx(w.squaredNorm()).epsilon(1e-14));
}

TEST_CASE("mahalanobis rejects non-SPD covariance") {
  Mat bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;  // indefinite
  Vec v = Vec::Ones(2);
  CHECK_THROWS_WITH_AS(mahalanobis_sq(v, bad), "covariance not positive definite",
                       NumericError);
}

TEST_CASE("params validate symmetry and shape") {
  Mat asym(2, 2);
  asym << 1.0, 0.5, 0.2, 1.0;
  CHECK_THROWS_AS(GaussianParams(Vec::Zero(2), asym), ConfigError);
  CHECK_THROWS_AS(GaussianParams(Vec::Zero(3), Mat::Identity(2, 2)), ConfigError);
}

TEST_CASE("degenerate sampling returns the mean") {
  GaussianParams params = GaussianParams::univariate(2.5, 0.0);
  RngStream rng(1, 0);
  const Mat samples = sample_gaussian(rng, params, 50);
  for (int i = 0; i < samples.rows(); ++i) {
    CHECK(samples(i, 0) == 2.5);
  }
}

TEST_CASE("sampling is reproducible per stream") {
  GaussianParams params(Vec::Zero(3), Mat::Identity(3, 3));
  RngStream a(77, 5), b(77, 5);
  const Mat first = sample_gaussian(a, params, 20);
  const Mat second = sample_gaussian(b, params, 20);
  CHECK((first - second).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sample moments match the distribution") {
  // Univariate: 1e6 draws, mean within 4 sigma / sqrt(n), variance in
  // [0.99, 1.01].
  GaussianParams params = GaussianParams::univariate(0.7, 1.0);
  RngStream rng(3, 1);
  const int samples = 1000000;
  const Mat draws = sample_gaussian(rng, params, samples);
  const double mean = draws.col(0).mean();
  CHECK(std::fabs(mean - 0.7) < 4.0 / std::sqrt(static_cast<double>(samples)));
  const double var =
      (draws.col(0).array() - mean).square().sum() / (samples - 1);
  CHECK(var > 0.99);
  CHECK(var < 1.01);
}

TEST_CASE("correlated sampling reproduces the covariance") {
  Mat sigma(2, 2);
  sigma << 2.0, 0.8, 0.8, 1.0;
  GaussianParams params(Vec::Zero(2), sigma);
  RngStream rng(13, 2);
  const int samples = 200000;
  const Mat draws = sample_gaussian(rng, params, samples);
  Mat centered = draws.rowwise() - draws.colwise().mean();
  const Mat cov = centered.transpose() * centered / (samples - 1);
  CHECK((cov - sigma).cwiseAbs().maxCoeff() < 0.05);
}

TEST_SUITE_END();

}  // namespace
}  // namespace seqmi
