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

#ifndef SEQMI_GAUSSIAN_HPP_
#define SEQMI_GAUSSIAN_HPP_

#include <Eigen/Dense>

#include "seqmi/rng.hpp"

namespace seqmi {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Mean and covariance of a Gaussian data distribution. The covariance must be
// symmetric (to 1e-12 relative) and positive definite; the all-zero matrix is
// also accepted to model a degenerate point mass, which only sampling may use.
class GaussianParams {
 public:
  GaussianParams(Vec mean, Mat covariance);
  static GaussianParams univariate(double mean, double variance);

  int dim() const { return static_cast<int>(mean_.size()); }
  const Vec& mean() const { return mean_; }
  const Mat& covariance() const { return cov_; }
  // Lower Cholesky factor of the covariance (zero matrix when degenerate).
  const Mat& chol() const { return chol_; }
  bool degenerate() const { return degenerate_; }

 private:
  Vec mean_;
  Mat cov_;
  Mat chol_;
  bool degenerate_;
};

// v' Sigma^{-1} v via Cholesky solve. Throws NumericError with message
// "covariance not positive definite" when the factorization fails.
double mahalanobis_sq(const Vec& v, const Mat& sigma);

// Same, reusing a precomputed lower Cholesky factor.
double mahalanobis_sq_chol(const Vec& v, const Mat& chol_lower);

// count x dim matrix of draws, one sample per row.
Mat sample_gaussian(RngStream& stream, const GaussianParams& params, int count);

// Lower Cholesky factor of an SPD matrix; throws NumericError if not SPD.
Mat cholesky_lower(const Mat& sigma);

}  // namespace seqmi

#endif  // SEQMI_GAUSSIAN_HPP_
