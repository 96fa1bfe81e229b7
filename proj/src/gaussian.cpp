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

#include "seqmi/errors.hpp"

namespace seqmi {

Mat cholesky_lower(const Mat& sigma) {
  Eigen::LLT<Mat> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw NumericError("covariance not positive definite");
  }
  return llt.matrixL();
}

GaussianParams::GaussianParams(Vec mean, Mat covariance)
    : mean_(std::move(mean)), cov_(std::move(covariance)) {
  if (mean_.size() < 1) throw ConfigError("gaussian dimension must be >= 1");
  if (cov_.rows() != mean_.size() || cov_.cols() != mean_.size()) {
    throw ConfigError("covariance shape does not match mean dimension");
  }
  const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
  const double asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    throw ConfigError("covariance not symmetric");
  }
  degenerate_ = cov_.isZero(0.0);
  if (degenerate_) {
    chol_ = Mat::Zero(cov_.rows(), cov_.cols());
  } else {
    chol_ = cholesky_lower(cov_);
  }
}

GaussianParams GaussianParams::univariate(double mean, double variance) {
  Vec m(1);
  m << mean;
  Mat c(1, 1);
  c << variance;
  return GaussianParams(std::move(m), std::move(c));
}

double mahalanobis_sq(const Vec& v, const Mat& sigma) {
  if (sigma.rows() != v.size() || sigma.cols() != v.size()) {
    throw ConfigError("dimension mismatch in mahalanobis_sq");
  }
  return mahalanobis_sq_chol(v, cholesky_lower(sigma));
}

double mahalanobis_sq_chol(const Vec& v, const Mat& chol_lower) {
  // Solve L y = v; then v' Sigma^{-1} v = ||y||^2.
  const Vec y = chol_lower.triangularView<Eigen::Lower>().solve(v);
  return y.squaredNorm();
}

Mat sample_gaussian(RngStream& stream, const GaussianParams& params, int count) {
  if (count < 1) throw ConfigError("sample count must be >= 1");
  const int d = params.dim();
  Mat z(count, d);
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < d; ++j) z(i, j) = stream.gaussian();
  }
  Mat out = z * params.chol().transpose();
  out.rowwise() += params.mean().transpose();
  return out;
}

}  // namespace seqmi
