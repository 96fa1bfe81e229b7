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

#ifndef SEQMI_SGD_HPP_
#define SEQMI_SGD_HPP_

#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "seqmi/gaussian.hpp"
#include "seqmi/insertion.hpp"
#include "seqmi/rng.hpp"
#include "seqmi/statistics.hpp"

namespace seqmi {

// A supervised problem the trainers operate on. Data points are flat vectors
// with a problem-defined layout (features first, label last where present).
class Problem {
 public:
  virtual ~Problem() = default;
  virtual int param_dim() const = 0;
  virtual int point_dim() const = 0;
  virtual Vec sample_point(RngStream& stream) const = 0;
  virtual Vec gradient(const Vec& theta, const Vec& point) const = 0;
  virtual double loss(const Vec& theta, const Vec& point) const = 0;
  // Closed-form per-sample gradient mean/covariance where one exists.
  virtual std::optional<GradientStats> exact_grad_stats(const Vec& theta) const {
    return std::nullopt;
  }
};

// Linear regression with squared loss 0.5 (y - theta'x)^2, covariates
// x ~ N(0, Sigma_x), noise eps ~ N(0, sigma_eps2). Point layout: [x..., y].
class LinRegProblem : public Problem {
 public:
  LinRegProblem(Vec theta_star, Mat sigma_x, double sigma_eps2);
  int param_dim() const override { return static_cast<int>(theta_star_.size()); }
  int point_dim() const override { return param_dim() + 1; }
  Vec sample_point(RngStream& stream) const override;
  Vec gradient(const Vec& theta, const Vec& point) const override;
  double loss(const Vec& theta, const Vec& point) const override;
  std::optional<GradientStats> exact_grad_stats(const Vec& theta) const override;

  const Vec& theta_star() const { return theta_star_; }
  const Mat& sigma_x() const { return sigma_x_; }
  double sigma_eps2() const { return sigma_eps2_; }
  // Builds a point from features and response.
  Vec make_point(const Vec& x, double y) const;

 private:
  Vec theta_star_;
  Mat sigma_x_;
  Mat chol_x_;
  double sigma_eps2_;
};

// Binary logistic regression with cross-entropy loss, covariates
// x ~ N(0, Sigma_x), labels y ~ Bernoulli(sigmoid(theta_gen'x)).
// Point layout: [x..., y]. No closed-form gradient statistics.
class LogRegProblem : public Problem {
 public:
  LogRegProblem(Vec theta_gen, Mat sigma_x);
  int param_dim() const override { return static_cast<int>(theta_gen_.size()); }
  int point_dim() const override { return param_dim() + 1; }
  Vec sample_point(RngStream& stream) const override;
  Vec gradient(const Vec& theta, const Vec& point) const override;
  double loss(const Vec& theta, const Vec& point) const override;

  const Vec& theta_gen() const { return theta_gen_; }

 private:
  Vec theta_gen_;
  Mat sigma_x_;
  Mat chol_x_;
};

// Quadratic location loss 0.5 ||theta - x||^2 on Gaussian data; with
// eta_t = 1/t this makes gradient descent reproduce the cumulative-mean
// recursion exactly.
class MeanQuadProblem : public Problem {
 public:
  explicit MeanQuadProblem(GaussianParams data);
  int param_dim() const override { return data_.dim(); }
  int point_dim() const override { return data_.dim(); }
  Vec sample_point(RngStream& stream) const override;
  Vec gradient(const Vec& theta, const Vec& point) const override;
  double loss(const Vec& theta, const Vec& point) const override;
  std::optional<GradientStats> exact_grad_stats(const Vec& theta) const override;

 private:
  GaussianParams data_;
};

constexpr double kNoClip = std::numeric_limits<double>::infinity();

struct SgdConfig {
  int steps = 0;
  std::vector<int> batch_sizes;       // length steps, each >= 2
  std::vector<double> learning_rates; // length steps, each > 0
  double clip = kNoClip;              // per-sample gradient norm bound
  double noise_multiplier = 0.0;      // sigma_DP; 0 = non-private
  Vec theta0;

  static SgdConfig constant(int steps, int batch_size, double eta, Vec theta0);
};

struct ParamTrace {
  Mat thetas;  // (steps+1) x d, row 0 = theta0
  std::vector<double> learning_rates;
  std::vector<int> batch_sizes;
  std::vector<int> clip_events;  // per step, samples whose gradient was rescaled
  int steps() const { return static_cast<int>(thetas.rows()) - 1; }
  int dim() const { return static_cast<int>(thetas.cols()); }
};

// Plain mini-batch gradient descent. Batch t draws from stream.child(t); the
// insertion replaces entry replaced_index of batch tau.
ParamTrace run_sgd(const Problem& problem, const SgdConfig& config,
                   const InsertionSpec& insertion, const RngStream& stream);

// DP-SGD: per-sample gradients are clipped to norm <= clip before averaging,
// then N(0, (noise_multiplier * clip / n_t)^2 I) is added to the batch
// gradient. Noise draws come from a dedicated substream, so a run with
// noise_multiplier = 0 differs from a noisy run exactly by the noise terms.
ParamTrace run_dpsgd(const Problem& problem, const SgdConfig& config,
                     const InsertionSpec& insertion, const RngStream& stream);

// Exact gradient statistics for linear regression:
// mu_g = Sigma_x (theta - theta*),
// Sigma_g = (sigma_eps2 + delta' Sigma_x delta) Sigma_x
//           + Sigma_x delta delta' Sigma_x.
GradientStats linreg_grad_stats(const Vec& theta, const LinRegProblem& problem);

// Sample mean and unbiased covariance of per-sample gradients over the rows
// of reference_points, plus ridge * I. ridge < 0 selects the scale-aware
// default 1e-6 * trace(cov)/d. A finite clip applies the same per-sample
// clipping the DP-SGD trainer uses, keeping attack and mechanism consistent.
GradientStats estimate_grad_stats(const Problem& problem, const Vec& theta,
                                  const Mat& reference_points, double ridge,
                                  double clip = kNoClip);

// Squared Mahalanobis distance of the target's gradient from the population
// gradient mean at theta. Requires closed-form statistics.
double detectability(const Vec& theta, const Problem& problem, const Vec& target);

// Index (0-based) and score of the pool row whose gradient deviates most from
// stats.mean in the stats.cov metric. Ties break to the lowest index.
std::pair<int, double> select_target(const Mat& pool, const Vec& theta,
                                     const GradientStats& stats,
                                     const Problem& problem);

// CSV with header "t,theta_0,...,theta_{d-1}".
void write_param_trace_csv(const ParamTrace& trace, std::ostream& os);

}  // namespace seqmi

#endif  // SEQMI_SGD_HPP_
