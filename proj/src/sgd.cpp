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

#include "seqmi/sgd.hpp"

#include <cmath>
#include <ostream>

#include "seqmi/csv.hpp"
#include "seqmi/errors.hpp"

namespace seqmi {
namespace {

constexpr std::uint64_t kNoiseLabel = 0x8000000000000000ULL;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

LinRegProblem::LinRegProblem(Vec theta_star, Mat sigma_x, double sigma_eps2)
    : theta_star_(std::move(theta_star)),
      sigma_x_(std::move(sigma_x)),
      sigma_eps2_(sigma_eps2) {
  if (theta_star_.size() < 1) throw ConfigError("parameter dimension must be >= 1");
  if (sigma_x_.rows() != theta_star_.size() || sigma_x_.cols() != theta_star_.size()) {
    throw ConfigError("covariate covariance shape mismatch");
  }
  if (!(sigma_eps2_ > 0.0)) throw ConfigError("noise variance must be positive");
  chol_x_ = cholesky_lower(sigma_x_);
}

Vec LinRegProblem::make_point(const Vec& x, double y) const {
  Vec p(point_dim());
  p.head(param_dim()) = x;
  p(param_dim()) = y;
  return p;
}

Vec LinRegProblem::sample_point(RngStream& stream) const {
  const int d = param_dim();
  Vec z(d);
  for (int j = 0; j < d; ++j) z(j) = stream.gaussian();
  const Vec x = chol_x_ * z;
  const double y = theta_star_.dot(x) + std::sqrt(sigma_eps2_) * stream.gaussian();
  return make_point(x, y);
}

Vec LinRegProblem::gradient(const Vec& theta, const Vec& point) const {
  const auto x = point.head(param_dim());
  const double residual = theta.dot(x) - point(param_dim());
  return residual * x;
}

double LinRegProblem::loss(const Vec& theta, const Vec& point) const {
  const auto x = point.head(param_dim());
  const double residual = point(param_dim()) - theta.dot(x);
  return 0.5 * residual * residual;
}

std::optional<GradientStats> LinRegProblem::exact_grad_stats(const Vec& theta) const {
  return linreg_grad_stats(theta, *this);
}

LogRegProblem::LogRegProblem(Vec theta_gen, Mat sigma_x)
    : theta_gen_(std::move(theta_gen)), sigma_x_(std::move(sigma_x)) {
  if (theta_gen_.size() < 1) throw ConfigError("parameter dimension must be >= 1");
  if (sigma_x_.rows() != theta_gen_.size() || sigma_x_.cols() != theta_gen_.size()) {
    throw ConfigError("covariate covariance shape mismatch");
  }
  chol_x_ = cholesky_lower(sigma_x_);
}

Vec LogRegProblem::sample_point(RngStream& stream) const {
  const int d = param_dim();
  Vec z(d);
  for (int j = 0; j < d; ++j) z(j) = stream.gaussian();
  const Vec x = chol_x_ * z;
  const double p = sigmoid(theta_gen_.dot(x));
  const double y = stream.uniform() < p ? 1.0 : 0.0;
  Vec point(d + 1);
  point.head(d) = x;
  point(d) = y;
  return point;
}

Vec LogRegProblem::gradient(const Vec& theta, const Vec& point) const {
  const auto x = point.head(param_dim());
  const double s = sigmoid(theta.dot(x));
  return (s - point(param_dim())) * x;
}

double LogRegProblem::loss(const Vec& theta, const Vec& point) const {
  const auto x = point.head(param_dim());
  const double z = theta.dot(x);
  const double y = point(param_dim());
  // Numerically stable cross entropy: log(1 + e^z) - y z.
  const double softplus = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
  return softplus - y * z;
}

MeanQuadProblem::MeanQuadProblem(GaussianParams data) : data_(std::move(data)) {}

Vec MeanQuadProblem::sample_point(RngStream& stream) const {
  return sample_gaussian(stream, data_, 1).row(0).transpose();
}

Vec MeanQuadProblem::gradient(const Vec& theta, const Vec& point) const {
  return theta - point;
}

double MeanQuadProblem::loss(const Vec& theta, const Vec& point) const {
  return 0.5 * (theta - point).squaredNorm();
}

std::optional<GradientStats> MeanQuadProblem::exact_grad_stats(const Vec& theta) const {
  GradientStats stats;
  stats.mean = theta - data_.mean();
  stats.cov = data_.covariance();
  stats.provenance = GradientStats::Provenance::kExact;
  return stats;
}

SgdConfig SgdConfig::constant(int steps, int batch_size, double eta, Vec theta0) {
  SgdConfig c;
  c.steps = steps;
  c.batch_sizes.assign(steps, batch_size);
  c.learning_rates.assign(steps, eta);
  c.theta0 = std::move(theta0);
  return c;
}

namespace {

void validate_sgd_config(const Problem& problem, const SgdConfig& config) {
  if (config.steps < 1) throw ConfigError("step count must be >= 1");
  if (static_cast<int>(config.batch_sizes.size()) != config.steps ||
      static_cast<int>(config.learning_rates.size()) != config.steps) {
    throw ConfigError("per-step schedule length mismatch");
  }
  for (int n : config.batch_sizes) {
    if (n < 2) throw ConfigError("batch size must be >= 2");
  }
  for (double eta : config.learning_rates) {
    if (!(eta > 0.0)) throw ConfigError("learning rate must be positive");
  }
  if (!(config.clip > 0.0)) throw ConfigError("clip threshold must be positive");
  if (config.noise_multiplier < 0.0) {
    throw ConfigError("noise multiplier must be nonnegative");
  }
  if (config.theta0.size() != problem.param_dim()) {
    throw ConfigError("theta0 dimension mismatch");
  }
}

ParamTrace run_sgd_impl(const Problem& problem, const SgdConfig& config,
                        const InsertionSpec& insertion, const RngStream& stream) {
  validate_sgd_config(problem, config);
  if (insertion.b == 1 && (insertion.tau < 1 || insertion.tau > config.steps)) {
    throw ConfigError("insertion time out of range");
  }
  const int insertion_batch =
      insertion.b == 1 ? config.batch_sizes[insertion.tau - 1] : config.batch_sizes[0];
  validate_insertion(insertion, config.steps, insertion_batch, problem.point_dim());

  const int d = problem.param_dim();
  ParamTrace trace;
  trace.thetas.resize(config.steps + 1, d);
  trace.thetas.row(0) = config.theta0.transpose();
  trace.learning_rates = config.learning_rates;
  trace.batch_sizes = config.batch_sizes;
  trace.clip_events.assign(config.steps, 0);

  Vec theta = config.theta0;
  for (int t = 1; t <= config.steps; ++t) {
    const int n = config.batch_sizes[t - 1];
    const double eta = config.learning_rates[t - 1];
    RngStream batch_stream = stream.child(static_cast<std::uint64_t>(t));

    Vec batch_grad = Vec::Zero(d);
    for (int i = 1; i <= n; ++i) {
      Vec point;
      if (insertion.b == 1 && t == insertion.tau && i == insertion.replaced_index) {
        problem.sample_point(batch_stream);  // keep the stream aligned
        point = insertion.target;
      } else {
        point = problem.sample_point(batch_stream);
      }
      Vec grad = problem.gradient(theta, point);
      if (std::isfinite(config.clip)) {
        const double norm = grad.norm();
        if (norm > config.clip) {
          grad *= config.clip / norm;
          ++trace.clip_events[t - 1];
        }
      }
      batch_grad += grad;
    }
    batch_grad /= static_cast<double>(n);

    if (config.noise_multiplier > 0.0) {
      if (!std::isfinite(config.clip)) {
        throw ConfigError("noisy training requires a finite clip threshold");
      }
      RngStream noise_stream = stream.child(kNoiseLabel | static_cast<std::uint64_t>(t));
      const double scale = config.noise_multiplier * config.clip / static_cast<double>(n);
      for (int j = 0; j < d; ++j) batch_grad(j) += scale * noise_stream.gaussian();
    }

    theta -= eta * batch_grad;
    trace.thetas.row(t) = theta.transpose();
  }
  return trace;
}

}  // namespace

ParamTrace run_sgd(const Problem& problem, const SgdConfig& config,
                   const InsertionSpec& insertion, const RngStream& stream) {
  return run_sgd_impl(problem, config, insertion, stream);
}

ParamTrace run_dpsgd(const Problem& problem, const SgdConfig& config,
                     const InsertionSpec& insertion, const RngStream& stream) {
  if (!std::isfinite(config.clip)) {
    throw ConfigError("dp-sgd requires a finite clip threshold");
  }
  if (!(config.noise_multiplier > 0.0)) {
    throw ConfigError("dp-sgd requires a positive noise multiplier");
  }
  return run_sgd_impl(problem, config, insertion, stream);
}

GradientStats linreg_grad_stats(const Vec& theta, const LinRegProblem& problem) {
  if (theta.size() != problem.param_dim()) throw ConfigError("theta dimension mismatch");
  const Vec delta = theta - problem.theta_star();
  const Vec sd = problem.sigma_x() * delta;
  GradientStats stats;
  stats.mean = sd;
  stats.cov = (problem.sigma_eps2() + delta.dot(sd)) * problem.sigma_x() +
              sd * sd.transpose();
  stats.provenance = GradientStats::Provenance::kExact;
  return stats;
}

GradientStats estimate_grad_stats(const Problem& problem, const Vec& theta,
                                  const Mat& reference_points, double ridge,
                                  double clip) {
  const int m = static_cast<int>(reference_points.rows());
  if (m < 2) throw ConfigError("need at least two reference samples");
  if (reference_points.cols() != problem.point_dim()) {
    throw ConfigError("reference point dimension mismatch");
  }
  const int d = problem.param_dim();
  Mat grads(m, d);
  for (int i = 0; i < m; ++i) {
    Vec g = problem.gradient(theta, reference_points.row(i).transpose());
    if (std::isfinite(clip)) {
      const double norm = g.norm();
      if (norm > clip) g *= clip / norm;
    }
    grads.row(i) = g.transpose();
  }
  GradientStats stats;
  stats.mean = grads.colwise().mean().transpose();
  Mat centered = grads.rowwise() - stats.mean.transpose();
  stats.cov = centered.transpose() * centered / static_cast<double>(m - 1);
  if (ridge < 0.0) {
    ridge = 1e-6 * stats.cov.trace() / static_cast<double>(d);
  }
  stats.cov += ridge * Mat::Identity(d, d);
  stats.provenance = GradientStats::Provenance::kEstimated;
  stats.ridge = ridge;
  Eigen::LLT<Mat> llt(stats.cov);
  if (llt.info() != Eigen::Success) {
    throw NumericError("estimated covariance not positive definite; increase ridge");
  }
  return stats;
}

double detectability(const Vec& theta, const Problem& problem, const Vec& target) {
  const auto stats = problem.exact_grad_stats(theta);
  if (!stats) throw ConfigError("problem has no closed-form gradient statistics");
  const Vec grad_dev = problem.gradient(theta, target) - stats->mean;
  return mahalanobis_sq(grad_dev, stats->cov);
}

std::pair<int, double> select_target(const Mat& pool, const Vec& theta,
                                     const GradientStats& stats,
                                     const Problem& problem) {
  if (pool.rows() < 1) throw ConfigError("candidate pool is empty");
  const Mat lower = cholesky_lower(stats.cov);
  int best = 0;
  double best_score = -1.0;
  for (int i = 0; i < pool.rows(); ++i) {
    const Vec grad_dev = problem.gradient(theta, pool.row(i).transpose()) - stats.mean;
    const double score = mahalanobis_sq_chol(grad_dev, lower);
    if (score > best_score) {
      best = i;
      best_score = score;
    }
  }
  return {best, best_score};
}

void write_param_trace_csv(const ParamTrace& trace, std::ostream& os) {
  os << "t";
  for (int j = 0; j < trace.dim(); ++j) os << ",theta_" << j;
  os << "\n";
  for (int t = 0; t <= trace.steps(); ++t) {
    os << t;
    for (int j = 0; j < trace.dim(); ++j) {
      os << ',' << csv_double(trace.thetas(t, j));
    }
    os << "\n";
  }
}

}  // namespace seqmi
