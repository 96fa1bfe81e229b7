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

#include <ostream>

#include "seqmi/csv.hpp"
#include "seqmi/errors.hpp"

namespace seqmi {

DistributionSchedule::DistributionSchedule(std::vector<GaussianParams> steps)
    : steps_(std::move(steps)) {
  if (steps_.empty()) throw ConfigError("schedule must have at least one step");
  const int d = steps_.front().dim();
  for (const auto& p : steps_) {
    if (p.dim() != d) throw ConfigError("schedule steps must share one dimension");
    if (p.degenerate()) throw ConfigError("schedule covariance must be positive definite");
  }
}

DistributionSchedule DistributionSchedule::stationary(const GaussianParams& params,
                                                      int steps) {
  if (steps < 1) throw ConfigError("schedule must have at least one step");
  return DistributionSchedule(std::vector<GaussianParams>(steps, params));
}

void validate_insertion(const InsertionSpec& spec, int T, int n, int d) {
  if (spec.b != 0 && spec.b != 1) throw ConfigError("membership bit must be 0 or 1");
  if (spec.b == 1) {
    if (spec.tau < 1 || spec.tau > T) throw ConfigError("insertion time out of range");
    if (spec.replaced_index < 1 || spec.replaced_index > n) {
      throw ConfigError("replaced index out of range");
    }
    if (spec.target.size() != d) throw ConfigError("target dimension mismatch");
  }
}

Mat simulate_batch_means(const DistributionSchedule& schedule, int n,
                         const InsertionSpec& insertion, const RngStream& stream) {
  if (n < 2) throw ConfigError("batch size must be >= 2");
  const int T = schedule.steps();
  const int d = schedule.dim();
  validate_insertion(insertion, T, n, d);

  Mat means(T, d);
  for (int t = 1; t <= T; ++t) {
    RngStream batch_stream = stream.child(static_cast<std::uint64_t>(t));
    Mat batch = sample_gaussian(batch_stream, schedule.at(t), n);
    if (insertion.b == 1 && t == insertion.tau) {
      batch.row(insertion.replaced_index - 1) = insertion.target.transpose();
    }
    means.row(t - 1) = batch.colwise().mean();
  }
  return means;
}

MeanTrace trace_from_batch_means(const Mat& batch_means, int n) {
  if (n < 2) throw ConfigError("batch size must be >= 2");
  if (batch_means.rows() < 1) throw ConfigError("need at least one batch mean");
  MeanTrace trace;
  trace.batch_size = n;
  trace.values.resize(batch_means.rows(), batch_means.cols());
  Vec cumulative = Vec::Zero(batch_means.cols());
  for (int t = 1; t <= batch_means.rows(); ++t) {
    const double w = 1.0 / static_cast<double>(t);
    cumulative = (1.0 - w) * cumulative + w * batch_means.row(t - 1).transpose();
    trace.values.row(t - 1) = cumulative.transpose();
  }
  return trace;
}

MeanTrace run_mean_mechanism(const DistributionSchedule& schedule, int n,
                             const InsertionSpec& insertion, const RngStream& stream) {
  return trace_from_batch_means(simulate_batch_means(schedule, n, insertion, stream), n);
}

Vec recover_batch_mean(const MeanTrace& trace, int t) {
  if (t < 1 || t > trace.steps()) throw ConfigError("step index out of range");
  const Vec current = trace.values.row(t - 1).transpose();
  if (t == 1) return current;
  const Vec previous = trace.values.row(t - 2).transpose();
  return static_cast<double>(t) * current - static_cast<double>(t - 1) * previous;
}

void write_trace_csv(const MeanTrace& trace, std::ostream& os) {
  os << "t";
  for (int j = 0; j < trace.dim(); ++j) os << ",dim_" << j;
  os << "\n";
  for (int t = 1; t <= trace.steps(); ++t) {
    os << t;
    for (int j = 0; j < trace.dim(); ++j) {
      os << ',' << csv_double(trace.values(t - 1, j));
    }
    os << "\n";
  }
}

}  // namespace seqmi
