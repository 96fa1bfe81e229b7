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

#ifndef SEQMI_MEAN_MECHANISM_HPP_
#define SEQMI_MEAN_MECHANISM_HPP_

#include <iosfwd>
#include <vector>

#include "seqmi/gaussian.hpp"
#include "seqmi/insertion.hpp"
#include "seqmi/rng.hpp"

namespace seqmi {

// Per-step data distributions for T batches. A stationary schedule repeats a
// single distribution T times.
class DistributionSchedule {
 public:
  explicit DistributionSchedule(std::vector<GaussianParams> steps);
  static DistributionSchedule stationary(const GaussianParams& params, int steps);

  int steps() const { return static_cast<int>(steps_.size()); }
  int dim() const { return steps_.front().dim(); }
  // 1-based step index.
  const GaussianParams& at(int t) const { return steps_.at(t - 1); }

 private:
  std::vector<GaussianParams> steps_;
};

// The released sequence of cumulative empirical means, one row per step.
struct MeanTrace {
  Mat values;  // steps x dim, row t-1 holds the step-t output
  int batch_size = 0;

  int steps() const { return static_cast<int>(values.rows()); }
  int dim() const { return static_cast<int>(values.cols()); }
};

// Simulates the per-batch sample means (steps x dim). Batch t draws from the
// substream stream.child(t), so replaying a batch is independent of every
// other batch's parameters. Under b = 1 the target replaces entry
// replaced_index of batch tau before averaging.
Mat simulate_batch_means(const DistributionSchedule& schedule, int n,
                         const InsertionSpec& insertion, const RngStream& stream);

// Builds the cumulative-mean trace from batch means via
// muhat_t = (1 - 1/t) muhat_{t-1} + (1/t) xbar_t, with muhat_0 = 0.
MeanTrace trace_from_batch_means(const Mat& batch_means, int n);

// Runs the full mechanism: sample, insert, accumulate.
MeanTrace run_mean_mechanism(const DistributionSchedule& schedule, int n,
                             const InsertionSpec& insertion, const RngStream& stream);

// Recovers the batch mean at step t from consecutive outputs:
// xbar_t = t muhat_t - (t-1) muhat_{t-1}, with the convention muhat_0 = 0.
Vec recover_batch_mean(const MeanTrace& trace, int t);

// CSV with header "t,dim_0,...,dim_{d-1}".
void write_trace_csv(const MeanTrace& trace, std::ostream& os);

}  // namespace seqmi

#endif  // SEQMI_MEAN_MECHANISM_HPP_
