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

#ifndef SEQMI_SPECIAL_HPP_
#define SEQMI_SPECIAL_HPP_

#include <span>

namespace seqmi {

// Standard normal CDF. Absolute error below 1e-12 on finite inputs.
double std_normal_cdf(double x);

// log(sum_i exp(v[i])) with max subtraction. Throws ConfigError on an empty
// list. Guaranteed to lie in [max(v), max(v) + log(len)] in floating point.
double log_sum_exp(std::span<const double> values);

// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double regularized_gamma_p(double a, double x);

// Central chi-squared CDF with dof degrees of freedom.
double chi2_cdf(double x, int dof);

// Non-central chi-squared CDF with dof degrees of freedom and non-centrality
// lambda >= 0, evaluated via the Poisson mixture of central CDFs. The series
// is truncated once the unaccumulated Poisson mass drops below 1e-14, so the
// absolute truncation error is below 1e-14. Negative x returns 0; negative
// lambda throws.
double noncentral_chi2_cdf(double x, int dof, double lambda);

}  // namespace seqmi

#endif  // SEQMI_SPECIAL_HPP_
