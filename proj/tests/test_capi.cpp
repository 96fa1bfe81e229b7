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

// Exercises the shared library through its C surface only.

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "seqmi.h"

namespace {

TEST_SUITE_BEGIN("capi");

TEST_CASE("version and error reporting") {
  CHECK(std::strlen(seqmi_version()) > 0);
  double out = 0.0;
  CHECK(seqmi_log_sum_exp(nullptr, 3, &out) == SEQMI_ERR_ARG);
  CHECK(std::strlen(seqmi_last_error()) > 0);
  const double values[] = {0.0, std::log(3.0)};
  CHECK(seqmi_log_sum_exp(values, 2, &out) == SEQMI_OK);
  CHECK(out == doctest::Approx(std::log(4.0)));
  CHECK(std::strlen(seqmi_last_error()) == 0);
}

TEST_CASE("scalar kernels") {
  CHECK(seqmi_std_normal_cdf(0.0) == doctest::Approx(0.5));
  double out = 0.0;
  CHECK(seqmi_noncentral_chi2_cdf(1.0, 1, 0.0, &out) == SEQMI_OK);
  CHECK(out == doctest::Approx(2.0 * seqmi_std_normal_cdf(1.0) - 1.0).epsilon(1e-12));
  CHECK(seqmi_noncentral_chi2_cdf(1.0, 1, -1.0, &out) == SEQMI_ERR_ARG);

  const double cov[] = {2.0, 0.0, 0.0, 1.0};
  const double v[] = {2.0, 1.0};
  CHECK(seqmi_mahalanobis_sq(v, cov, 2, &out) == SEQMI_OK);
  CHECK(out == doctest::Approx(3.0));
  const double bad_cov[] = {1.0, 2.0, 2.0, 1.0};
  CHECK(seqmi_mahalanobis_sq(v, bad_cov, 2, &out) == SEQMI_ERR_NUMERIC);
}

TEST_CASE("statistics and error theory") {
  const double mu = 0.0, cov = 1.0, target = 3.0;
  double stat = 0.0;
  const double mean = 0.3;
  CHECK(seqmi_loglr_batch_mean(&mean, &mu, &cov, 1, 10, &target, &stat) == SEQMI_OK);

  double gamma_max = 0.0;
  CHECK(seqmi_gamma_max(10, 9.0, &gamma_max) == SEQMI_OK);
  CHECK(gamma_max == doctest::Approx(4.552680257828913));

  double alpha = 0.0, beta = 0.0;
  CHECK(seqmi_alpha_lr(0.0, 10, 9.0, &alpha) == SEQMI_OK);
  CHECK(seqmi_beta_lr(0.0, 10, 9.0, &beta) == SEQMI_OK);
  CHECK(alpha > 0.0);
  CHECK(beta > 0.0);

  double threshold = 0.0;
  CHECK(seqmi_threshold_for_alpha_lr(0.05, 10, 9.0, &threshold) == SEQMI_OK);
  double check = 0.0;
  CHECK(seqmi_alpha_lr(threshold, 10, 9.0, &check) == SEQMI_OK);
  CHECK(check == doctest::Approx(0.05).epsilon(1e-6));

  const double losses[] = {8.0, 4.0, 2.0, 1.0};
  double dd, dr, bd, br;
  CHECK(seqmi_baseline_statistics(losses, 4, &dd, &dr, &bd, &br) == SEQMI_OK);
  CHECK(dr == doctest::Approx(2.0));
  CHECK(br == doctest::Approx(8.0));
}

TEST_CASE("trace handles") {
  const double mu = 0.0, cov = 1.0, target = 3.0;
  seqmi_trace* trace = nullptr;
  REQUIRE(seqmi_run_mean_mechanism(&mu, &cov, 1, 10, 10, 1, 5, &target, 2, 42, 0,
                                   &trace) == SEQMI_OK);
  REQUIRE(trace != nullptr);
  CHECK(seqmi_trace_steps(trace) == 10);
  CHECK(seqmi_trace_dim(trace) == 1);
  std::vector<double> values(10);
  CHECK(seqmi_trace_values(trace, values.data()) == SEQMI_OK);

  // The recovered batch mean inverts the cumulative-mean recursion.
  double recovered = 0.0;
  CHECK(seqmi_trace_recover_batch_mean(trace, 5, &recovered) == SEQMI_OK);
  CHECK(recovered ==
        doctest::Approx(5.0 * values[4] - 4.0 * values[3]).epsilon(1e-12));

  // Identical (seed, stream) reproduces the trace.
  seqmi_trace* again = nullptr;
  REQUIRE(seqmi_run_mean_mechanism(&mu, &cov, 1, 10, 10, 1, 5, &target, 2, 42, 0,
                                   &again) == SEQMI_OK);
  std::vector<double> values2(10);
  CHECK(seqmi_trace_values(again, values2.data()) == SEQMI_OK);
  CHECK(values == values2);

  CHECK(seqmi_trace_recover_batch_mean(trace, 11, &recovered) == SEQMI_ERR_ARG);
  seqmi_trace_free(trace);
  seqmi_trace_free(again);
}

TEST_CASE("game records handles") {
  const double mu = 0.0, cov = 1.0, target = 3.0;
  seqmi_records* records = nullptr;
  REQUIRE(seqmi_run_mean_game(&mu, &cov, 1, 10, 10, &target, 0.5, 0, 5, 4000, 7, 0,
                              &records) == SEQMI_OK);
  REQUIRE(records != nullptr);
  CHECK(seqmi_records_rounds(records) == 4000);

  std::vector<int32_t> memberships(4000);
  CHECK(seqmi_records_memberships(records, memberships.data()) == SEQMI_OK);

  std::vector<double> stats(4000);
  CHECK(seqmi_records_stat(records, "lr_tau", stats.data()) == SEQMI_OK);
  CHECK(seqmi_records_stat(records, "nope", stats.data()) == SEQMI_ERR_ARG);

  // Closed-form references at n=10, m*=9: AUC about 0.77, TPR@1% about 0.073.
  double auc = 0.0;
  CHECK(seqmi_records_auc(records, "lr_tau", &auc) == SEQMI_OK);
  CHECK(auc == doctest::Approx(0.77).epsilon(0.05));

  double tpr = 0.0;
  CHECK(seqmi_records_tpr_at_fpr(records, "lr_tau", 0.01, &tpr) == SEQMI_OK);
  CHECK(tpr == doctest::Approx(0.073).epsilon(0.5));

  double eps = 0.0, alpha_ucb = 0.0, beta_ucb = 0.0;
  CHECK(seqmi_records_epsilon_lower_bound(records, "lr_tau", 1e-4, 0.05, &eps,
                                          &alpha_ucb, &beta_ucb) == SEQMI_OK);
  CHECK(eps >= 0.0);
  CHECK(alpha_ucb > 0.0);
  seqmi_records_free(records);
}

TEST_CASE("accountant") {
  double eps = 0.0;
  CHECK(seqmi_composed_gaussian_epsilon(0.0, 10, 1e-4, &eps) == SEQMI_OK);
  CHECK(std::isinf(eps));
  CHECK(seqmi_gaussian_mechanism_epsilon(1.0, 1e-4, &eps) == SEQMI_OK);
  CHECK(eps > 0.0);
  CHECK(seqmi_gaussian_mechanism_epsilon(1.0, 2.0, &eps) == SEQMI_ERR_ARG);
}

TEST_CASE("experiment runner writes outputs") {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "seqmi_capi_experiment";
  std::filesystem::remove_all(dir);
  std::ostringstream config;
  config << "[experiment]\n"
         << "rounds = 500\n"
         << "seed = 3\n"
         << "out = " << dir.string() << "\n"
         << "[mean]\n"
         << "T = 4\n";
  CHECK(seqmi_run_experiment("lr-trace", config.str().c_str()) == SEQMI_OK);
  CHECK(std::filesystem::exists(dir / "lr-trace" / "default" / "lr_trace.csv"));
  CHECK(std::filesystem::exists(dir / "lr-trace" / "default" / "manifest.json"));

  CHECK(seqmi_run_experiment("nope", config.str().c_str()) == SEQMI_ERR_ARG);
  CHECK(seqmi_run_experiment("lr-trace", "[experiment]\nbogus = 1\n") ==
        SEQMI_ERR_ARG);
  std::filesystem::remove_all(dir);
}

TEST_SUITE_END();

}  // namespace
