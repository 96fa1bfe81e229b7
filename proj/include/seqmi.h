/*
 * Copyright 2026 The seqmi Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C API of the seqmi library: sequential membership-inference test
 * statistics, their closed-form error theory, Monte-Carlo membership games
 * over the cumulative-mean and (DP-)SGD mechanisms, and DKW-based privacy
 * lower bounds.
 *
 * Conventions:
 *  - Functions returning seqmi_status yield SEQMI_OK (0) on success; on
 *    failure they return a nonzero code and seqmi_last_error() describes the
 *    problem for the calling thread.
 *  - Matrices are passed as row-major double arrays.
 *  - Opaque handles must be released with their _free function.
 */

#ifndef SEQMI_H_
#define SEQMI_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef int32_t seqmi_status;
#define SEQMI_OK 0
#define SEQMI_ERR_ARG 1      /* invalid argument or configuration */
#define SEQMI_ERR_NUMERIC 2  /* numerical failure */
#define SEQMI_ERR_IO 3       /* filesystem failure */

const char* seqmi_version(void);

/* Message for the last failure on the calling thread; empty when none. */
const char* seqmi_last_error(void);

/* ------------------------------------------------------------------------
 * Numeric kernel
 */

double seqmi_std_normal_cdf(double x);

seqmi_status seqmi_log_sum_exp(const double* values, int64_t len, double* out);

seqmi_status seqmi_noncentral_chi2_cdf(double x, int32_t dof, double lambda,
                                       double* out);

/* v' Sigma^{-1} v via Cholesky; cov is d x d row-major. */
seqmi_status seqmi_mahalanobis_sq(const double* v, const double* cov, int32_t d,
                                  double* out);

/* ------------------------------------------------------------------------
 * Log likelihood-ratio statistics
 */

/* Batch-mean statistic for data N(mu, cov), batch size n, target z. */
seqmi_status seqmi_loglr_batch_mean(const double* batch_mean, const double* mu,
                                    const double* cov, int32_t d, int32_t n,
                                    const double* target, double* out);

seqmi_status seqmi_loglr_uniform_tau(const double* loglrs, int64_t len, double* out);
seqmi_status seqmi_loglr_max_tau(const double* loglrs, int64_t len, double* out);

/* Final-observation statistic: effective batch size n*T. */
seqmi_status seqmi_loglr_final_obs(const double* final_mean, const double* mu,
                                   const double* cov, int32_t d, int32_t n, int32_t T,
                                   const double* target, double* out);

/* Gradient-descent statistic for one transition. grad_cov is d x d. */
seqmi_status seqmi_loglr_sgd(const double* theta_prev, const double* theta_next,
                             int32_t d, double eta, int32_t n,
                             const double* grad_mean, const double* grad_cov,
                             const double* target_grad, double* out);

/* Loss-trajectory heuristics over losses[0..len-1]. */
seqmi_status seqmi_baseline_statistics(const double* losses, int64_t len,
                                       double* delta_diff, double* delta_ratio,
                                       double* backfront_diff,
                                       double* backfront_ratio);

/* ------------------------------------------------------------------------
 * Closed-form error theory (m_star = squared Mahalanobis distance)
 */

seqmi_status seqmi_gamma_max(int32_t n, double m_star, double* out);
seqmi_status seqmi_alpha_lr(double gamma, int32_t n, double m_star, double* out);
seqmi_status seqmi_beta_lr(double gamma, int32_t n, double m_star, double* out);
seqmi_status seqmi_alpha_final_obs(double gamma, int32_t n, int32_t T, double m_star,
                                   double* out);
seqmi_status seqmi_beta_final_obs(double gamma, int32_t n, int32_t T, double m_star,
                                  double* out);
seqmi_status seqmi_alpha_max_tau(double gamma, int32_t n, double m_star, int32_t T,
                                 double* out);
seqmi_status seqmi_beta_max_tau(double gamma, int32_t n, double m_star, int32_t T,
                                double* out);
seqmi_status seqmi_threshold_for_alpha_lr(double level, int32_t n, double m_star,
                                          double* out);
seqmi_status seqmi_threshold_for_alpha_max_tau(double level, int32_t n, double m_star,
                                               int32_t T, double* out);
seqmi_status seqmi_alpha_lr_mv_diag(double gamma, int32_t n, int32_t d, double m_star,
                                    double* out);

/* ------------------------------------------------------------------------
 * Cumulative-mean mechanism traces
 */

typedef struct seqmi_trace seqmi_trace;

/* Runs the mechanism for T steps of batch size n on data N(mu, cov).
 * insert != 0 places target at entry replace_index (1-based) of batch tau. */
seqmi_status seqmi_run_mean_mechanism(const double* mu, const double* cov, int32_t d,
                                      int32_t T, int32_t n, int32_t insert,
                                      int32_t tau, const double* target,
                                      int32_t replace_index, uint64_t seed,
                                      uint64_t stream_id, seqmi_trace** out);

int32_t seqmi_trace_steps(const seqmi_trace* trace);
int32_t seqmi_trace_dim(const seqmi_trace* trace);

/* Copies the T x d value matrix (row-major). */
seqmi_status seqmi_trace_values(const seqmi_trace* trace, double* buffer);

/* xbar_t = t muhat_t - (t-1) muhat_{t-1}; buffer receives d values. */
seqmi_status seqmi_trace_recover_batch_mean(const seqmi_trace* trace, int32_t t,
                                            double* buffer);

void seqmi_trace_free(seqmi_trace* trace);

/* ------------------------------------------------------------------------
 * Membership games and audits
 */

typedef struct seqmi_records seqmi_records;

/* Membership game over the cumulative-mean mechanism with the four
 * batch-mean adversaries (lr_tau, lr_unif, lr_max, final_obs).
 * tau_mode: 0 = point mass at tau_point, 1 = uniform over {1..T}. */
seqmi_status seqmi_run_mean_game(const double* mu, const double* cov, int32_t d,
                                 int32_t T, int32_t n, const double* target,
                                 double nu_b, int32_t tau_mode, int32_t tau_point,
                                 int64_t rounds, uint64_t seed, int32_t threads,
                                 seqmi_records** out);

int64_t seqmi_records_rounds(const seqmi_records* records);

/* Copies the membership bits into a caller buffer of length rounds. */
seqmi_status seqmi_records_memberships(const seqmi_records* records, int32_t* buffer);

/* Copies a statistic column; name as in the records CSV header. */
seqmi_status seqmi_records_stat(const seqmi_records* records, const char* name,
                                double* buffer);

seqmi_status seqmi_records_auc(const seqmi_records* records, const char* name,
                               double* out);

seqmi_status seqmi_records_tpr_at_fpr(const seqmi_records* records, const char* name,
                                      double fpr_level, double* out);

/* DKW-backed privacy lower bound from the recorded statistics. */
seqmi_status seqmi_records_epsilon_lower_bound(const seqmi_records* records,
                                               const char* name, double delta,
                                               double xi, double* epsilon_lb,
                                               double* alpha_ucb, double* beta_ucb);

void seqmi_records_free(seqmi_records* records);

/* ------------------------------------------------------------------------
 * Gaussian-mechanism accountant
 */

/* Smallest eps such that the Gaussian mechanism with this noise multiplier is
 * (eps, delta)-DP. */
seqmi_status seqmi_gaussian_mechanism_epsilon(double noise_multiplier, double delta,
                                              double* out);

/* T-fold composition, treated as one Gaussian mechanism with multiplier
 * sigma / sqrt(T). Infinite when sigma == 0. */
seqmi_status seqmi_composed_gaussian_epsilon(double noise_multiplier, int32_t steps,
                                             double delta, double* out);

/* ------------------------------------------------------------------------
 * Experiments
 */

/* Runs one experiment kind (mean-power, roc, uniform-tau, multivariate,
 * sgd-sim, dpsgd-audit, lr-trace, tau-sweep) from a key-value configuration
 * text (INI-style sections). Outputs land under <out>/<kind>/<label>/. */
seqmi_status seqmi_run_experiment(const char* kind, const char* config_text);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SEQMI_H_ */
