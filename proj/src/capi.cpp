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

#include "seqmi.h"

#include <algorithm>
#include <filesystem>
#include <new>
#include <string>

#include "seqmi/audit.hpp"
#include "seqmi/config.hpp"
#include "seqmi/errors.hpp"
#include "seqmi/error_theory.hpp"
#include "seqmi/experiments.hpp"
#include "seqmi/game.hpp"
#include "seqmi/gaussian.hpp"
#include "seqmi/mean_mechanism.hpp"
#include "seqmi/special.hpp"
#include "seqmi/statistics.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

// Runs fn, translating exceptions into status codes.
template <typename Fn>
seqmi_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return SEQMI_OK;
  } catch (const seqmi::ConfigError& e) {
    set_error(e.what());
    return SEQMI_ERR_ARG;
  } catch (const seqmi::NumericError& e) {
    set_error(e.what());
    return SEQMI_ERR_NUMERIC;
  } catch (const std::filesystem::filesystem_error& e) {
    set_error(e.what());
    return SEQMI_ERR_IO;
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return SEQMI_ERR_NUMERIC;
  } catch (const std::exception& e) {
    set_error(e.what());
    return SEQMI_ERR_NUMERIC;
  }
}

seqmi_status require(bool ok, const char* message) {
  if (ok) return SEQMI_OK;
  set_error(message);
  return SEQMI_ERR_ARG;
}

seqmi::Vec to_vec(const double* data, int d) {
  return Eigen::Map<const seqmi::Vec>(data, d);
}

seqmi::Mat to_mat(const double* data, int rows, int cols) {
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                        Eigen::RowMajor>>(data, rows, cols);
}

}  // namespace

struct seqmi_trace {
  seqmi::MeanTrace trace;
};

struct seqmi_records {
  seqmi::GameRecords records;
};

extern "C" {

const char* seqmi_version(void) { return "0.1.0"; }

const char* seqmi_last_error(void) { return g_last_error.c_str(); }

double seqmi_std_normal_cdf(double x) { return seqmi::std_normal_cdf(x); }

seqmi_status seqmi_log_sum_exp(const double* values, int64_t len, double* out) {
  if (require(values && out && len >= 0, "null argument") != SEQMI_OK) return SEQMI_ERR_ARG;
  return guarded([&] {
    *out = seqmi::log_sum_exp({values, static_cast<std::size_t>(len)});
  });
}

seqmi_status seqmi_noncentral_chi2_cdf(double x, int32_t dof, double lambda,
                                       double* out) {
  if (require(out != nullptr, "null argument") != SEQMI_OK) return SEQMI_ERR_ARG;
  return guarded([&] { *out = seqmi::noncentral_chi2_cdf(x, dof, lambda); });
}

seqmi_status seqmi_mahalanobis_sq(const double* v, const double* cov, int32_t d,
                                  double* out) {
  if (require(v && cov && out && d >= 1, "null or empty argument") != SEQMI_OK) {
    return SEQMI_ERR_ARG;
  }
  return guarded([&] { *out = seqmi::mahalanobis_sq(to_vec(v, d), to_mat(cov, d, d)); });
}

seqmi_status seqmi_loglr_batch_mean(const double* batch_mean, const double* mu,
                                    const double* cov, int32_t d, int32_t n,
                                    const double* target, double* out) {
  if (require(batch_mean && mu && cov && target && out && d >= 1,
              "null or empty argument") != SEQMI_OK) {
    return SEQMI_ERR_ARG;
  }
  return guarded([&] {
    seqmi::GaussianParams dist(to_vec(mu, d), to_mat(cov, d, d));
    *out = seqmi::loglr_batch_mean_mv(to_vec(batch_mean, d), dist, n, to_vec(target, d));
  });
}

seqmi_status seqmi_loglr_uniform_tau(const double* loglrs, int64_t len, double* out) {
  if (require(loglrs && out && len >= 0, "null argument") != SEQMI_OK) {
    return SEQMI_ERR_ARG;
  }
  return guarded([&] {
    *out = seqmi::loglr_uniform_tau({loglrs, static_cast<std::size_t>(len)});
  });
}

seqmi_status seqmi_loglr_max_tau(const double* loglrs, int64_t len, double* out) {
  if (require(loglrs && out && len >= 0, "null argument") != SEQMI_OK) {
    return SEQMI_ERR_ARG;
  }
  return guarded([&] {
    *out = seqmi::loglr_max_tau({loglrs, static_cast<std::size_t>(len)});
  });
}

seqmi_status seqmi_loglr_final_obs(const double* final_mean, const double* mu,
                                   const double* cov, int32_t d, int32_t n, int32_t T,
                                   const double* target, double* out) {
  if (require(final_mean && mu && cov && target && out && d >= 1,
              "null or empty argument") != SEQMI_OK) {
    return SEQMI_ERR_ARG;
  }
  return guarded([&] {
    seqmi::GaussianParams dist(to_vec(mu, d), to_mat(cov, d, d));
    *out = seqmi::loglr_final_obs_mv(to_vec(final_mean, d), dist, n, T, to_vec(target, d));
  });
}

seqmi_status seqmi_loglr_sgd(const double* theta_prev, const double* theta_next,
                             int32_t d, double eta, int32_t n,
                             const double* grad_mean, const double* grad_cov,
                             const double* target_grad, double* out) {
  if (require(theta_prev && theta_next && grad_mean && grad_cov && target_grad && out &&
                  d >= 1,
              "null or empty argument") != SEQMI_OK) {
    return SEQMI_ERR_ARG;
  }
  return guarded([&] {
    seqmi::GradientStats stats;
    stats.mean = to_vec(grad_mean, d);
    stats.cov = to_mat(grad_cov, d, d);
    *out = seqmi::loglr_sgd(to_vec(theta_prev, d), to_vec(theta_next, d), eta, n, stats,
                            to_vec(target_grad, d));
  });
}

seqmi_status seqmi_baseline_statistics(const double* losses, int64_t len,
                                       double* delta_diff, double* delta_ratio,
                                       double* backfront_diff,
                                       double* backfront_ratio) {
  if (require(losses && delta_diff && delta_ratio && backfront_diff && backfront_ratio,
              "null argument") != SEQMI_OK) {
    return SEQMI_ERR_ARG;
  }
  return guarded([&] {
    const seqmi::BaselineStats s =
        seqmi::baseline_statistics({losses, static_cast<std::size_t>(len)});
    *delta_diff = s.delta_diff;
    *delta_ratio = s.delta_ratio;
    *backfront_diff = s.backfront_diff;
    *backfront_ratio = s.backfront_ratio;
  });
}

seqmi_status seqmi_gamma_max(int32_t n, double m_star, double* out) {
  if (require(out != nullptr, "null argument") != SEQMI_OK) return SEQMI_ERR_ARG;
  return guarded([&] { *out = seqmi::gamma_max(n, m_star); });
}

seqmi_status seqmi_alpha_lr(double gamma, int32_t n, double m_star, double* out) {
  if (require(out != nullptr, "null argument") != SEQMI_OK) return SEQMI_ERR_ARG;
  return guarded([&] { *out = seqmi::alpha_lr(gamma, n, m_star); });
}

seqmi_status seqmi_beta_lr(double gamma, int32_t n, double m_star, double* out) {
  if (require(out != nullptr, "null argument") != SEQMI_OK) return SEQMI_ERR_ARG;
  return guarded([&] { *out = seqmi::beta_lr(gamma, n, m_star); });
}

seqmi_status seqmi_alpha_final_obs(double gamma, int32_t n, int32_t T, double m_star,
                                   double* out) {
  if (require(out != nullptr, "null argument") != SEQMI_OK) return SEQMI_ERR_ARG;
  return guarded([&] { *out = seqmi::alpha_final_obs(gamma, n, T, m_star); });
}

seqmi_status seqmi_beta_final_obs(double gamma, int32_t n, int32_t T, double m_star,
                                  double* out) {
  if (require(out != nullptr, "null argument") != SEQMI_OK) return SEQMI_ERR_ARG;
  return guarded([&] { *out = seqmi::beta_final_obs(gamma, n, T, m_star); });
}

seqmi_status seqmi_alpha_max_tau(double gamma, int32_t n, double m_star, int32_t T,
                                 double* out) {
  if (require(out != nullptr, "null argument") != SEQMI_OK) return SEQMI_ERR_ARG;
  return guarded([&] { *out = seqmi::alpha_max_tau(gamma, n, m_star, T); });
}

seqmi_status seqmi_beta_max_tau(double gamma, int32_t n, double m_star, int32_t T,
                                double* out) {
  if (require(out != nullptr, "null argument") != SEQMI_OK) return SEQMI_ERR_ARG;
  return guarded([&] { *out = seqmi::beta_max_tau(gamma, n, m_star, T); });
}

seqmi_status seqmi_threshold_for_alpha_lr(double level, int32_t n, double m_star,
                                          double* out) {
  if (require(out != nullptr, "null argument") != SEQMI_OK) return SEQMI_ERR_ARG;
  return guarded([&] { *out = seqmi::threshold_for_alpha_lr(level, n, m_star); });
}

seqmi_status seqmi_threshold_for_alpha_max_tau(double level, int32_t n, double m_star,
                                               int32_t T, double* out) {
  if (require(out != nullptr, "null argument") != SEQMI_OK) return SEQMI_ERR_ARG;
  return guarded([&] { *out = seqmi::threshold_for_alpha_max_tau(level, n, m_star, T); });
}

seqmi_status seqmi_alpha_lr_mv_diag(double gamma, int32_t n, int32_t d, double m_star,
                                    double* out) {
  if (require(out != nullptr, "null argument") != SEQMI_OK) return SEQMI_ERR_ARG;
  return guarded([&] { *out = seqmi::alpha_lr_mv_diag(gamma, n, d, m_star); });
}

seqmi_status seqmi_run_mean_mechanism(const double* mu, const double* cov, int32_t d,
                                      int32_t T, int32_t n, int32_t insert,
                                      int32_t tau, const double* target,
                                      int32_t replace_index, uint64_t seed,
                                      uint64_t stream_id, seqmi_trace** out) {
  if (require(mu && cov && out && d >= 1 && (insert == 0 || target),
              "null or empty argument") != SEQMI_OK) {
    return SEQMI_ERR_ARG;
  }
  return guarded([&] {
    seqmi::GaussianParams params(to_vec(mu, d), to_mat(cov, d, d));
    auto schedule = seqmi::DistributionSchedule::stationary(params, T);
    seqmi::InsertionSpec spec =
        insert ? seqmi::InsertionSpec::in(tau, to_vec(target, d), replace_index)
               : seqmi::InsertionSpec::out();
    seqmi::RngStream stream(seed, stream_id);
    auto* handle = new seqmi_trace{seqmi::run_mean_mechanism(schedule, n, spec, stream)};
    *out = handle;
  });
}

int32_t seqmi_trace_steps(const seqmi_trace* trace) {
  return trace ? trace->trace.steps() : 0;
}

int32_t seqmi_trace_dim(const seqmi_trace* trace) {
  return trace ? trace->trace.dim() : 0;
}

seqmi_status seqmi_trace_values(const seqmi_trace* trace, double* buffer) {
  if (require(trace && buffer, "null argument") != SEQMI_OK) return SEQMI_ERR_ARG;
  return guarded([&] {
    const auto& values = trace->trace.values;
    for (int t = 0; t < values.rows(); ++t) {
      for (int j = 0; j < values.cols(); ++j) {
        buffer[t * values.cols() + j] = values(t, j);
      }
    }
  });
}

seqmi_status seqmi_trace_recover_batch_mean(const seqmi_trace* trace, int32_t t,
                                            double* buffer) {
  if (require(trace && buffer, "null argument") != SEQMI_OK) return SEQMI_ERR_ARG;
  return guarded([&] {
    const seqmi::Vec mean = seqmi::recover_batch_mean(trace->trace, t);
    for (int j = 0; j < mean.size(); ++j) buffer[j] = mean(j);
  });
}

void seqmi_trace_free(seqmi_trace* trace) { delete trace; }

seqmi_status seqmi_run_mean_game(const double* mu, const double* cov, int32_t d,
                                 int32_t T, int32_t n, const double* target,
                                 double nu_b, int32_t tau_mode, int32_t tau_point,
                                 int64_t rounds, uint64_t seed, int32_t threads,
                                 seqmi_records** out) {
  if (require(mu && cov && target && out && d >= 1, "null or empty argument") !=
      SEQMI_OK) {
    return SEQMI_ERR_ARG;
  }
  return guarded([&] {
    seqmi::GaussianParams params(to_vec(mu, d), to_mat(cov, d, d));
    seqmi::MeanGameSpec spec{
        seqmi::DistributionSchedule::stationary(params, T), n,
        seqmi::CrafterConfig{}, {seqmi::Adversary::kLrTau, seqmi::Adversary::kLrUnif,
                                 seqmi::Adversary::kLrMax, seqmi::Adversary::kFinalObs}};
    spec.crafter.nu_b = nu_b;
    if (tau_mode == 0) {
      spec.crafter.nu_tau = seqmi::TauDistribution::point_mass(tau_point);
    } else if (tau_mode == 1) {
      spec.crafter.nu_tau = seqmi::TauDistribution::uniform();
    } else {
      throw seqmi::ConfigError("tau_mode must be 0 (point) or 1 (uniform)");
    }
    spec.crafter.target = to_vec(target, d);
    auto* handle =
        new seqmi_records{seqmi::run_mean_game(spec, rounds, seed, threads)};
    *out = handle;
  });
}

int64_t seqmi_records_rounds(const seqmi_records* records) {
  return records ? records->records.rounds() : 0;
}

seqmi_status seqmi_records_memberships(const seqmi_records* records, int32_t* buffer) {
  if (require(records && buffer, "null argument") != SEQMI_OK) return SEQMI_ERR_ARG;
  return guarded([&] {
    for (std::int64_t r = 0; r < records->records.rounds(); ++r) {
      buffer[r] = records->records.b(r);
    }
  });
}

seqmi_status seqmi_records_stat(const seqmi_records* records, const char* name,
                                double* buffer) {
  if (require(records && name && buffer, "null argument") != SEQMI_OK) {
    return SEQMI_ERR_ARG;
  }
  return guarded([&] {
    const int column = records->records.stat_index(name);
    const auto& values = records->records.stat_column(column);
    std::copy(values.begin(), values.end(), buffer);
  });
}

seqmi_status seqmi_records_auc(const seqmi_records* records, const char* name,
                               double* out) {
  if (require(records && name && out, "null argument") != SEQMI_OK) {
    return SEQMI_ERR_ARG;
  }
  return guarded([&] {
    *out = seqmi::roc_curve(records->records, records->records.stat_index(name)).auc;
  });
}

seqmi_status seqmi_records_tpr_at_fpr(const seqmi_records* records, const char* name,
                                      double fpr_level, double* out) {
  if (require(records && name && out, "null argument") != SEQMI_OK) {
    return SEQMI_ERR_ARG;
  }
  return guarded([&] {
    const auto curve =
        seqmi::roc_curve(records->records, records->records.stat_index(name));
    *out = seqmi::tpr_at_fpr(curve, fpr_level);
  });
}

seqmi_status seqmi_records_epsilon_lower_bound(const seqmi_records* records,
                                               const char* name, double delta,
                                               double xi, double* epsilon_lb,
                                               double* alpha_ucb, double* beta_ucb) {
  if (require(records && name && epsilon_lb, "null argument") != SEQMI_OK) {
    return SEQMI_ERR_ARG;
  }
  return guarded([&] {
    const seqmi::AuditOutcome outcome = seqmi::epsilon_lower_bound(
        records->records, records->records.stat_index(name), delta, xi);
    *epsilon_lb = outcome.epsilon_lb;
    if (alpha_ucb) *alpha_ucb = outcome.alpha_ucb;
    if (beta_ucb) *beta_ucb = outcome.beta_ucb;
  });
}

void seqmi_records_free(seqmi_records* records) { delete records; }

seqmi_status seqmi_gaussian_mechanism_epsilon(double noise_multiplier, double delta,
                                              double* out) {
  if (require(out != nullptr, "null argument") != SEQMI_OK) return SEQMI_ERR_ARG;
  return guarded([&] {
    *out = seqmi::gaussian_mechanism_epsilon(noise_multiplier, delta);
  });
}

seqmi_status seqmi_composed_gaussian_epsilon(double noise_multiplier, int32_t steps,
                                             double delta, double* out) {
  if (require(out != nullptr, "null argument") != SEQMI_OK) return SEQMI_ERR_ARG;
  return guarded([&] {
    *out = seqmi::composed_gaussian_epsilon(noise_multiplier, steps, delta);
  });
}

seqmi_status seqmi_run_experiment(const char* kind, const char* config_text) {
  if (require(kind && config_text, "null argument") != SEQMI_OK) return SEQMI_ERR_ARG;
  return guarded([&] {
    const seqmi::KvConfig config = seqmi::KvConfig::parse(config_text);
    seqmi::run_experiment(kind, config);
  });
}

}  // extern "C"
