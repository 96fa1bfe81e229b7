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

#include "seqmi/game.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

#include "seqmi/csv.hpp"
#include "seqmi/errors.hpp"

namespace seqmi {
namespace {

constexpr std::uint64_t kReferenceLabel = 0x4000000000000000ULL;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::string adversary_name(Adversary a) {
  switch (a) {
    case Adversary::kLrTau: return "lr_tau";
    case Adversary::kLrUnif: return "lr_unif";
    case Adversary::kLrMax: return "lr_max";
    case Adversary::kFinalObs: return "final_obs";
    case Adversary::kLrSgd: return "lr_sgd";
    case Adversary::kDeltaDiff: return "delta_diff";
    case Adversary::kDeltaRatio: return "delta_ratio";
    case Adversary::kBackFrontDiff: return "backfront_diff";
    case Adversary::kBackFrontRatio: return "backfront_ratio";
    case Adversary::kShift: return "shift";
  }
  throw ConfigError("unknown adversary");
}

Adversary adversary_from_name(const std::string& name) {
  for (Adversary a : {Adversary::kLrTau, Adversary::kLrUnif, Adversary::kLrMax,
                      Adversary::kFinalObs, Adversary::kLrSgd, Adversary::kDeltaDiff,
                      Adversary::kDeltaRatio, Adversary::kBackFrontDiff,
                      Adversary::kBackFrontRatio, Adversary::kShift}) {
    if (adversary_name(a) == name) return a;
  }
  throw ConfigError("unknown adversary: " + name);
}

TauDistribution TauDistribution::point_mass(int tau) {
  TauDistribution d;
  d.kind_ = Kind::kPoint;
  d.point_ = tau;
  return d;
}

TauDistribution TauDistribution::uniform() {
  TauDistribution d;
  d.kind_ = Kind::kUniform;
  return d;
}

TauDistribution TauDistribution::weights(std::vector<double> w) {
  TauDistribution d;
  d.kind_ = Kind::kWeights;
  d.weights_ = std::move(w);
  return d;
}

void TauDistribution::validate(int steps) const {
  switch (kind_) {
    case Kind::kPoint:
      if (point_ < 1 || point_ > steps) throw ConfigError("insertion time out of range");
      return;
    case Kind::kUniform:
      return;
    case Kind::kWeights: {
      if (static_cast<int>(weights_.size()) != steps) {
        throw ConfigError("insertion-time weights length mismatch");
      }
      double total = 0.0;
      for (double w : weights_) {
        if (w < 0.0) throw ConfigError("insertion-time weights must be nonnegative");
        total += w;
      }
      if (std::fabs(total - 1.0) > 1e-12) {
        throw ConfigError("insertion-time weights must sum to 1");
      }
      return;
    }
  }
}

int TauDistribution::sample(RngStream& stream, int steps) const {
  switch (kind_) {
    case Kind::kPoint:
      return point_;
    case Kind::kUniform:
      return static_cast<int>(stream.uniform_int(static_cast<std::uint64_t>(steps))) + 1;
    case Kind::kWeights: {
      const double u = stream.uniform();
      double acc = 0.0;
      for (int t = 1; t <= steps; ++t) {
        acc += weights_[t - 1];
        if (u < acc) return t;
      }
      return steps;
    }
  }
  throw ConfigError("invalid insertion-time distribution");
}

CrafterDraw draw_crafter(const CrafterConfig& config, int steps, int batch_size,
                         RngStream& stream) {
  if (config.nu_b < 0.0 || config.nu_b > 1.0) {
    throw ConfigError("membership probability must be in [0, 1]");
  }
  config.nu_tau.validate(steps);
  CrafterDraw draw;
  // All three draws happen regardless of B so the sample paths of paired
  // IN/OUT rounds stay aligned.
  draw.b = stream.uniform() < config.nu_b ? 1 : 0;
  draw.tau = config.nu_tau.sample(stream, steps);
  draw.replaced_index =
      static_cast<int>(stream.uniform_int(static_cast<std::uint64_t>(batch_size))) + 1;
  return draw;
}

InsertionSpec insertion_from_draw(const CrafterDraw& draw, const Vec& target) {
  if (draw.b == 0) return InsertionSpec::out();
  return InsertionSpec::in(draw.tau, target, draw.replaced_index);
}

CraftedTrace crafter_mean(const DistributionSchedule& schedule, int n,
                          const CrafterConfig& config, RngStream& stream) {
  const CrafterDraw draw = draw_crafter(config, schedule.steps(), n, stream);
  CraftedTrace out;
  out.b = draw.b;
  out.tau = draw.tau;
  out.trace = run_mean_mechanism(schedule, n, insertion_from_draw(draw, config.target),
                                 stream);
  return out;
}

GameRecords::GameRecords(std::vector<std::string> stat_names, std::int64_t rounds)
    : b_(rounds, 0), tau_(rounds, 0), stat_names_(std::move(stat_names)) {
  stats_.assign(stat_names_.size(), std::vector<double>(rounds, 0.0));
}

int GameRecords::stat_index(const std::string& name) const {
  for (int i = 0; i < stat_count(); ++i) {
    if (stat_names_[i] == name) return i;
  }
  throw ConfigError("no statistic named " + name);
}

void GameRecords::set_round(std::int64_t r, std::uint8_t b, int tau,
                            const std::vector<double>& values) {
  b_[r] = b;
  tau_[r] = tau;
  for (int i = 0; i < stat_count(); ++i) stats_[i][r] = values[i];
}

std::int64_t GameRecords::count_b(int value) const {
  return std::count(b_.begin(), b_.end(), static_cast<std::uint8_t>(value));
}

void GameRecords::write_csv(std::ostream& os) const {
  os << "round,B,tau";
  for (const auto& name : stat_names_) os << ",stat_" << name;
  os << "\n";
  for (std::int64_t r = 0; r < rounds(); ++r) {
    os << r << ',' << static_cast<int>(b_[r]) << ',' << tau_[r];
    for (int i = 0; i < stat_count(); ++i) os << ',' << csv_double(stats_[i][r]);
    os << "\n";
  }
}

void parallel_rounds(std::int64_t rounds, int threads,
                     const std::function<void(std::int64_t)>& fn) {
  if (rounds < 1) throw ConfigError("round count must be >= 1");
  unsigned workers = threads > 0 ? static_cast<unsigned>(threads)
                                 : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::int64_t>(workers, rounds));
  if (workers <= 1) {
    for (std::int64_t r = 0; r < rounds; ++r) fn(r);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&] {
    const std::int64_t chunk = std::max<std::int64_t>(1, rounds / (8 * workers));
    for (;;) {
      const std::int64_t lo = next.fetch_add(chunk);
      if (lo >= rounds) return;
      const std::int64_t hi = std::min(rounds, lo + chunk);
      try {
        for (std::int64_t r = lo; r < hi; ++r) fn(r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

GameRecords run_mean_game(const MeanGameSpec& spec, std::int64_t rounds,
                          std::uint64_t seed, int threads) {
  if (spec.adversaries.empty()) throw ConfigError("adversary list is empty");
  const int T = spec.schedule.steps();
  const int n = spec.batch_size;
  if (spec.crafter.target.size() != spec.schedule.dim()) {
    throw ConfigError("target dimension mismatch");
  }
  spec.crafter.nu_tau.validate(T);
  for (Adversary a : spec.adversaries) {
    if (a != Adversary::kLrTau && a != Adversary::kLrUnif && a != Adversary::kLrMax &&
        a != Adversary::kFinalObs) {
      throw ConfigError("adversary " + adversary_name(a) +
                        " not supported by the mean-mechanism game");
    }
  }

  std::vector<std::string> names;
  for (Adversary a : spec.adversaries) names.push_back(adversary_name(a));
  GameRecords records(names, rounds);

  parallel_rounds(rounds, threads, [&](std::int64_t r) {
    RngStream round_stream(seed, static_cast<std::uint64_t>(r));
    const CrafterDraw draw = draw_crafter(spec.crafter, T, n, round_stream);
    const MeanTrace trace = run_mean_mechanism(
        spec.schedule, n, insertion_from_draw(draw, spec.crafter.target), round_stream);

    // Per-step statistics are shared by the tau-agnostic adversaries.
    std::vector<double> per_step;
    const bool needs_per_step =
        std::find(spec.adversaries.begin(), spec.adversaries.end(), Adversary::kLrUnif) !=
            spec.adversaries.end() ||
        std::find(spec.adversaries.begin(), spec.adversaries.end(), Adversary::kLrMax) !=
            spec.adversaries.end();
    if (needs_per_step) {
      per_step.resize(T);
      for (int t = 1; t <= T; ++t) {
        per_step[t - 1] = loglr_batch_mean_mv(recover_batch_mean(trace, t),
                                              spec.schedule.at(t), n, spec.crafter.target);
      }
    }

    std::vector<double> values(spec.adversaries.size());
    for (std::size_t i = 0; i < spec.adversaries.size(); ++i) {
      switch (spec.adversaries[i]) {
        case Adversary::kLrTau:
          values[i] = loglr_batch_mean_mv(recover_batch_mean(trace, draw.tau),
                                          spec.schedule.at(draw.tau), n,
                                          spec.crafter.target);
          break;
        case Adversary::kLrUnif:
          values[i] = loglr_uniform_tau(per_step);
          break;
        case Adversary::kLrMax:
          values[i] = loglr_max_tau(per_step);
          break;
        case Adversary::kFinalObs:
          values[i] = loglr_final_obs_mv(trace.values.row(T - 1).transpose(),
                                         spec.schedule.at(1), n, T, spec.crafter.target);
          break;
        default:
          break;
      }
    }
    records.set_round(r, static_cast<std::uint8_t>(draw.b), draw.tau, values);
  });
  return records;
}

GameRecords run_sgd_game(const SgdGameSpec& spec, std::int64_t rounds,
                         std::uint64_t seed, int threads) {
  if (!spec.problem) throw ConfigError("sgd game needs a problem");
  if (spec.adversaries.empty()) throw ConfigError("adversary list is empty");
  const Problem& problem = *spec.problem;
  const int T = spec.sgd.steps;
  if (spec.crafter.target.size() != problem.point_dim()) {
    throw ConfigError("target dimension mismatch");
  }
  spec.crafter.nu_tau.validate(T);
  bool wants_lr = false;
  for (Adversary a : spec.adversaries) {
    if (a == Adversary::kLrSgd) {
      wants_lr = true;
    } else if (a != Adversary::kDeltaDiff && a != Adversary::kDeltaRatio &&
               a != Adversary::kBackFrontDiff && a != Adversary::kBackFrontRatio) {
      throw ConfigError("adversary " + adversary_name(a) +
                        " not supported by the sgd game");
    }
  }
  if (wants_lr && spec.reference_size == 0 &&
      !problem.exact_grad_stats(spec.sgd.theta0).has_value()) {
    throw ConfigError("problem has no closed-form gradient statistics; "
                      "set a reference-set size");
  }
  if (spec.reference_size < 0) throw ConfigError("reference-set size must be >= 0");
  if (spec.reference_size == 1) throw ConfigError("need at least two reference samples");

  std::vector<std::string> names;
  for (Adversary a : spec.adversaries) names.push_back(adversary_name(a));
  GameRecords records(names, rounds);

  parallel_rounds(rounds, threads, [&](std::int64_t r) {
    RngStream round_stream(seed, static_cast<std::uint64_t>(r));
    const int n_max = *std::max_element(spec.sgd.batch_sizes.begin(),
                                        spec.sgd.batch_sizes.end());
    const CrafterDraw draw = draw_crafter(spec.crafter, T, n_max, round_stream);
    const ParamTrace trace = run_sgd(
        problem, spec.sgd, insertion_from_draw(draw, spec.crafter.target), round_stream);

    std::vector<double> losses(T + 1);
    for (int t = 0; t <= T; ++t) {
      losses[t] = problem.loss(trace.thetas.row(t).transpose(), spec.crafter.target);
    }

    std::vector<double> values(spec.adversaries.size());
    BaselineStats baselines{};
    bool have_baselines = false;
    for (std::size_t i = 0; i < spec.adversaries.size(); ++i) {
      const Adversary a = spec.adversaries[i];
      if (a == Adversary::kLrSgd) {
        const int tau = draw.tau;
        const Vec theta_prev = trace.thetas.row(tau - 1).transpose();
        const Vec theta_next = trace.thetas.row(tau).transpose();
        const int n = spec.sgd.batch_sizes[tau - 1];
        const double eta = spec.sgd.learning_rates[tau - 1];

        GradientStats stats;
        if (spec.reference_size == 0) {
          stats = *problem.exact_grad_stats(theta_prev);
        } else {
          RngStream ref_stream =
              round_stream.child(kReferenceLabel | static_cast<std::uint64_t>(tau));
          Mat reference(spec.reference_size, problem.point_dim());
          for (int k = 0; k < spec.reference_size; ++k) {
            reference.row(k) = problem.sample_point(ref_stream).transpose();
          }
          stats = estimate_grad_stats(problem, theta_prev, reference, spec.ridge,
                                      spec.sgd.clip);
        }
        if (spec.account_dp_noise && spec.sgd.noise_multiplier > 0.0) {
          // The released update carries N(0, (sigma C / n)^2 I) on top of the
          // sampling noise Sigma_g / n; folding it into Sigma_g keeps the
          // statistic calibrated against the observed mechanism.
          const double extra = spec.sgd.noise_multiplier * spec.sgd.clip;
          stats.cov += (extra * extra / static_cast<double>(n)) *
                       Mat::Identity(problem.param_dim(), problem.param_dim());
        }
        Vec target_grad = problem.gradient(theta_prev, spec.crafter.target);
        if (std::isfinite(spec.sgd.clip)) {
          const double norm = target_grad.norm();
          if (norm > spec.sgd.clip) target_grad *= spec.sgd.clip / norm;
        }
        values[i] = loglr_sgd(theta_prev, theta_next, eta, n, stats, target_grad);
      } else {
        if (!have_baselines) {
          baselines = baseline_statistics(losses);
          have_baselines = true;
        }
        switch (a) {
          case Adversary::kDeltaDiff: values[i] = baselines.delta_diff; break;
          case Adversary::kDeltaRatio: values[i] = baselines.delta_ratio; break;
          case Adversary::kBackFrontDiff: values[i] = baselines.backfront_diff; break;
          case Adversary::kBackFrontRatio: values[i] = baselines.backfront_ratio; break;
          default: break;
        }
      }
    }
    records.set_round(r, static_cast<std::uint8_t>(draw.b), draw.tau, values);
  });
  return records;
}

GameRecords run_shift_game(const ShiftGameSpec& spec, std::int64_t rounds,
                           std::uint64_t seed, int threads) {
  if (!(spec.noise_std > 0.0)) throw ConfigError("noise std must be positive");
  GameRecords records({adversary_name(Adversary::kShift)}, rounds);
  parallel_rounds(rounds, threads, [&](std::int64_t r) {
    RngStream stream(seed, static_cast<std::uint64_t>(r));
    const int b = stream.uniform() < spec.nu_b ? 1 : 0;
    const double o = spec.shift * b + spec.noise_std * stream.gaussian();
    records.set_round(r, static_cast<std::uint8_t>(b), 1, {o});
  });
  return records;
}

namespace {

std::pair<std::vector<double>, std::vector<double>> split_by_class(
    const GameRecords& records, int stat_column) {
  std::vector<double> out_class;
  std::vector<double> in_class;
  for (std::int64_t r = 0; r < records.rounds(); ++r) {
    if (records.b(r) == 0) {
      out_class.push_back(records.stat(stat_column, r));
    } else {
      in_class.push_back(records.stat(stat_column, r));
    }
  }
  if (out_class.empty() || in_class.empty()) {
    throw ConfigError("need both member and non-member rounds");
  }
  return {std::move(out_class), std::move(in_class)};
}

// Count of elements strictly greater than g in a sorted (ascending) vector.
std::int64_t count_greater(const std::vector<double>& sorted, double g) {
  return sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), g);
}

}  // namespace

ErrorEstimate estimate_errors(const GameRecords& records, int stat_column,
                              std::span<const double> gamma_grid) {
  auto [out_class, in_class] = split_by_class(records, stat_column);
  std::sort(out_class.begin(), out_class.end());
  std::sort(in_class.begin(), in_class.end());
  ErrorEstimate e;
  e.n0 = static_cast<std::int64_t>(out_class.size());
  e.n1 = static_cast<std::int64_t>(in_class.size());
  e.gamma.assign(gamma_grid.begin(), gamma_grid.end());
  e.alpha.reserve(e.gamma.size());
  e.beta.reserve(e.gamma.size());
  for (double g : e.gamma) {
    e.alpha.push_back(static_cast<double>(count_greater(out_class, g)) /
                      static_cast<double>(e.n0));
    e.beta.push_back(
        static_cast<double>(e.n1 - count_greater(in_class, g)) /
        static_cast<double>(e.n1));
  }
  return e;
}

std::vector<double> observed_gamma_grid(const GameRecords& records, int stat_column) {
  std::vector<double> grid;
  grid.reserve(records.rounds() + 2);
  grid.push_back(-kInf);
  const auto& col = records.stat_column(stat_column);
  grid.insert(grid.end(), col.begin(), col.end());
  grid.push_back(kInf);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

RocCurve roc_curve(const GameRecords& records, int stat_column) {
  auto [out_class, in_class] = split_by_class(records, stat_column);
  std::sort(out_class.begin(), out_class.end());
  std::sort(in_class.begin(), in_class.end());
  const std::int64_t n0 = static_cast<std::int64_t>(out_class.size());
  const std::int64_t n1 = static_cast<std::int64_t>(in_class.size());

  std::vector<double> thresholds;
  thresholds.reserve(n0 + n1);
  thresholds.insert(thresholds.end(), out_class.begin(), out_class.end());
  thresholds.insert(thresholds.end(), in_class.begin(), in_class.end());
  std::sort(thresholds.begin(), thresholds.end(), std::greater<double>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  RocCurve curve;
  curve.n0 = n0;
  curve.n1 = n1;
  curve.fpr.reserve(thresholds.size() + 2);
  curve.tpr.reserve(thresholds.size() + 2);
  curve.fpr.push_back(0.0);
  curve.tpr.push_back(0.0);
  for (double g : thresholds) {
    curve.fpr.push_back(static_cast<double>(count_greater(out_class, g)) /
                        static_cast<double>(n0));
    curve.tpr.push_back(static_cast<double>(count_greater(in_class, g)) /
                        static_cast<double>(n1));
  }
  if (curve.fpr.back() != 1.0 || curve.tpr.back() != 1.0) {
    curve.fpr.push_back(1.0);
    curve.tpr.push_back(1.0);
  }
  double auc = 0.0;
  for (std::size_t i = 1; i < curve.fpr.size(); ++i) {
    auc += 0.5 * (curve.fpr[i] - curve.fpr[i - 1]) * (curve.tpr[i] + curve.tpr[i - 1]);
  }
  curve.auc = auc;
  return curve;
}

double tpr_at_fpr(const RocCurve& curve, double fpr_level) {
  if (!(fpr_level > 0.0 && fpr_level < 1.0)) {
    throw ConfigError("fpr level must be in (0, 1)");
  }
  double best = 0.0;
  for (std::size_t i = 0; i < curve.fpr.size(); ++i) {
    if (curve.fpr[i] <= fpr_level) best = std::max(best, curve.tpr[i]);
  }
  return best;
}

void write_roc_csv(const RocCurve& curve, std::ostream& os) {
  os << "fpr,tpr\n";
  for (std::size_t i = 0; i < curve.fpr.size(); ++i) {
    os << csv_double(curve.fpr[i]) << ',' << csv_double(curve.tpr[i]) << "\n";
  }
}

}  // namespace seqmi
