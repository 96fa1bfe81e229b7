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

#ifndef SEQMI_GAME_HPP_
#define SEQMI_GAME_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "seqmi/mean_mechanism.hpp"
#include "seqmi/sgd.hpp"
#include "seqmi/statistics.hpp"

namespace seqmi {

// Test statistics the harness can evaluate each round. The "Lr" family are
// the log-likelihood-ratio adversaries; the rest are loss heuristics.
enum class Adversary {
  kLrTau,           // known insertion time, batch-mean log-LR
  kLrUnif,          // uniform-prior aggregation over insertion times
  kLrMax,           // max over insertion times (GLR)
  kFinalObs,        // final output only, effective batch n*T
  kLrSgd,           // known insertion time, gradient log-LR
  kDeltaDiff,
  kDeltaRatio,
  kBackFrontDiff,
  kBackFrontRatio,
  kShift,           // raw output of the scalar shift mechanism
};

std::string adversary_name(Adversary a);
Adversary adversary_from_name(const std::string& name);

// Distribution of the insertion time used by the crafter.
class TauDistribution {
 public:
  static TauDistribution point_mass(int tau);
  static TauDistribution uniform();
  static TauDistribution weights(std::vector<double> w);

  // Weights must sum to 1 within 1e-12 once resolved against T steps.
  void validate(int steps) const;
  int sample(RngStream& stream, int steps) const;
  bool is_point() const { return kind_ == Kind::kPoint; }
  int point() const { return point_; }

 private:
  enum class Kind { kPoint, kUniform, kWeights };
  Kind kind_ = Kind::kPoint;
  int point_ = 1;
  std::vector<double> weights_;
};

struct CrafterConfig {
  double nu_b = 0.5;  // P(B = 1)
  TauDistribution nu_tau = TauDistribution::point_mass(1);
  Vec target;
};

struct CrafterDraw {
  int b = 0;
  int tau = 1;
  int replaced_index = 1;
};

// Samples (B, tau, J) and packages them as an insertion spec.
CrafterDraw draw_crafter(const CrafterConfig& config, int steps, int batch_size,
                         RngStream& stream);
InsertionSpec insertion_from_draw(const CrafterDraw& draw, const Vec& target);

// One crafter + mechanism evaluation for the cumulative-mean mechanism.
struct CraftedTrace {
  MeanTrace trace;
  int b = 0;
  int tau = 1;
};
CraftedTrace crafter_mean(const DistributionSchedule& schedule, int n,
                          const CrafterConfig& config, RngStream& stream);

// Column-oriented game transcript: membership bit, insertion time and one
// statistic column per adversary, indexed by round.
class GameRecords {
 public:
  GameRecords(std::vector<std::string> stat_names, std::int64_t rounds);

  std::int64_t rounds() const { return static_cast<std::int64_t>(b_.size()); }
  int stat_count() const { return static_cast<int>(stat_names_.size()); }
  const std::vector<std::string>& stat_names() const { return stat_names_; }
  // Throws ConfigError when the name is unknown.
  int stat_index(const std::string& name) const;

  std::uint8_t b(std::int64_t r) const { return b_[r]; }
  int tau(std::int64_t r) const { return tau_[r]; }
  double stat(int column, std::int64_t r) const { return stats_[column][r]; }
  const std::vector<double>& stat_column(int column) const { return stats_[column]; }

  void set_round(std::int64_t r, std::uint8_t b, int tau,
                 const std::vector<double>& values);

  std::int64_t count_b(int value) const;

  // CSV with header "round,B,tau,stat_<name>,...".
  void write_csv(std::ostream& os) const;

 private:
  std::vector<std::uint8_t> b_;
  std::vector<int> tau_;
  std::vector<std::string> stat_names_;
  std::vector<std::vector<double>> stats_;
};

// Game over the cumulative-mean mechanism. Supported adversaries: kLrTau,
// kLrUnif, kLrMax, kFinalObs.
struct MeanGameSpec {
  DistributionSchedule schedule;
  int batch_size = 0;
  CrafterConfig crafter;
  std::vector<Adversary> adversaries;
};
GameRecords run_mean_game(const MeanGameSpec& spec, std::int64_t rounds,
                          std::uint64_t seed, int threads);

// Game over (DP-)SGD. Supported adversaries: kLrSgd and the loss heuristics.
struct SgdGameSpec {
  std::shared_ptr<const Problem> problem;
  SgdConfig sgd;
  CrafterConfig crafter;
  std::vector<Adversary> adversaries;
  // Gradient statistics for the LR adversary: closed form when available and
  // reference_size == 0, otherwise estimated from a fresh per-round reference
  // sample of this size.
  int reference_size = 0;
  double ridge = -1.0;  // < 0 selects the scale-aware default
  // Adds the DP noise variance to the gradient covariance used by the LR
  // adversary, matching the observed mechanism.
  bool account_dp_noise = true;
};
GameRecords run_sgd_game(const SgdGameSpec& spec, std::int64_t rounds,
                         std::uint64_t seed, int threads);

// Scalar shift mechanism: the round observes N(shift * B, noise_std^2); the
// kShift statistic is the raw observation. A minimal mechanism whose exact
// privacy level is known, used to stress audit validity.
struct ShiftGameSpec {
  double shift = 1.0;
  double noise_std = 1.0;
  double nu_b = 0.5;
};
GameRecords run_shift_game(const ShiftGameSpec& spec, std::int64_t rounds,
                           std::uint64_t seed, int threads);

// Empirical error rates on a threshold grid:
// alpha(g) = #(stat > g, B = 0)/N0, beta(g) = #(stat <= g, B = 1)/N1.
struct ErrorEstimate {
  std::vector<double> gamma;
  std::vector<double> alpha;
  std::vector<double> beta;
  std::int64_t n0 = 0;
  std::int64_t n1 = 0;
};
ErrorEstimate estimate_errors(const GameRecords& records, int stat_column,
                              std::span<const double> gamma_grid);

// The observed statistic values plus -inf/+inf sentinels; the empirical error
// functions only change there.
std::vector<double> observed_gamma_grid(const GameRecords& records, int stat_column);

struct RocCurve {
  std::vector<double> fpr;
  std::vector<double> tpr;
  double auc = 0.0;
  std::int64_t n0 = 0;
  std::int64_t n1 = 0;
};
RocCurve roc_curve(const GameRecords& records, int stat_column);

// Largest TPR whose FPR does not exceed the level; step interpolation only.
double tpr_at_fpr(const RocCurve& curve, double fpr_level);

void write_roc_csv(const RocCurve& curve, std::ostream& os);

// Runs fn(r) for r in [0, rounds) over the given number of worker threads
// (0 = hardware concurrency). fn must only touch per-round slots.
void parallel_rounds(std::int64_t rounds, int threads,
                     const std::function<void(std::int64_t)>& fn);

}  // namespace seqmi

#endif  // SEQMI_GAME_HPP_
