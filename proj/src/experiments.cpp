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

#include "seqmi/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "seqmi/audit.hpp"
#include "seqmi/csv.hpp"
#include "seqmi/errors.hpp"
#include "seqmi/error_theory.hpp"
#include "seqmi/game.hpp"
#include "seqmi/special.hpp"

namespace seqmi {
namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label) {
  return RngStream(seed, label).next_u64();
}

// ---------------------------------------------------------------------------
// Config resolution

struct RunSettings {
  std::uint64_t seed = 1;
  std::int64_t rounds = 0;  // 0 = experiment default
  int threads = 0;
  std::filesystem::path out = "results";
  std::string label = "default";
};

RunSettings run_settings(const KvConfig& cfg) {
  RunSettings s;
  const std::int64_t seed = cfg.get_int("experiment.seed", 1);
  if (seed < 0) throw ConfigError("field experiment.seed: must be nonnegative");
  s.seed = static_cast<std::uint64_t>(seed);
  s.rounds = cfg.get_int("experiment.rounds", 0);
  if (s.rounds < 0) throw ConfigError("field experiment.rounds: must be nonnegative");
  const std::int64_t threads = cfg.get_int("experiment.threads", 0);
  if (threads < 0 || threads > 1024) {
    throw ConfigError("field experiment.threads: must be in [0, 1024]");
  }
  s.threads = static_cast<int>(threads);
  s.out = cfg.get_string("experiment.out", "results");
  s.label = cfg.get_string("experiment.label", "default");
  if (s.label.empty() || s.label.find('/') != std::string::npos) {
    throw ConfigError("field experiment.label: must be a non-empty path component");
  }
  cfg.get_string("experiment.kind", "");  // consumed by the dispatcher
  return s;
}

Vec resolve_vector(const KvConfig& cfg, const std::string& key, int d, double fallback) {
  const std::vector<double> raw = cfg.get_doubles(key, {fallback});
  if (static_cast<int>(raw.size()) == 1) {
    return Vec::Constant(d, raw[0]);
  }
  if (static_cast<int>(raw.size()) != d) {
    throw ConfigError("field " + key + ": expected 1 or " + std::to_string(d) +
                      " values");
  }
  return Eigen::Map<const Vec>(raw.data(), d);
}

struct MeanSetup {
  DistributionSchedule schedule;
  int n;
  Vec target;
  double m_star;
};

// Data distribution, target and batch size for the mean-mechanism games. The
// target comes from target.z when given, otherwise from a Mahalanobis
// distance target.mstar laid out along e1 or spread evenly over coordinates.
// dim_override / mstar_override serve the grid experiments, which vary these
// independently of the config.
MeanSetup mean_setup(const KvConfig& cfg, int steps, int dim_override = 0,
                     double mstar_override = -1.0) {
  const int d = dim_override > 0 ? dim_override
                                 : static_cast<int>(cfg.get_int("mean.d", 1));
  if (d < 1) throw ConfigError("field mean.d: must be >= 1");
  const int n = static_cast<int>(cfg.get_int("mean.n", 10));
  if (n < 2) throw ConfigError("field mean.n: must be >= 2");

  const Vec mu = resolve_vector(cfg, "mean.mu", d, 0.0);
  const Vec var = resolve_vector(cfg, "mean.sigma2", d, 1.0);
  for (int j = 0; j < d; ++j) {
    if (!(var(j) > 0.0)) throw ConfigError("field mean.sigma2: must be positive");
  }
  GaussianParams params(mu, Mat(var.asDiagonal()));

  // Touch the target keys up front so override paths keep them known.
  const bool has_z = cfg.has("target.z");
  const std::vector<double> z_raw = cfg.get_doubles("target.z", {});
  double m_star_cfg = cfg.get_double("target.mstar", 9.0);
  const std::string direction = cfg.get_string("target.direction", "spread");
  if (direction != "e1" && direction != "spread") {
    throw ConfigError("field target.direction: expected e1 or spread");
  }

  Vec target;
  if (has_z && mstar_override < 0.0) {
    if (static_cast<int>(z_raw.size()) != d) {
      throw ConfigError("field target.z: expected " + std::to_string(d) + " values");
    }
    target = Eigen::Map<const Vec>(z_raw.data(), d);
  } else {
    const double m_star = mstar_override >= 0.0 ? mstar_override : m_star_cfg;
    if (m_star < 0.0) throw ConfigError("field target.mstar: must be nonnegative");
    target = mu;
    if (direction == "e1") {
      target(0) += std::sqrt(m_star) * std::sqrt(var(0));
    } else {
      for (int j = 0; j < d; ++j) {
        target(j) += std::sqrt(m_star / d) * std::sqrt(var(j));
      }
    }
  }

  double m_star = 0.0;
  for (int j = 0; j < d; ++j) {
    const double z = target(j) - mu(j);
    m_star += z * z / var(j);
  }
  return MeanSetup{DistributionSchedule::stationary(params, steps), n, target, m_star};
}

TauDistribution resolve_nu_tau(const KvConfig& cfg, int steps) {
  const std::string spec = cfg.get_string("crafter.nu_tau", "mid");
  if (spec == "uniform") return TauDistribution::uniform();
  if (spec == "mid") return TauDistribution::point_mass((steps + 1) / 2);
  if (spec.rfind("point:", 0) == 0) {
    try {
      return TauDistribution::point_mass(std::stoi(spec.substr(6)));
    } catch (const std::exception&) {
      throw ConfigError("field crafter.nu_tau: bad point spec '" + spec + "'");
    }
  }
  if (spec.rfind("weights:", 0) == 0) {
    std::vector<double> w;
    std::istringstream in(spec.substr(8));
    std::string item;
    try {
      while (std::getline(in, item, ',')) w.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("field crafter.nu_tau: bad weights spec '" + spec + "'");
    }
    return TauDistribution::weights(std::move(w));
  }
  throw ConfigError(
      "field crafter.nu_tau: expected mid, uniform, point:<t> or weights:<list>");
}

CrafterConfig resolve_crafter(const KvConfig& cfg, int steps, Vec target) {
  CrafterConfig crafter;
  crafter.nu_b = cfg.get_double("crafter.nu_b", 0.5);
  if (crafter.nu_b < 0.0 || crafter.nu_b > 1.0) {
    throw ConfigError("field crafter.nu_b: must be in [0, 1]");
  }
  crafter.nu_tau = resolve_nu_tau(cfg, steps);
  crafter.nu_tau.validate(steps);
  crafter.target = std::move(target);
  return crafter;
}

double resolve_alpha_level(const KvConfig& cfg) {
  const double level = cfg.get_double("test.alpha_level", 0.01);
  if (!(level > 0.0 && level < 1.0)) {
    throw ConfigError("field test.alpha_level: must be in (0, 1)");
  }
  return level;
}

double resolve_fpr_level(const KvConfig& cfg) {
  const double level = cfg.get_double("test.fpr_level", 0.01);
  if (!(level > 0.0 && level < 1.0)) {
    throw ConfigError("field test.fpr_level: must be in (0, 1)");
  }
  return level;
}

// ---------------------------------------------------------------------------
// Output plumbing. Outputs are buffered and flushed only after the whole
// experiment succeeded, so a failing run leaves no partial files behind.

class OutputWriter {
 public:
  void write(const std::string& name, std::string content) {
    outputs_.emplace_back(name, std::move(content));
  }

  std::vector<std::string> flush(const std::filesystem::path& dir,
                                 const std::string& kind, const RunSettings& settings,
                                 const KvConfig& cfg) {
    std::vector<std::string> names;
    for (const auto& [name, content] : outputs_) names.push_back(name);
    names.push_back("manifest.json");

    nlohmann::ordered_json manifest;
    manifest["experiment"] = kind;
    manifest["label"] = settings.label;
    manifest["seed"] = settings.seed;
    manifest["threads"] = settings.threads;
    manifest["config_hash"] = cfg.hash();
    manifest["config"] = cfg.resolved_text();
    manifest["files"] = names;
    outputs_.emplace_back("manifest.json", manifest.dump(2) + "\n");

    std::filesystem::create_directories(dir);
    for (const auto& [name, content] : outputs_) {
      std::ofstream os(dir / name, std::ios::binary);
      if (!os) throw ConfigError("cannot open output file " + (dir / name).string());
      os << content;
    }
    return names;
  }

 private:
  std::vector<std::pair<std::string, std::string>> outputs_;
};

struct PowerEstimate {
  double power = 0.0;
  double se = 0.0;
  double auc = 0.0;
};

PowerEstimate power_at_fpr(const GameRecords& records, int column, double fpr_level) {
  const RocCurve curve = roc_curve(records, column);
  PowerEstimate p;
  p.power = tpr_at_fpr(curve, fpr_level);
  p.se = std::sqrt(p.power * (1.0 - p.power) / static_cast<double>(curve.n1));
  p.auc = curve.auc;
  return p;
}

const std::vector<Adversary>& mean_adversaries() {
  static const std::vector<Adversary> a = {Adversary::kLrTau, Adversary::kLrUnif,
                                           Adversary::kLrMax, Adversary::kFinalObs};
  return a;
}

const std::vector<Adversary>& sgd_adversaries() {
  static const std::vector<Adversary> a = {
      Adversary::kLrSgd, Adversary::kDeltaDiff, Adversary::kDeltaRatio,
      Adversary::kBackFrontDiff, Adversary::kBackFrontRatio};
  return a;
}

double closed_form_power(Adversary a, double level, int n, double m_star, int T) {
  switch (a) {
    case Adversary::kLrTau:
      return power_lr_at_alpha(level, n, m_star);
    case Adversary::kLrMax:
      return power_max_tau_at_alpha(level, n, m_star, T);
    case Adversary::kFinalObs:
      return power_final_obs_at_alpha(level, n, T, m_star);
    default:
      return kNan;
  }
}

// ---------------------------------------------------------------------------
// mean-power

void experiment_mean_power(const KvConfig& cfg, const RunSettings& s,
                           OutputWriter& out) {
  const std::int64_t rounds = s.rounds > 0 ? s.rounds : 50000;
  const double alpha_level = resolve_alpha_level(cfg);

  const std::vector<double> t_grid =
      cfg.get_doubles("power.T_grid", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  std::ostringstream by_T;
  by_T << "test,T,alpha_level,power_closed_form,power_mc,se_mc\n";
  for (double t_raw : t_grid) {
    const int T = static_cast<int>(t_raw);
    if (T < 1) throw ConfigError("field power.T_grid: entries must be >= 1");
    const MeanSetup setup = mean_setup(cfg, T);
    MeanGameSpec spec{setup.schedule, setup.n, resolve_crafter(cfg, T, setup.target),
                      mean_adversaries()};
    const GameRecords records = run_mean_game(
        spec, rounds, derive_seed(s.seed, 1000 + static_cast<std::uint64_t>(T)),
        s.threads);
    for (Adversary a : mean_adversaries()) {
      const PowerEstimate p =
          power_at_fpr(records, records.stat_index(adversary_name(a)), alpha_level);
      by_T << adversary_name(a) << ',' << T << ',' << csv_double(alpha_level) << ','
           << csv_double(closed_form_power(a, alpha_level, setup.n, setup.m_star, T))
           << ',' << csv_double(p.power) << ',' << csv_double(p.se) << "\n";
    }
  }
  out.write("power_vs_T.csv", by_T.str());

  const std::vector<double> m_grid =
      cfg.get_doubles("power.mstar_grid", {0.25, 1.0, 2.25, 4.0, 6.25, 9.0});
  const int T = static_cast<int>(cfg.get_int("power.mstar_T", 5));
  if (T < 1) throw ConfigError("field power.mstar_T: must be >= 1");
  std::ostringstream by_m;
  by_m << "test,m_star,alpha_level,power_closed_form,power_mc,se_mc\n";
  int cell = 0;
  for (double m_star : m_grid) {
    if (m_star < 0.0) throw ConfigError("field power.mstar_grid: must be nonnegative");
    const MeanSetup setup = mean_setup(cfg, T, 0, m_star);
    MeanGameSpec spec{setup.schedule, setup.n, resolve_crafter(cfg, T, setup.target),
                      mean_adversaries()};
    const GameRecords records = run_mean_game(
        spec, rounds, derive_seed(s.seed, 2000 + static_cast<std::uint64_t>(cell++)),
        s.threads);
    for (Adversary a : mean_adversaries()) {
      const PowerEstimate p =
          power_at_fpr(records, records.stat_index(adversary_name(a)), alpha_level);
      by_m << adversary_name(a) << ',' << csv_double(m_star) << ','
           << csv_double(alpha_level) << ','
           << csv_double(closed_form_power(a, alpha_level, setup.n, setup.m_star, T))
           << ',' << csv_double(p.power) << ',' << csv_double(p.se) << "\n";
    }
  }
  out.write("power_vs_mstar.csv", by_m.str());
}

// ---------------------------------------------------------------------------
// roc / uniform-tau

void experiment_roc(const KvConfig& cfg, const RunSettings& s, OutputWriter& out,
                    bool force_uniform_tau) {
  const std::int64_t rounds = s.rounds > 0 ? s.rounds : 50000;
  const int T = static_cast<int>(cfg.get_int("mean.T", 10));
  if (T < 1) throw ConfigError("field mean.T: must be >= 1");
  const double fpr_level = resolve_fpr_level(cfg);
  const bool write_records = cfg.get_bool("experiment.write_records", false);

  const MeanSetup setup = mean_setup(cfg, T);
  CrafterConfig crafter = resolve_crafter(cfg, T, setup.target);
  if (force_uniform_tau) crafter.nu_tau = TauDistribution::uniform();

  MeanGameSpec spec{setup.schedule, setup.n, crafter, mean_adversaries()};
  const GameRecords records =
      run_mean_game(spec, rounds, derive_seed(s.seed, 3000), s.threads);

  std::ostringstream summary;
  summary << "adversary,auc,tpr_at_fpr,fpr_level,n0,n1\n";
  for (Adversary a : mean_adversaries()) {
    const RocCurve curve = roc_curve(records, records.stat_index(adversary_name(a)));
    std::ostringstream roc;
    write_roc_csv(curve, roc);
    out.write("roc_" + adversary_name(a) + ".csv", roc.str());
    summary << adversary_name(a) << ',' << csv_double(curve.auc) << ','
            << csv_double(tpr_at_fpr(curve, fpr_level)) << ',' << csv_double(fpr_level)
            << ',' << curve.n0 << ',' << curve.n1 << "\n";
  }
  out.write("summary.csv", summary.str());
  if (write_records) {
    std::ostringstream rec;
    records.write_csv(rec);
    out.write("records.csv", rec.str());
  }
}

// ---------------------------------------------------------------------------
// multivariate

void experiment_multivariate(const KvConfig& cfg, const RunSettings& s,
                             OutputWriter& out) {
  const std::int64_t rounds = s.rounds > 0 ? s.rounds : 50000;
  const int T = static_cast<int>(cfg.get_int("mean.T", 5));
  if (T < 1) throw ConfigError("field mean.T: must be >= 1");
  const double alpha_level = resolve_alpha_level(cfg);
  const std::vector<double> d_grid = cfg.get_doubles("mv.d_grid", {2, 10, 50});

  std::ostringstream power;
  power << "d,m_star,power_mc,se_mc,auc\n";
  for (double d_raw : d_grid) {
    const int d = static_cast<int>(d_raw);
    if (d < 1) throw ConfigError("field mv.d_grid: entries must be >= 1");
    const MeanSetup setup = mean_setup(cfg, T, d);
    MeanGameSpec spec{setup.schedule, setup.n, resolve_crafter(cfg, T, setup.target),
                      {Adversary::kLrTau}};
    const GameRecords records = run_mean_game(
        spec, rounds, derive_seed(s.seed, 4000 + static_cast<std::uint64_t>(d)),
        s.threads);
    const PowerEstimate p = power_at_fpr(records, 0, alpha_level);
    power << d << ',' << csv_double(setup.m_star) << ',' << csv_double(p.power) << ','
          << csv_double(p.se) << ',' << csv_double(p.auc) << "\n";
  }
  out.write("power_vs_dimension.csv", power.str());

  // Diagonal-case closed-form Type I error against Monte-Carlo.
  const int d_check = static_cast<int>(cfg.get_int("mv.alpha_check_d", 2));
  if (d_check < 1) throw ConfigError("field mv.alpha_check_d: must be >= 1");
  const MeanSetup setup = mean_setup(cfg, T, d_check);
  MeanGameSpec spec{setup.schedule, setup.n, resolve_crafter(cfg, T, setup.target),
                    {Adversary::kLrTau}};
  const GameRecords records =
      run_mean_game(spec, rounds, derive_seed(s.seed, 4500), s.threads);
  std::vector<double> null_stats;
  for (std::int64_t r = 0; r < records.rounds(); ++r) {
    if (records.b(r) == 0) null_stats.push_back(records.stat(0, r));
  }
  std::sort(null_stats.begin(), null_stats.end());

  const double g_hi = gamma_max_mv(setup.n, d_check, setup.m_star) - 0.5;
  std::ostringstream check;
  check << "gamma,alpha_closed_form,alpha_mc,se_mc\n";
  for (int i = 0; i < 10; ++i) {
    const double gamma = -5.0 + (g_hi + 5.0) * i / 9.0;
    const double closed = alpha_lr_mv_diag(gamma, setup.n, d_check, setup.m_star);
    const auto greater =
        null_stats.end() - std::upper_bound(null_stats.begin(), null_stats.end(), gamma);
    const double mc =
        static_cast<double>(greater) / static_cast<double>(null_stats.size());
    const double se = std::sqrt(std::max(closed * (1.0 - closed), 1e-12) /
                                static_cast<double>(null_stats.size()));
    check << csv_double(gamma) << ',' << csv_double(closed) << ',' << csv_double(mc)
          << ',' << csv_double(se) << "\n";
  }
  out.write("alpha_check.csv", check.str());
}

// ---------------------------------------------------------------------------
// sgd configuration

struct SgdDefaults {
  std::string problem = "linreg";
  int d = 5;
  int T = 10;
  int batch_size = 50;
  double eta = 0.05;
  double clip = kNoClip;
  int reference_size = 0;
};

struct SgdSetup {
  std::shared_ptr<const Problem> problem;
  SgdConfig config;
  Vec target;
  int reference_size = 0;
  double ridge = -1.0;
  bool account_dp_noise = true;
};

SgdSetup sgd_setup(const KvConfig& cfg, const SgdDefaults& defaults,
                   std::uint64_t seed) {
  SgdSetup setup;
  const std::string kind = cfg.get_string("sgd.problem", defaults.problem);
  const int d = static_cast<int>(cfg.get_int("sgd.d", defaults.d));
  if (d < 1) throw ConfigError("field sgd.d: must be >= 1");
  const int T = static_cast<int>(cfg.get_int("sgd.T", defaults.T));
  if (T < 1) throw ConfigError("field sgd.T: must be >= 1");
  const int n = static_cast<int>(cfg.get_int("sgd.batch_size", defaults.batch_size));
  if (n < 2) throw ConfigError("field sgd.batch_size: must be >= 2");
  const double eta = cfg.get_double("sgd.eta", defaults.eta);
  if (!(eta > 0.0)) throw ConfigError("field sgd.eta: must be positive");

  const Vec theta_base = resolve_vector(cfg, "sgd.theta_star", d, 1.0);
  const double perturbation = cfg.get_double("sgd.theta0_perturbation", 1.0);
  Vec theta0 = theta_base;
  theta0(0) += perturbation;  // unit-norm offset keeps step-1 gradients alive

  // Crafted-target knobs; only linear regression uses them.
  const double leverage = cfg.get_double("sgd_target.leverage", 4.0);
  const double residual = cfg.get_double("sgd_target.residual", 2.0);
  if (leverage < 0.0) throw ConfigError("field sgd_target.leverage: must be >= 0");
  const int pool_size = static_cast<int>(cfg.get_int("sgd_target.pool_size", 0));
  if (pool_size < 0) throw ConfigError("field sgd_target.pool_size: must be >= 0");

  if (kind == "linreg") {
    const double sigma_eps2 = cfg.get_double("sgd.sigma_eps2", 1.0);
    if (!(sigma_eps2 > 0.0)) throw ConfigError("field sgd.sigma_eps2: must be positive");
    auto problem =
        std::make_shared<LinRegProblem>(theta_base, Mat::Identity(d, d), sigma_eps2);
    Vec x_star = Vec::Zero(d);
    x_star(0) = std::sqrt(leverage);
    setup.target =
        problem->make_point(x_star, theta_base.dot(x_star) +
                                        residual * std::sqrt(sigma_eps2));
    setup.problem = std::move(problem);
  } else if (kind == "logreg") {
    cfg.get_double("sgd.sigma_eps2", 1.0);  // linreg-only, accepted and ignored
    setup.problem = std::make_shared<LogRegProblem>(theta_base, Mat::Identity(d, d));
  } else if (kind == "meanquad") {
    cfg.get_double("sgd.sigma_eps2", 1.0);
    setup.problem = std::make_shared<MeanQuadProblem>(
        GaussianParams(Vec::Zero(d), Mat::Identity(d, d)));
    theta0 = Vec::Zero(d);
  } else {
    throw ConfigError("field sgd.problem: expected linreg, logreg or meanquad");
  }

  setup.config = SgdConfig::constant(T, n, eta, theta0);
  setup.config.clip = cfg.get_double("sgd.clip", defaults.clip);
  if (!(setup.config.clip > 0.0)) throw ConfigError("field sgd.clip: must be positive");
  setup.config.noise_multiplier = cfg.get_double("sgd.noise_multiplier", 0.0);
  if (setup.config.noise_multiplier < 0.0) {
    throw ConfigError("field sgd.noise_multiplier: must be nonnegative");
  }
  setup.reference_size =
      static_cast<int>(cfg.get_int("sgd.reference_size", defaults.reference_size));
  if (setup.reference_size < 0 || setup.reference_size == 1) {
    throw ConfigError("field sgd.reference_size: must be 0 (exact) or >= 2");
  }
  setup.ridge = cfg.get_double("sgd.ridge", -1.0);
  setup.account_dp_noise = cfg.get_bool("sgd.account_dp_noise", true);

  // Pool-based target selection: pick the candidate with the largest gradient
  // Mahalanobis distance, estimated from a held-out reference set at theta0.
  // Problems without a crafted target always select from a pool.
  if (pool_size > 0 || kind == "logreg" || kind == "meanquad") {
    const int pool = pool_size > 0 ? pool_size : 256;
    const int selection_reference =
        setup.reference_size > 0 ? setup.reference_size : 1000;
    RngStream pool_stream(seed, 0xf00dULL);
    Mat candidates(pool, setup.problem->point_dim());
    for (int i = 0; i < pool; ++i) {
      candidates.row(i) = setup.problem->sample_point(pool_stream).transpose();
    }
    RngStream ref_stream(seed, 0xfeedULL);
    Mat reference(selection_reference, setup.problem->point_dim());
    for (int i = 0; i < selection_reference; ++i) {
      reference.row(i) = setup.problem->sample_point(ref_stream).transpose();
    }
    const GradientStats stats =
        estimate_grad_stats(*setup.problem, setup.config.theta0, reference,
                            setup.ridge, setup.config.clip);
    const auto [index, score] =
        select_target(candidates, setup.config.theta0, stats, *setup.problem);
    setup.target = candidates.row(index).transpose();
  }
  return setup;
}

// ---------------------------------------------------------------------------
// sgd-sim

void experiment_sgd_sim(const KvConfig& cfg, const RunSettings& s, OutputWriter& out) {
  const std::int64_t rounds = s.rounds > 0 ? s.rounds : 10000;
  const double fpr_level = resolve_fpr_level(cfg);
  const SgdSetup setup = sgd_setup(cfg, SgdDefaults{}, s.seed);
  const int T = setup.config.steps;

  SgdGameSpec spec;
  spec.problem = setup.problem;
  spec.sgd = setup.config;
  spec.crafter = resolve_crafter(cfg, T, setup.target);
  spec.adversaries = sgd_adversaries();
  spec.reference_size = setup.reference_size;
  spec.ridge = setup.ridge;
  spec.account_dp_noise = setup.account_dp_noise;

  const GameRecords records =
      run_sgd_game(spec, rounds, derive_seed(s.seed, 5000), s.threads);
  std::ostringstream summary;
  summary << "adversary,auc,tpr_at_fpr,fpr_level,n0,n1\n";
  for (Adversary a : sgd_adversaries()) {
    const RocCurve curve = roc_curve(records, records.stat_index(adversary_name(a)));
    std::ostringstream roc;
    write_roc_csv(curve, roc);
    out.write("roc_" + adversary_name(a) + ".csv", roc.str());
    summary << adversary_name(a) << ',' << csv_double(curve.auc) << ','
            << csv_double(tpr_at_fpr(curve, fpr_level)) << ',' << csv_double(fpr_level)
            << ',' << curve.n0 << ',' << curve.n1 << "\n";
  }
  out.write("auc_summary.csv", summary.str());

  std::ostringstream sweep;
  sweep << "tau,adversary,power,se\n";
  for (int tau = 1; tau <= T; ++tau) {
    SgdGameSpec tau_spec = spec;
    tau_spec.crafter.nu_tau = TauDistribution::point_mass(tau);
    const GameRecords tau_records = run_sgd_game(
        tau_spec, rounds, derive_seed(s.seed, 5100 + static_cast<std::uint64_t>(tau)),
        s.threads);
    for (Adversary a : sgd_adversaries()) {
      const PowerEstimate p = power_at_fpr(
          tau_records, tau_records.stat_index(adversary_name(a)), fpr_level);
      sweep << tau << ',' << adversary_name(a) << ',' << csv_double(p.power) << ','
            << csv_double(p.se) << "\n";
    }
  }
  out.write("power_vs_tau.csv", sweep.str());
}

// ---------------------------------------------------------------------------
// dpsgd-audit

void experiment_dpsgd_audit(const KvConfig& cfg, const RunSettings& s,
                            OutputWriter& out) {
  const std::int64_t rounds = s.rounds > 0 ? s.rounds : 2000;
  const double delta = cfg.get_double("audit.delta", 1e-4);
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ConfigError("field audit.delta: must be in (0, 1)");
  }
  const double xi = cfg.get_double("audit.xi", 0.05);
  if (!(xi > 0.0 && xi < 1.0)) throw ConfigError("field audit.xi: must be in (0, 1)");

  SgdDefaults defaults;
  defaults.problem = "logreg";
  defaults.d = 4;
  defaults.batch_size = 64;
  defaults.eta = 0.5;
  defaults.clip = 1.0;
  defaults.reference_size = 1000;
  const SgdSetup setup = sgd_setup(cfg, defaults, s.seed);
  const int T = setup.config.steps;
  if (!std::isfinite(setup.config.clip)) {
    throw ConfigError("field sgd.clip: dp-sgd requires a finite clip threshold");
  }

  const std::vector<std::string> eps_raw =
      cfg.get_strings("audit.epsilons", {"0.5", "1", "2", "4"});
  std::vector<double> epsilons;
  for (const auto& e : eps_raw) {
    if (e == "inf") {
      epsilons.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    try {
      epsilons.push_back(std::stod(e));
    } catch (const std::exception&) {
      throw ConfigError("field audit.epsilons: bad value '" + e + "'");
    }
    if (!(epsilons.back() > 0.0)) {
      throw ConfigError("field audit.epsilons: must be positive");
    }
  }

  std::vector<int> tau_grid;
  if (cfg.get_string("audit.tau_grid", "all") == "all") {
    for (int t = 1; t <= T; ++t) tau_grid.push_back(t);
  } else {
    for (double t : cfg.get_doubles("audit.tau_grid", {})) {
      const int tau = static_cast<int>(t);
      if (tau < 1 || tau > T) throw ConfigError("field audit.tau_grid: out of range");
      tau_grid.push_back(tau);
    }
  }

  nlohmann::ordered_json audits = nlohmann::ordered_json::array();
  std::ostringstream summary;
  summary << "epsilon_true,adversary,mean_eps_lb,max_eps_lb,tau_count\n";

  int eps_index = 0;
  for (double eps_true : epsilons) {
    const double sigma_dp =
        std::isinf(eps_true) ? 0.0 : noise_multiplier_for_epsilon(eps_true, T, delta);
    std::map<std::string, std::vector<double>> per_adversary;
    for (int tau : tau_grid) {
      SgdGameSpec spec;
      spec.problem = setup.problem;
      spec.sgd = setup.config;
      spec.sgd.noise_multiplier = sigma_dp;
      spec.crafter.nu_b = cfg.get_double("crafter.nu_b", 0.5);
      spec.crafter.nu_tau = TauDistribution::point_mass(tau);
      spec.crafter.target = setup.target;
      spec.adversaries = sgd_adversaries();
      spec.reference_size = setup.reference_size;
      spec.ridge = setup.ridge;
      spec.account_dp_noise = setup.account_dp_noise;

      const GameRecords records = run_sgd_game(
          spec, rounds,
          derive_seed(s.seed, 6000 + 100 * static_cast<std::uint64_t>(eps_index) +
                                  static_cast<std::uint64_t>(tau)),
          s.threads);
      for (Adversary a : sgd_adversaries()) {
        const AuditOutcome outcome = epsilon_lower_bound(
            records, records.stat_index(adversary_name(a)), delta, xi);
        per_adversary[adversary_name(a)].push_back(outcome.epsilon_lb);
        nlohmann::ordered_json j;
        j["epsilon_true"] = std::isinf(eps_true) ? nlohmann::ordered_json("inf")
                                                 : nlohmann::ordered_json(eps_true);
        j["tau"] = tau;
        j["adversary"] = adversary_name(a);
        j["epsilon_lb"] = outcome.epsilon_lb;
        j["gamma"] = std::isfinite(outcome.gamma)
                         ? nlohmann::ordered_json(outcome.gamma)
                         : nlohmann::ordered_json(outcome.gamma > 0 ? "inf" : "-inf");
        j["side"] = outcome.side;
        j["alpha_ucb"] = outcome.alpha_ucb;
        j["beta_ucb"] = outcome.beta_ucb;
        j["n0"] = outcome.n0;
        j["n1"] = outcome.n1;
        j["xi"] = outcome.xi;
        j["delta"] = outcome.delta;
        audits.push_back(std::move(j));
      }
    }
    for (Adversary a : sgd_adversaries()) {
      const auto& values = per_adversary[adversary_name(a)];
      const double mean =
          std::accumulate(values.begin(), values.end(), 0.0) / values.size();
      const double best = *std::max_element(values.begin(), values.end());
      summary << (std::isinf(eps_true) ? std::string("inf") : csv_double(eps_true))
              << ',' << adversary_name(a) << ',' << csv_double(mean) << ','
              << csv_double(best) << ',' << values.size() << "\n";
    }
    ++eps_index;
  }
  out.write("audits.json", audits.dump(2) + "\n");
  out.write("audit_summary.csv", summary.str());
}

// ---------------------------------------------------------------------------
// lr-trace

void experiment_lr_trace(const KvConfig& cfg, const RunSettings& s, OutputWriter& out) {
  const std::int64_t rounds = s.rounds > 0 ? s.rounds : 2000;
  const int T = static_cast<int>(cfg.get_int("mean.T", 10));
  if (T < 1) throw ConfigError("field mean.T: must be >= 1");
  const MeanSetup setup = mean_setup(cfg, T);
  CrafterConfig crafter = resolve_crafter(cfg, T, setup.target);
  if (!crafter.nu_tau.is_point()) {
    throw ConfigError("field crafter.nu_tau: lr-trace needs a point-mass insertion time");
  }
  const int tau = crafter.nu_tau.point();
  const GaussianParams& dist = setup.schedule.at(1);

  std::ostringstream os;
  os << "t,test,hypothesis,mean,sd\n";
  for (int hyp = 0; hyp <= 1; ++hyp) {
    std::vector<std::vector<double>> lr_stats(rounds), fo_stats(rounds);
    parallel_rounds(rounds, s.threads, [&](std::int64_t r) {
      RngStream stream(derive_seed(s.seed, 7000 + static_cast<std::uint64_t>(hyp)),
                       static_cast<std::uint64_t>(r));
      CrafterDraw draw;
      draw.b = hyp;
      draw.tau = tau;
      draw.replaced_index =
          static_cast<int>(stream.uniform_int(static_cast<std::uint64_t>(setup.n))) + 1;
      const MeanTrace trace = run_mean_mechanism(
          setup.schedule, setup.n, insertion_from_draw(draw, setup.target), stream);
      std::vector<double> lr_vals(T), fo_vals(T);
      const double lr_at_tau = loglr_batch_mean_mv(recover_batch_mean(trace, tau), dist,
                                                   setup.n, setup.target);
      for (int t = 1; t <= T; ++t) {
        // Statistic after observing the first t outputs; before the insertion
        // step both hypotheses agree and the log-LR is 0.
        lr_vals[t - 1] = t >= tau ? lr_at_tau : 0.0;
        fo_vals[t - 1] = loglr_final_obs_mv(trace.values.row(t - 1).transpose(), dist,
                                            setup.n, t, setup.target);
      }
      lr_stats[r] = std::move(lr_vals);
      fo_stats[r] = std::move(fo_vals);
    });
    const char* hyp_name = hyp == 0 ? "H0" : "H1";
    for (int test = 0; test < 2; ++test) {
      const auto& stats = test == 0 ? lr_stats : fo_stats;
      for (int t = 1; t <= T; ++t) {
        double sum = 0.0, sum_sq = 0.0;
        for (std::int64_t r = 0; r < rounds; ++r) {
          sum += stats[r][t - 1];
          sum_sq += stats[r][t - 1] * stats[r][t - 1];
        }
        const double mean = sum / static_cast<double>(rounds);
        const double var =
            std::max(0.0, sum_sq / static_cast<double>(rounds) - mean * mean);
        os << t << ',' << (test == 0 ? "lr_tau" : "final_obs") << ',' << hyp_name << ','
           << csv_double(mean) << ',' << csv_double(std::sqrt(var)) << "\n";
      }
    }
  }
  out.write("lr_trace.csv", os.str());
}

// ---------------------------------------------------------------------------
// tau-sweep

void experiment_tau_sweep(const KvConfig& cfg, const RunSettings& s, OutputWriter& out) {
  const std::int64_t rounds = s.rounds > 0 ? s.rounds : 50000;
  const int T = static_cast<int>(cfg.get_int("mean.T", 10));
  if (T < 1) throw ConfigError("field mean.T: must be >= 1");
  const double alpha_level = resolve_alpha_level(cfg);
  const MeanSetup setup = mean_setup(cfg, T);
  const double nu_b = cfg.get_double("crafter.nu_b", 0.5);
  if (nu_b < 0.0 || nu_b > 1.0) throw ConfigError("field crafter.nu_b: must be in [0, 1]");

  std::ostringstream os;
  os << "tau,adversary,power,se\n";
  for (int tau = 1; tau <= T; ++tau) {
    CrafterConfig crafter;
    crafter.nu_b = nu_b;
    crafter.nu_tau = TauDistribution::point_mass(tau);
    crafter.target = setup.target;
    MeanGameSpec spec{setup.schedule, setup.n, crafter, mean_adversaries()};
    const GameRecords records = run_mean_game(
        spec, rounds, derive_seed(s.seed, 8000 + static_cast<std::uint64_t>(tau)),
        s.threads);
    for (Adversary a : mean_adversaries()) {
      const PowerEstimate p =
          power_at_fpr(records, records.stat_index(adversary_name(a)), alpha_level);
      os << tau << ',' << adversary_name(a) << ',' << csv_double(p.power) << ','
         << csv_double(p.se) << "\n";
    }
  }
  out.write("tau_sweep.csv", os.str());
}

}  // namespace

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds = {
      "mean-power", "roc",         "uniform-tau", "multivariate",
      "sgd-sim",    "dpsgd-audit", "lr-trace",    "tau-sweep"};
  return kinds;
}

ExperimentResult run_experiment(const std::string& kind, const KvConfig& config) {
  const auto& kinds = experiment_kinds();
  if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end()) {
    throw ConfigError("unknown experiment kind: " + kind);
  }
  const RunSettings settings = run_settings(config);
  OutputWriter out;

  if (kind == "mean-power") {
    experiment_mean_power(config, settings, out);
  } else if (kind == "roc") {
    experiment_roc(config, settings, out, /*force_uniform_tau=*/false);
  } else if (kind == "uniform-tau") {
    experiment_roc(config, settings, out, /*force_uniform_tau=*/true);
  } else if (kind == "multivariate") {
    experiment_multivariate(config, settings, out);
  } else if (kind == "sgd-sim") {
    experiment_sgd_sim(config, settings, out);
  } else if (kind == "dpsgd-audit") {
    experiment_dpsgd_audit(config, settings, out);
  } else if (kind == "lr-trace") {
    experiment_lr_trace(config, settings, out);
  } else {
    experiment_tau_sweep(config, settings, out);
  }

  const auto unknown = config.untouched_keys();
  if (!unknown.empty()) {
    throw ConfigError("unknown config field: " + unknown.front());
  }

  ExperimentResult result;
  result.directory = settings.out / kind / settings.label;
  result.files = out.flush(result.directory, kind, settings, config);
  return result;
}

}  // namespace seqmi
