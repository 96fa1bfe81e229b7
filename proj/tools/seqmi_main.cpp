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

// Command-line front end. Thin wrapper over the shared library's C API:
// it merges a config file with flag overrides and dispatches one experiment.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seqmi.h"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitNumericError = 3;

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::string label;
  std::uint64_t seed = 0;
  std::int64_t rounds = -1;
  int threads = -1;
  bool seed_given = false;
  std::vector<std::string> overrides;
};

void add_common_options(CLI::App* cmd, CommonOptions* opts) {
  cmd->add_option("--config", opts->config_path, "Config file (key = value, INI sections)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", opts->seed, "Master seed")->each([opts](const std::string&) {
    opts->seed_given = true;
  });
  cmd->add_option("--rounds", opts->rounds, "Monte-Carlo rounds R");
  cmd->add_option("--out", opts->out_dir, "Output directory root");
  cmd->add_option("--threads", opts->threads, "Worker threads (0 = hardware)");
  cmd->add_option("--label", opts->label, "Run label (output subdirectory)");
  cmd->add_option("--set", opts->overrides,
                  "Extra overrides as section.key=value (repeatable)");
}

int run(const std::string& kind, const CommonOptions& opts) {
  std::ostringstream config;
  if (!opts.config_path.empty()) {
    std::ifstream in(opts.config_path);
    if (!in) {
      std::cerr << "error: cannot read config file " << opts.config_path << "\n";
      return kExitConfigError;
    }
    config << in.rdbuf() << "\n";
  }
  // Flags come last so they override file values.
  config << "experiment.kind = " << kind << "\n";
  if (opts.seed_given) config << "experiment.seed = " << opts.seed << "\n";
  if (opts.rounds >= 0) config << "experiment.rounds = " << opts.rounds << "\n";
  if (!opts.out_dir.empty()) config << "experiment.out = " << opts.out_dir << "\n";
  if (opts.threads >= 0) config << "experiment.threads = " << opts.threads << "\n";
  if (!opts.label.empty()) config << "experiment.label = " << opts.label << "\n";
  for (const auto& kv : opts.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --set expects key=value, got '" << kv << "'\n";
      return kExitConfigError;
    }
    config << kv.substr(0, eq) << " = " << kv.substr(eq + 1) << "\n";
  }

  const seqmi_status status = seqmi_run_experiment(kind.c_str(), config.str().c_str());
  if (status == SEQMI_OK) return 0;
  std::cerr << "error: " << seqmi_last_error() << "\n";
  if (status == SEQMI_ERR_NUMERIC) return kExitNumericError;
  return kExitConfigError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential membership-inference tests and privacy audits"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(seqmi_version()));

  struct Sub {
    const char* name;
    const char* help;
  };
  const std::vector<Sub> subs = {
      {"mean-power", "Power of the batch-mean tests vs T and vs signal strength"},
      {"roc", "ROC curves for the batch-mean tests"},
      {"uniform-tau", "ROC curves with a uniformly random insertion time"},
      {"multivariate", "Power across data dimensions at fixed signal strength"},
      {"sgd-sim", "Gradient-descent attack comparison on a synthetic problem"},
      {"dpsgd-audit", "Privacy lower bounds for DP-SGD across privacy levels"},
      {"lr-trace", "Statistic trajectories as updates are observed"},
      {"tau-sweep", "Power of each test against the insertion time"},
  };

  std::vector<CommonOptions> options(subs.size());
  std::vector<CLI::App*> commands;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    CLI::App* cmd = app.add_subcommand(subs[i].name, subs[i].help);
    add_common_options(cmd, &options[i]);
    commands.push_back(cmd);
  }

  CLI11_PARSE(app, argc, argv);

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (commands[i]->parsed()) return run(subs[i].name, options[i]);
  }
  return kExitConfigError;
}
