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

#ifndef SEQMI_EXPERIMENTS_HPP_
#define SEQMI_EXPERIMENTS_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "seqmi/config.hpp"

namespace seqmi {

// Experiment kinds: mean-power, roc, uniform-tau, multivariate, sgd-sim,
// dpsgd-audit, lr-trace, tau-sweep.
const std::vector<std::string>& experiment_kinds();

struct ExperimentResult {
  std::filesystem::path directory;
  std::vector<std::string> files;  // relative to directory, manifest last
};

// Validates the configuration, runs the experiment and writes its CSV/JSON
// outputs plus a manifest.json under <out>/<kind>/<label>/. Every output is a
// pure function of (config, seed): re-running yields byte-identical files.
// Throws ConfigError for invalid configurations before writing anything.
ExperimentResult run_experiment(const std::string& kind, const KvConfig& config);

}  // namespace seqmi

#endif  // SEQMI_EXPERIMENTS_HPP_
