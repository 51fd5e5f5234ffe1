// Copyright 2026 the qbayes authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "qbayes/io.hpp"

namespace qbayes {

struct TrueStateSpec {
  enum class Kind { WNoise, Smolin, File };
  Kind kind = Kind::WNoise;
  double q = 0.6;               // w_noise only
  std::filesystem::path path;   // file only

  std::string to_string() const;            // "w_noise:0.6" | "smolin" | "file:..."
  static TrueStateSpec parse(const std::string& text);
};

/// One sweep: for each (m, trial) simulate a record, run one chain per prior,
/// run MLE + bootstrap, and persist everything under output_dir.
struct ExperimentConfig {
  TrueStateSpec true_state;
  int n_qubits = 2;
  std::vector<std::uint64_t> m_values;
  std::vector<PriorSpec> priors;
  ChainConfig chain;
  int bootstrap_resamples = 100;
  int trials_per_m = 10;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "out";
  int workers = 1;

  /// Throws validation_error carrying the offending field path.
  void validate() const;
  static ExperimentConfig from_json(const json& j);
  /// Echoes every default so the manifest is diffable.
  json to_json() const;
  DensityMatrix build_true_state() const;
};

struct ExperimentResult {
  std::filesystem::path output_dir;
  json report;  // contents of report/criteria.json
};

/// Runs the sweep. Completed (m, trial) cells -- marked by their
/// summaries.json -- are skipped on re-run, and cell seeds derive from
/// (seed, m index, trial), so resuming or changing worker count never
/// changes any output byte.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Aggregates stored per-cell summaries into report/criteria.json and
/// report/sweep.csv. Pure function of the files under output_dir; re-running
/// it never changes numbers.
json build_report(const std::filesystem::path& output_dir);

}  // namespace qbayes
