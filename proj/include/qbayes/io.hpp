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

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qbayes/criteria.hpp"
#include "qbayes/sampler.hpp"

namespace qbayes {

using json = nlohmann::json;

/// %.17g: exact round trip and byte-stable output.
std::string format_double(double x);

// ---- DensityMatrix: JSON, row-major (re, im) pairs with n_qubits header ----

json density_matrix_to_json(const DensityMatrix& dm);
DensityMatrix density_matrix_from_json(const json& j);
void save_density_matrix(const std::filesystem::path& path, const DensityMatrix& dm);
DensityMatrix load_density_matrix(const std::filesystem::path& path);

// ---- MeasurementRecord: CSV with (n_qubits, total_m) header rows ----

void save_record_csv(const std::filesystem::path& path, const MeasurementRecord& rec);
MeasurementRecord load_record_csv(const std::filesystem::path& path);

// ---- PosteriorChain: CSV rows (step_index, n1, n2, log_likelihood) ----

void save_chain_csv(const std::filesystem::path& path, const PosteriorChain& chain);

struct ChainCsvRow {
  std::uint64_t step_index;
  double n1;
  double n2;
  double log_likelihood;
};
std::vector<ChainCsvRow> load_chain_csv(const std::filesystem::path& path);

// ---- JSON converters for config and report types ----

json prior_spec_to_json(const PriorSpec& spec);
PriorSpec prior_spec_from_json(const json& j);

json chain_config_to_json(const ChainConfig& cfg);
ChainConfig chain_config_from_json(const json& j);

json summary_to_json(const PosteriorSummary& s);
PosteriorSummary summary_from_json(const json& j);

json criterion_report_to_json(const CriterionReport& r);
CriterionReport criterion_report_from_json(const json& j);

std::string measure_name(Measure m);
std::string source_name(SummarySource s);

// ---- file helpers (throw io_error) ----

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);
json read_json_file(const std::filesystem::path& path);

}  // namespace qbayes
