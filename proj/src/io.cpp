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

#include "qbayes/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qbayes {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw io_error(std::string("failed to parse ") + what + " from '" + s + "'");
  }
}

double parse_double(const std::string& s, const char* what) {
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw io_error(std::string("failed to parse ") + what + " from '" + s + "'");
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

json density_matrix_to_json(const DensityMatrix& dm) {
  json entries = json::array();
  const CMatrix& m = dm.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      entries.push_back({m(i, j).real(), m(i, j).imag()});
    }
  }
  return json{{"n_qubits", dm.n_qubits()}, {"matrix", std::move(entries)}};
}

DensityMatrix density_matrix_from_json(const json& j) {
  if (!j.contains("n_qubits") || !j.contains("matrix")) {
    throw io_error("density matrix JSON: missing n_qubits or matrix");
  }
  const int n = j.at("n_qubits").get<int>();
  if (n < 1 || n > 16) throw io_error("density matrix JSON: bad n_qubits");
  const Eigen::Index d = Eigen::Index(1) << n;
  const json& entries = j.at("matrix");
  if (!entries.is_array() || entries.size() != static_cast<std::size_t>(d * d)) {
    throw io_error("density matrix JSON: matrix must hold 4^n (re, im) pairs");
  }
  CMatrix m(d, d);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index jj = 0; jj < d; ++jj) {
      const json& pair = entries[k++];
      if (!pair.is_array() || pair.size() != 2) {
        throw io_error("density matrix JSON: entries must be (re, im) pairs");
      }
      m(i, jj) = Complex(pair[0].get<double>(), pair[1].get<double>());
    }
  }
  return DensityMatrix::from_matrix(n, std::move(m));
}

void save_density_matrix(const std::filesystem::path& path, const DensityMatrix& dm) {
  write_json_file(path, density_matrix_to_json(dm));
}

DensityMatrix load_density_matrix(const std::filesystem::path& path) {
  return density_matrix_from_json(read_json_file(path));
}

void save_record_csv(const std::filesystem::path& path, const MeasurementRecord& rec) {
  rec.validate();
  std::string out;
  out += "n_qubits," + std::to_string(rec.n_qubits) + "\n";
  out += "total_m," + std::to_string(rec.total_m) + "\n";
  out += "flat_index,count\n";
  for (std::size_t k = 0; k < rec.counts.size(); ++k) {
    out += std::to_string(k) + "," + std::to_string(rec.counts[k]) + "\n";
  }
  write_text_file(path, out);
}

MeasurementRecord load_record_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  MeasurementRecord rec;

  if (!std::getline(in, line)) throw io_error("record CSV: empty file");
  auto cells = split_csv_line(line);
  if (cells.size() != 2 || cells[0] != "n_qubits") {
    throw io_error("record CSV: expected 'n_qubits,<n>' header");
  }
  rec.n_qubits = static_cast<int>(parse_u64(cells[1], "n_qubits"));

  if (!std::getline(in, line)) throw io_error("record CSV: missing total_m");
  cells = split_csv_line(line);
  if (cells.size() != 2 || cells[0] != "total_m") {
    throw io_error("record CSV: expected 'total_m,<m>' header");
  }
  rec.total_m = parse_u64(cells[1], "total_m");

  if (!std::getline(in, line) || split_csv_line(line)[0] != "flat_index") {
    throw io_error("record CSV: missing column header");
  }

  rec.counts.assign(std::size_t(1) << (2 * rec.n_qubits), 0);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    cells = split_csv_line(line);
    if (cells.size() != 2) throw io_error("record CSV: malformed row '" + line + "'");
    const std::uint64_t idx = parse_u64(cells[0], "flat_index");
    if (idx >= rec.counts.size()) throw io_error("record CSV: flat_index out of range");
    rec.counts[idx] = parse_u64(cells[1], "count");
  }
  rec.validate();
  return rec;
}

void save_chain_csv(const std::filesystem::path& path, const PosteriorChain& chain) {
  std::string out = "step_index,n1,n2,log_likelihood\n";
  for (std::size_t i = 0; i < chain.samples.size(); ++i) {
    out += std::to_string(chain.sample_steps[i]) + "," +
           format_double(chain.samples[i].n1) + "," +
           format_double(chain.samples[i].n2) + "," +
           format_double(chain.log_likelihood_trace[i]) + "\n";
  }
  write_text_file(path, out);
}

std::vector<ChainCsvRow> load_chain_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line)[0] != "step_index") {
    throw io_error("chain CSV: missing header");
  }
  std::vector<ChainCsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != 4) throw io_error("chain CSV: malformed row '" + line + "'");
    rows.push_back({parse_u64(cells[0], "step_index"),
                    parse_double(cells[1], "n1"), parse_double(cells[2], "n2"),
                    parse_double(cells[3], "log_likelihood")});
  }
  return rows;
}

json prior_spec_to_json(const PriorSpec& spec) {
  return json{{"kind", spec.kind == PriorKind::Z ? "Z" : "GH"},
              {"mixed", spec.mixed},
              {"beta", spec.beta}};
}

PriorSpec prior_spec_from_json(const json& j) {
  if (!j.contains("kind")) throw validation_error("priors.kind", "missing");
  const std::string kind = j.at("kind").get<std::string>();
  PriorSpec spec;
  if (kind == "Z") {
    spec = PriorSpec::z();
  } else if (kind == "GH") {
    spec = PriorSpec::gh();
  } else {
    throw validation_error("priors.kind", "must be 'Z' or 'GH'");
  }
  if (j.contains("mixed")) spec.mixed = j.at("mixed").get<bool>();
  if (j.contains("beta")) spec.beta = j.at("beta").get<double>();
  spec.validate();
  return spec;
}

json chain_config_to_json(const ChainConfig& cfg) {
  return json{{"total_steps", cfg.total_steps},
              {"burn_in", cfg.burn_in},
              {"thinning", cfg.thinning},
              {"target_acceptance", {cfg.target_acceptance.lo, cfg.target_acceptance.hi}},
              {"initial_step_size", cfg.initial_step_size},
              {"seed", cfg.seed},
              {"warm_start", cfg.warm_start}};
}

ChainConfig chain_config_from_json(const json& j) {
  ChainConfig cfg;
  if (j.contains("total_steps")) cfg.total_steps = j.at("total_steps").get<std::uint64_t>();
  if (j.contains("burn_in")) cfg.burn_in = j.at("burn_in").get<std::uint64_t>();
  if (j.contains("thinning")) cfg.thinning = j.at("thinning").get<std::uint64_t>();
  if (j.contains("target_acceptance")) {
    const json& w = j.at("target_acceptance");
    if (!w.is_array() || w.size() != 2) {
      throw validation_error("chain.target_acceptance", "expected [lo, hi]");
    }
    cfg.target_acceptance.lo = w[0].get<double>();
    cfg.target_acceptance.hi = w[1].get<double>();
  }
  if (j.contains("initial_step_size")) {
    cfg.initial_step_size = j.at("initial_step_size").get<double>();
  }
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("warm_start")) cfg.warm_start = j.at("warm_start").get<bool>();
  cfg.validate();
  return cfg;
}

std::string measure_name(Measure m) { return m == Measure::N1 ? "N1" : "N2"; }

std::string source_name(SummarySource s) {
  switch (s) {
    case SummarySource::Z:
      return "Z";
    case SummarySource::GH:
      return "GH";
    case SummarySource::MleBootstrap:
      return "MLE_BOOTSTRAP";
  }
  return "?";
}

json summary_to_json(const PosteriorSummary& s) {
  return json{{"source", source_name(s.source)}, {"m", s.m},
              {"mean_n1", s.mean_n1},           {"err_n1", s.err_n1},
              {"mean_n2", s.mean_n2},           {"err_n2", s.err_n2}};
}

PosteriorSummary summary_from_json(const json& j) {
  PosteriorSummary s;
  const std::string src = j.at("source").get<std::string>();
  if (src == "Z") {
    s.source = SummarySource::Z;
  } else if (src == "GH") {
    s.source = SummarySource::GH;
  } else if (src == "MLE_BOOTSTRAP") {
    s.source = SummarySource::MleBootstrap;
  } else {
    throw io_error("summary JSON: unknown source '" + src + "'");
  }
  s.m = j.at("m").get<std::uint64_t>();
  s.mean_n1 = j.at("mean_n1").get<double>();
  s.err_n1 = j.at("err_n1").get<double>();
  s.mean_n2 = j.at("mean_n2").get<double>();
  s.err_n2 = j.at("err_n2").get<double>();
  return s;
}

json criterion_report_to_json(const CriterionReport& r) {
  return json{{"m", r.m},
              {"gap", r.gap},
              {"budget", r.budget},
              {"satisfied", r.satisfied},
              {"which", r.which == CriterionKind::C1 ? "C1" : "C1_5"},
              {"measure", measure_name(r.measure)}};
}

CriterionReport criterion_report_from_json(const json& j) {
  CriterionReport r;
  r.m = j.at("m").get<std::uint64_t>();
  r.gap = j.at("gap").get<double>();
  r.budget = j.at("budget").get<double>();
  r.satisfied = j.at("satisfied").get<bool>();
  const std::string which = j.at("which").get<std::string>();
  if (which == "C1") {
    r.which = CriterionKind::C1;
  } else if (which == "C1_5") {
    r.which = CriterionKind::C1_5;
  } else {
    throw io_error("criterion JSON: unknown kind '" + which + "'");
  }
  r.measure = j.at("measure").get<std::string>() == "N1" ? Measure::N1 : Measure::N2;
  return r;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw io_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

json read_json_file(const std::filesystem::path& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw io_error("invalid JSON in " + path.string() + ": " + e.what());
  }
}

}  // namespace qbayes
