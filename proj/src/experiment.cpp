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

#include "qbayes/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <map>
#include <mutex>
#include <thread>

#include "qbayes/kernels.hpp"

namespace qbayes {

namespace fs = std::filesystem;

namespace {

// seed-tree tags (master -> per-m -> per-trial -> role)
constexpr std::uint64_t kRecordTag = 0x5ec07d;
constexpr std::uint64_t kChainTag = 0xc4a17;
constexpr std::uint64_t kBootTag = 0xb0075;

constexpr const char* kVersion = "0.1.0";

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string trial_name(int t) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "t%03d", t);
  return buf;
}

fs::path cell_dir(const fs::path& out, std::uint64_t m, int trial) {
  return out / "cells" / ("m" + std::to_string(m)) / trial_name(trial);
}

SummarySource source_of(PriorKind kind) {
  return kind == PriorKind::Z ? SummarySource::Z : SummarySource::GH;
}

struct CellTask {
  std::size_t m_index;
  int trial;
};

void run_cell(const ExperimentConfig& config, const DensityMatrix& truth,
              const SicPovm& povm, const CellTask& task) {
  const std::uint64_t m = config.m_values[task.m_index];
  const fs::path dir = cell_dir(config.output_dir, m, task.trial);
  if (fs::exists(dir / "summaries.json")) return;  // resumable sweep
  fs::create_directories(dir);

  const std::uint64_t mi = static_cast<std::uint64_t>(task.m_index);
  const std::uint64_t ti = static_cast<std::uint64_t>(task.trial);

  Rng record_rng(derive_seed(config.seed, {kRecordTag, mi, ti}));
  const MeasurementRecord record = simulate_counts(truth, povm, m, record_rng);
  save_record_csv(dir / "record.csv", record);

  json summaries = json::object();
  std::vector<std::pair<std::string, PosteriorSummary>> prior_summaries;
  for (std::size_t pi = 0; pi < config.priors.size(); ++pi) {
    const PriorSpec& prior = config.priors[pi];
    ChainConfig cc = config.chain;
    cc.seed = derive_seed(config.seed, {kChainTag, mi, ti, pi});
    const PosteriorChain chain = mh_chain(prior, record, povm, cc);
    const std::string label = prior.label();
    save_chain_csv(dir / ("chain_" + label + ".csv"), chain);
    write_json_file(dir / ("chain_" + label + ".meta.json"),
                    json{{"prior", prior_spec_to_json(prior)},
                         {"config", chain_config_to_json(cc)},
                         {"acceptance_rate", chain.acceptance_rate},
                         {"final_step_size", chain.final_step_size},
                         {"n_samples", chain.samples.size()}});
    const PosteriorSummary summ = summarize(chain.samples, source_of(prior.kind), m);
    summaries[label] = summary_to_json(summ);
    prior_summaries.emplace_back(label, summ);
  }

  const DensityMatrix rho_mle = mle_estimate(record, povm);
  save_density_matrix(dir / "rho_mle.json", rho_mle);
  Rng boot_rng(derive_seed(config.seed, {kBootTag, mi, ti}));
  const std::vector<NegativityPair> boots = bootstrap_negativity(
      rho_mle, povm, m, config.bootstrap_resamples, boot_rng);
  {
    std::string csv = "resample_index,n1,n2\n";
    for (std::size_t i = 0; i < boots.size(); ++i) {
      csv += std::to_string(i) + "," + format_double(boots[i].n1) + "," +
             format_double(boots[i].n2) + "\n";
    }
    write_text_file(dir / "bootstrap.csv", csv);
  }
  const PosteriorSummary mle_summ =
      summarize(boots, SummarySource::MleBootstrap, m);
  summaries["MLE"] = summary_to_json(mle_summ);
  const NegativityPair mle_point = negativity_pair(rho_mle);

  json criteria = json::array();
  const auto find_kind = [&](PriorKind k) -> const PosteriorSummary* {
    for (std::size_t pi = 0; pi < config.priors.size(); ++pi) {
      if (config.priors[pi].kind == k) return &prior_summaries[pi].second;
    }
    return nullptr;
  };
  const PosteriorSummary* sz = find_kind(PriorKind::Z);
  const PosteriorSummary* sgh = find_kind(PriorKind::GH);
  for (Measure measure : {Measure::N1, Measure::N2}) {
    if (sz && sgh) {
      criteria.push_back(criterion_report_to_json(criterion_1(*sz, *sgh, measure)));
    }
  }
  json c15 = json::object();
  for (const auto& [label, summ] : prior_summaries) {
    json per_measure = json::array();
    for (Measure measure : {Measure::N1, Measure::N2}) {
      per_measure.push_back(
          criterion_report_to_json(criterion_1_5(summ, mle_summ, measure)));
    }
    c15[label] = std::move(per_measure);
  }

  json cell{{"m", m},
            {"trial", task.trial},
            {"summaries", std::move(summaries)},
            {"criterion_1", std::move(criteria)},
            {"criterion_1_5", std::move(c15)},
            {"mle_point", {{"n1", mle_point.n1}, {"n2", mle_point.n2}}}};

  // write through a temp name so an interrupted run never leaves a
  // half-written completion marker
  const fs::path tmp = dir / "summaries.json.tmp";
  write_json_file(tmp, cell);
  fs::rename(tmp, dir / "summaries.json");
}

}  // namespace

std::string TrueStateSpec::to_string() const {
  switch (kind) {
    case Kind::WNoise:
      return "w_noise:" + format_double(q);
    case Kind::Smolin:
      return "smolin";
    case Kind::File:
      return "file:" + path.string();
  }
  return "?";
}

TrueStateSpec TrueStateSpec::parse(const std::string& text) {
  TrueStateSpec spec;
  if (text == "smolin") {
    spec.kind = Kind::Smolin;
    return spec;
  }
  if (text.rfind("w_noise:", 0) == 0) {
    spec.kind = Kind::WNoise;
    try {
      spec.q = std::stod(text.substr(8));
    } catch (const std::exception&) {
      throw validation_error("true_state", "cannot parse q in '" + text + "'");
    }
    return spec;
  }
  if (text.rfind("file:", 0) == 0) {
    spec.kind = Kind::File;
    spec.path = text.substr(5);
    return spec;
  }
  throw validation_error("true_state",
                         "expected 'w_noise:<q>', 'smolin' or 'file:<path>'");
}

void ExperimentConfig::validate() const {
  if (n_qubits < 1 || n_qubits > 5) {
    throw validation_error("n_qubits", "must lie in [1, 5]");
  }
  if (true_state.kind == TrueStateSpec::Kind::WNoise &&
      !(true_state.q >= 0.0 && true_state.q <= 1.0)) {
    throw validation_error("true_state.q", "must lie in [0, 1]");
  }
  if (true_state.kind == TrueStateSpec::Kind::Smolin && n_qubits != 4) {
    throw validation_error("true_state", "smolin state requires n_qubits = 4");
  }
  if (m_values.empty()) throw validation_error("m_values", "must be nonempty");
  for (std::size_t i = 0; i < m_values.size(); ++i) {
    if (m_values[i] < 1) throw validation_error("m_values", "entries must be positive");
    if (i > 0 && m_values[i] <= m_values[i - 1]) {
      throw validation_error("m_values", "must be strictly increasing");
    }
  }
  if (priors.empty()) throw validation_error("priors", "must be nonempty");
  for (std::size_t i = 0; i < priors.size(); ++i) {
    try {
      priors[i].validate();
    } catch (const argument_error& e) {
      throw validation_error("priors[" + std::to_string(i) + "]", e.what());
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (priors[j].label() == priors[i].label()) {
        throw validation_error("priors", "duplicate prior '" + priors[i].label() + "'");
      }
    }
  }
  try {
    chain.validate();
  } catch (const argument_error& e) {
    throw validation_error("chain", e.what());
  }
  if (bootstrap_resamples < 2) {
    throw validation_error("bootstrap_resamples", "must be at least 2");
  }
  if (trials_per_m < 1) throw validation_error("trials_per_m", "must be at least 1");
  if (workers < 1) throw validation_error("workers", "must be at least 1");
  if (output_dir.empty()) throw validation_error("output_dir", "must be set");
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig cfg;
  if (!j.contains("true_state")) throw validation_error("true_state", "missing");
  cfg.true_state = TrueStateSpec::parse(j.at("true_state").get<std::string>());
  if (!j.contains("n_qubits")) throw validation_error("n_qubits", "missing");
  cfg.n_qubits = j.at("n_qubits").get<int>();
  if (!j.contains("m_values")) throw validation_error("m_values", "missing");
  cfg.m_values = j.at("m_values").get<std::vector<std::uint64_t>>();
  if (!j.contains("priors")) throw validation_error("priors", "missing");
  cfg.priors.clear();
  for (const json& pj : j.at("priors")) cfg.priors.push_back(prior_spec_from_json(pj));
  if (j.contains("chain")) {
    try {
      cfg.chain = chain_config_from_json(j.at("chain"));
    } catch (const argument_error& e) {
      throw validation_error("chain", e.what());
    }
  }
  if (j.contains("bootstrap_resamples")) {
    cfg.bootstrap_resamples = j.at("bootstrap_resamples").get<int>();
  }
  if (j.contains("trials_per_m")) cfg.trials_per_m = j.at("trials_per_m").get<int>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("output_dir")) {
    cfg.output_dir = j.at("output_dir").get<std::string>();
  }
  if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
  cfg.validate();
  return cfg;
}

json ExperimentConfig::to_json() const {
  json priors_json = json::array();
  for (const PriorSpec& p : priors) priors_json.push_back(prior_spec_to_json(p));
  return json{{"true_state", true_state.to_string()},
              {"n_qubits", n_qubits},
              {"m_values", m_values},
              {"priors", std::move(priors_json)},
              {"chain", chain_config_to_json(chain)},
              {"bootstrap_resamples", bootstrap_resamples},
              {"trials_per_m", trials_per_m},
              {"seed", seed},
              {"output_dir", output_dir.string()},
              {"workers", workers}};
}

DensityMatrix ExperimentConfig::build_true_state() const {
  switch (true_state.kind) {
    case TrueStateSpec::Kind::WNoise:
      return w_noise_state(true_state.q, n_qubits);
    case TrueStateSpec::Kind::Smolin:
      return smolin_state();
    case TrueStateSpec::Kind::File: {
      DensityMatrix dm = load_density_matrix(true_state.path);
      if (dm.n_qubits() != n_qubits) {
        throw validation_error("true_state",
                               "state file qubit count does not match n_qubits");
      }
      return dm;
    }
  }
  throw validation_error("true_state", "unknown kind");
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  fs::create_directories(config.output_dir);

  json manifest{{"config", config.to_json()},
                {"seed", config.seed},
                {"version", kVersion},
                {"kernel_backend",
                 std::string(kernels::backend_name(kernels::active_backend()))}};
  manifest["config_hash"] = hex64(fnv1a(manifest["config"].dump()));
  const fs::path manifest_path = config.output_dir / "manifest.json";
  if (fs::exists(manifest_path)) {
    const json existing = read_json_file(manifest_path);
    if (existing.value("config_hash", "") != manifest["config_hash"]) {
      throw validation_error(
          "output_dir", "holds results for a different config; refusing to mix");
    }
  } else {
    write_json_file(manifest_path, manifest);
  }

  const DensityMatrix truth = config.build_true_state();
  const SicPovm povm(config.n_qubits);

  std::vector<CellTask> tasks;
  for (std::size_t mi = 0; mi < config.m_values.size(); ++mi) {
    for (int t = 0; t < config.trials_per_m; ++t) {
      tasks.push_back({mi, t});
    }
  }

  const int thread_count =
      std::min<int>(config.workers, static_cast<int>(tasks.size()));
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  const auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error) return;
      }
      try {
        run_cell(config, truth, povm, tasks[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  if (thread_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (int i = 0; i < thread_count; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  return {config.output_dir, build_report(config.output_dir)};
}

json build_report(const fs::path& output_dir) {
  const json manifest = read_json_file(output_dir / "manifest.json");
  if (!manifest.contains("config")) {
    throw io_error("manifest.json is missing its config block");
  }
  const ExperimentConfig config = ExperimentConfig::from_json(manifest.at("config"));

  std::vector<std::string> labels;
  for (const PriorSpec& p : config.priors) labels.push_back(p.label());

  // load every cell
  std::vector<std::vector<json>> cells(config.m_values.size());
  for (std::size_t mi = 0; mi < config.m_values.size(); ++mi) {
    for (int t = 0; t < config.trials_per_m; ++t) {
      const fs::path p =
          cell_dir(output_dir, config.m_values[mi], t) / "summaries.json";
      if (!fs::exists(p)) {
        throw io_error("sweep incomplete: missing " + p.string());
      }
      cells[mi].push_back(read_json_file(p));
    }
  }

  const bool has_c1 = !cells.empty() && !cells[0].empty() &&
                      !cells[0][0].at("criterion_1").empty();

  const auto aggregate = [&](std::size_t mi, Measure measure, CriterionKind kind,
                             const std::string& label) -> CriterionReport {
    double gap = 0.0, budget = 0.0;
    for (const json& cell : cells[mi]) {
      const json& arr = kind == CriterionKind::C1 ? cell.at("criterion_1")
                                                  : cell.at("criterion_1_5").at(label);
      bool found = false;
      for (const json& rj : arr) {
        const CriterionReport r = criterion_report_from_json(rj);
        if (r.measure == measure) {
          gap += r.gap;
          budget += r.budget;
          found = true;
          break;
        }
      }
      if (!found) throw io_error("cell summary lacks a criterion entry");
    }
    const double k = static_cast<double>(cells[mi].size());
    CriterionReport out;
    out.m = config.m_values[mi];
    out.gap = gap / k;
    out.budget = budget / k;
    out.satisfied = out.gap < out.budget;
    out.which = kind;
    out.measure = measure;
    return out;
  };

  const auto mean_err = [&](std::size_t mi, const std::string& label,
                            Measure measure) {
    double acc = 0.0;
    for (const json& cell : cells[mi]) {
      const PosteriorSummary s = summary_from_json(cell.at("summaries").at(label));
      acc += measure == Measure::N1 ? s.err_n1 : s.err_n2;
    }
    return acc / static_cast<double>(cells[mi].size());
  };

  json per_m = json::array();
  std::map<std::string, std::vector<CriterionReport>> c1_series;    // by measure
  std::map<std::string, std::map<std::string, std::vector<CriterionReport>>> c15_series;
  for (std::size_t mi = 0; mi < config.m_values.size(); ++mi) {
    json measures = json::object();
    for (Measure measure : {Measure::N1, Measure::N2}) {
      const std::string mname = measure_name(measure);
      json entry = json::object();
      if (has_c1) {
        const CriterionReport rep = aggregate(mi, measure, CriterionKind::C1, "");
        entry["c1"] = criterion_report_to_json(rep);
        c1_series[mname].push_back(rep);
      }
      json c15 = json::object();
      for (const std::string& label : labels) {
        const CriterionReport rep = aggregate(mi, measure, CriterionKind::C1_5, label);
        c15[label] = criterion_report_to_json(rep);
        c15_series[mname][label].push_back(rep);
      }
      entry["c15"] = std::move(c15);
      json errs = json::object();
      for (const std::string& label : labels) {
        errs[label] = mean_err(mi, label, measure);
      }
      errs["MLE"] = mean_err(mi, "MLE", measure);
      entry["mean_err"] = std::move(errs);
      measures[mname] = std::move(entry);
    }
    per_m.push_back(json{{"m", config.m_values[mi]}, {"measures", std::move(measures)}});
  }

  // power-law fits over the sweep (skipped when a gap is exactly zero or only
  // one m value was run)
  const auto fit_or_null = [&](const std::vector<std::pair<std::uint64_t, double>>& pts) -> json {
    if (pts.size() < 2) return nullptr;
    for (const auto& [m, y] : pts) {
      if (!(y > 0.0)) return nullptr;
    }
    const PowerLawFit f = fit_power_law(pts);
    return json{{"amplitude", f.amplitude}, {"exponent", f.exponent}};
  };

  json fits = json::object();
  json sufficient = json::object();
  for (Measure measure : {Measure::N1, Measure::N2}) {
    const std::string mname = measure_name(measure);
    json f = json::object();
    json s = json::object();
    if (has_c1) {
      std::vector<std::pair<std::uint64_t, double>> pts;
      for (const CriterionReport& r : c1_series[mname]) pts.emplace_back(r.m, r.gap);
      f["c1_gap"] = fit_or_null(pts);
      const auto thr = sufficient_m(c1_series[mname]);
      s["c1"] = thr ? json(*thr) : json(nullptr);
    }
    json f_delta = json::object();
    json f_c15 = json::object();
    for (const std::string& label : labels) {
      std::vector<std::pair<std::uint64_t, double>> dpts, gpts;
      for (std::size_t mi = 0; mi < config.m_values.size(); ++mi) {
        dpts.emplace_back(config.m_values[mi], mean_err(mi, label, measure));
      }
      for (const CriterionReport& r : c15_series[mname][label]) {
        gpts.emplace_back(r.m, r.gap);
      }
      f_delta[label] = fit_or_null(dpts);
      f_c15[label] = fit_or_null(gpts);
    }
    f["delta_n"] = std::move(f_delta);
    f["c15_gap"] = std::move(f_c15);
    fits[mname] = std::move(f);

    // criterion 1.5 is applied per prior; the conservative answer is the
    // largest threshold, and "none" if any prior never settles
    std::optional<std::uint64_t> conservative;
    bool any_none = false;
    for (const std::string& label : labels) {
      const auto thr = sufficient_m(c15_series[mname][label]);
      if (!thr) {
        any_none = true;
      } else if (!conservative || *thr > *conservative) {
        conservative = *thr;
      }
    }
    s["c15"] = (any_none || !conservative) ? json(nullptr) : json(*conservative);
    sufficient[mname] = std::move(s);
  }

  json report{{"m_values", config.m_values},
              {"priors", labels},
              {"per_m", std::move(per_m)},
              {"fits", std::move(fits)},
              {"sufficient_m", std::move(sufficient)}};

  // persist both report artifacts
  fs::create_directories(output_dir / "report");
  write_json_file(output_dir / "report" / "criteria.json", report);

  std::string csv = "m,measure";
  if (has_c1) csv += ",c1_gap,c1_budget,c1_satisfied";
  for (const std::string& label : labels) {
    csv += ",c15_" + label + "_gap,c15_" + label + "_budget,c15_" + label + "_satisfied";
  }
  for (const std::string& label : labels) csv += ",err_" + label;
  csv += ",err_MLE\n";
  for (const json& row : report.at("per_m")) {
    const std::uint64_t m = row.at("m").get<std::uint64_t>();
    for (Measure measure : {Measure::N1, Measure::N2}) {
      const std::string mname = measure_name(measure);
      const json& entry = row.at("measures").at(mname);
      csv += std::to_string(m) + "," + mname;
      if (has_c1) {
        const json& c1 = entry.at("c1");
        csv += "," + format_double(c1.at("gap").get<double>()) + "," +
               format_double(c1.at("budget").get<double>()) + "," +
               (c1.at("satisfied").get<bool>() ? "1" : "0");
      }
      for (const std::string& label : labels) {
        const json& r = entry.at("c15").at(label);
        csv += "," + format_double(r.at("gap").get<double>()) + "," +
               format_double(r.at("budget").get<double>()) + "," +
               (r.at("satisfied").get<bool>() ? "1" : "0");
      }
      for (const std::string& label : labels) {
        csv += "," + format_double(entry.at("mean_err").at(label).get<double>());
      }
      csv += "," + format_double(entry.at("mean_err").at("MLE").get<double>());
      csv += "\n";
    }
  }
  write_text_file(output_dir / "report" / "sweep.csv", csv);

  return report;
}

}  // namespace qbayes
