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

// qbayes: simulate finite-data tomography on multi-qubit states, sample
// Bayesian posteriors over density matrices, and evaluate how many
// measurements suffice for reliable entanglement estimates.
//
// Exit codes: 0 success, 2 invalid arguments/config, 3 I/O failure,
// 4 sampler diagnostics, 5 verification failure, 1 anything else.

#include <cmath>
#include <iostream>

#include <CLI11.hpp>

#include "qbayes/experiment.hpp"
#include "qbayes/kernels.hpp"

namespace {

using namespace qbayes;

DensityMatrix state_from_arg(const std::string& text, int n_qubits) {
  const TrueStateSpec spec = TrueStateSpec::parse(text);
  ExperimentConfig tmp;
  tmp.true_state = spec;
  tmp.n_qubits = n_qubits;
  return tmp.build_true_state();
}

PriorSpec prior_from_args(const std::string& kind, bool mixed, double beta) {
  PriorSpec spec;
  if (kind == "Z") {
    spec = PriorSpec::z(mixed);
  } else if (kind == "GH") {
    spec = PriorSpec::gh(mixed);
  } else {
    throw argument_error("prior must be 'Z' or 'GH'");
  }
  if (beta > 0.0) spec.beta = beta;
  spec.validate();
  return spec;
}

int cmd_sample_prior(const std::string& prior_kind, bool mixed, double beta,
                     int n, int count, std::uint64_t seed,
                     const std::string& out_path) {
  const PriorSpec spec = prior_from_args(prior_kind, mixed, beta);
  Rng rng(seed);
  std::string csv = "index,n1,n2\n";
  double sum1 = 0.0, sum2 = 0.0, sq1 = 0.0, sq2 = 0.0;
  int zero_n1 = 0;
  for (int i = 0; i < count; ++i) {
    const NegativityPair p = negativity_pair(sample_prior(spec, rng, n));
    csv += std::to_string(i) + "," + format_double(p.n1) + "," +
           format_double(p.n2) + "\n";
    sum1 += p.n1;
    sum2 += p.n2;
    sq1 += p.n1 * p.n1;
    sq2 += p.n2 * p.n2;
    if (p.n1 == 0.0) ++zero_n1;
  }
  if (!out_path.empty()) write_text_file(out_path, csv);
  const double k = count;
  const double m1 = sum1 / k, m2 = sum2 / k;
  std::cout << "prior " << spec.label() << ", n_qubits " << n << ", " << count
            << " draws\n";
  std::cout << "  mean n1 " << m1 << "  stddev "
            << std::sqrt(std::max(0.0, sq1 / k - m1 * m1)) << "\n";
  std::cout << "  mean n2 " << m2 << "  stddev "
            << std::sqrt(std::max(0.0, sq2 / k - m2 * m2)) << "\n";
  std::cout << "  P(n1 = 0) " << static_cast<double>(zero_n1) / k << "\n";
  return 0;
}

int cmd_simulate(const std::string& state, int n, std::uint64_t m,
                 std::uint64_t seed, const std::string& out_path) {
  const DensityMatrix rho = state_from_arg(state, n);
  const SicPovm povm(n);
  Rng rng(seed);
  const MeasurementRecord rec = simulate_counts(rho, povm, m, rng);
  save_record_csv(out_path, rec);
  std::cout << "wrote " << out_path << " (" << m << " shots over "
            << povm.n_outcomes() << " outcomes)\n";
  return 0;
}

int cmd_chain(const std::string& record_path, const std::string& prior_kind,
              bool mixed, double beta, const ChainConfig& cfg,
              const std::string& out_path) {
  const MeasurementRecord rec = load_record_csv(record_path);
  const SicPovm povm(rec.n_qubits);
  const PriorSpec prior = prior_from_args(prior_kind, mixed, beta);
  const PosteriorChain chain = mh_chain(prior, rec, povm, cfg);
  save_chain_csv(out_path, chain);
  write_json_file(out_path + ".meta.json",
                  json{{"prior", prior_spec_to_json(prior)},
                       {"config", chain_config_to_json(cfg)},
                       {"acceptance_rate", chain.acceptance_rate},
                       {"final_step_size", chain.final_step_size},
                       {"n_samples", chain.samples.size()}});
  const PosteriorSummary s = summarize(
      chain.samples, prior.kind == PriorKind::Z ? SummarySource::Z : SummarySource::GH,
      rec.total_m);
  std::cout << "chain done: " << chain.samples.size() << " samples, acceptance "
            << chain.acceptance_rate << ", step size " << chain.final_step_size
            << "\n";
  std::cout << "  <N1> " << s.mean_n1 << " +- " << s.err_n1 << "\n";
  std::cout << "  <N2> " << s.mean_n2 << " +- " << s.err_n2 << "\n";
  return 0;
}

int cmd_mle(const std::string& record_path, int resamples, std::uint64_t seed,
            const std::string& out_path, const std::string& state_out) {
  const MeasurementRecord rec = load_record_csv(record_path);
  const SicPovm povm(rec.n_qubits);
  const DensityMatrix rho_mle = mle_estimate(rec, povm);
  if (!state_out.empty()) save_density_matrix(state_out, rho_mle);
  const NegativityPair point = negativity_pair(rho_mle);
  std::cout << "MLE point estimate: n1 " << point.n1 << ", n2 " << point.n2
            << "\n";
  Rng rng(seed);
  const std::vector<NegativityPair> boots =
      bootstrap_negativity(rho_mle, povm, rec.total_m, resamples, rng);
  if (!out_path.empty()) {
    std::string csv = "resample_index,n1,n2\n";
    for (std::size_t i = 0; i < boots.size(); ++i) {
      csv += std::to_string(i) + "," + format_double(boots[i].n1) + "," +
             format_double(boots[i].n2) + "\n";
    }
    write_text_file(out_path, csv);
  }
  const PosteriorSummary s = summarize(boots, SummarySource::MleBootstrap, rec.total_m);
  std::cout << "bootstrap (" << resamples << " resamples): n1 " << s.mean_n1
            << " +- " << s.err_n1 << ", n2 " << s.mean_n2 << " +- " << s.err_n2
            << "\n";
  return 0;
}

void print_report_table(const json& report) {
  std::cout << "m,measure,criterion,gap,budget,satisfied\n";
  for (const json& row : report.at("per_m")) {
    const std::uint64_t m = row.at("m").get<std::uint64_t>();
    for (const std::string mname : {"N1", "N2"}) {
      const json& entry = row.at("measures").at(mname);
      if (entry.contains("c1")) {
        const json& c1 = entry.at("c1");
        std::cout << m << "," << mname << ",C1," << c1.at("gap").get<double>()
                  << "," << c1.at("budget").get<double>() << ","
                  << (c1.at("satisfied").get<bool>() ? "yes" : "no") << "\n";
      }
      for (const auto& [label, r] : entry.at("c15").items()) {
        std::cout << m << "," << mname << ",C1.5(" << label << "),"
                  << r.at("gap").get<double>() << ","
                  << r.at("budget").get<double>() << ","
                  << (r.at("satisfied").get<bool>() ? "yes" : "no") << "\n";
      }
    }
  }
  std::cout << "sufficient_m: " << report.at("sufficient_m").dump() << "\n";
}

int cmd_run(const std::string& config_path, std::int64_t seed_override,
            int workers_override, const std::string& output_override) {
  json j = read_json_file(config_path);
  if (seed_override >= 0) j["seed"] = static_cast<std::uint64_t>(seed_override);
  if (workers_override > 0) j["workers"] = workers_override;
  if (!output_override.empty()) j["output_dir"] = output_override;
  const ExperimentConfig config = ExperimentConfig::from_json(j);
  const ExperimentResult result = run_experiment(config);
  std::cout << "experiment complete under " << result.output_dir.string() << "\n";
  print_report_table(result.report);
  return 0;
}

int cmd_report(const std::string& output_dir) {
  const json report = build_report(output_dir);
  print_report_table(report);
  return 0;
}

bool verify_line(const std::string& name, bool ok) {
  std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "\n";
  return ok;
}

// Golden-value suite: SIC symmetry, Smolin negativities, rho(0.8), and the
// separability thresholds of the noisy W family.
int cmd_verify() {
  bool all = true;

  const auto elems = sic_qubit();
  Eigen::Matrix2cd sum = Eigen::Matrix2cd::Zero();
  double sym_err = 0.0;
  for (int a = 0; a < 4; ++a) {
    sum += elems[a];
    for (int b = 0; b < 4; ++b) {
      const double overlap = (elems[a] * elems[b]).trace().real();
      sym_err = std::max(sym_err, std::abs(overlap - (a == b ? 0.25 : 1.0 / 12.0)));
    }
  }
  const double norm_err = (sum - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
  all &= verify_line("SIC normalization  max|sum - I| = " + format_double(norm_err),
                     norm_err <= 1e-12);
  all &= verify_line("SIC symmetry       max overlap error = " + format_double(sym_err),
                     sym_err <= 1e-12);

  const NegativityPair smolin = negativity_pair(smolin_state());
  all &= verify_line("Smolin (N1, N2) = (" + format_double(smolin.n1) + ", " +
                         format_double(smolin.n2) + "), want (0, 0.5)",
                     smolin.n1 == 0.0 && std::abs(smolin.n2 - 0.5) <= 1e-10);

  const NegativityPair w08 = negativity_pair(w_noise_state(0.8, 4));
  all &= verify_line("rho(q=0.8) (N1, N2) = (" + format_double(w08.n1) + ", " +
                         format_double(w08.n2) + "), want (0.3875, 0.3339)",
                     std::abs(w08.n1 - 0.3875) <= 5e-4 &&
                         std::abs(w08.n2 - 0.3339) <= 5e-4);

  const auto threshold = [](bool n1_measure) {
    double lo = 0.0, hi = 0.5;
    for (int it = 0; it < 40; ++it) {
      const double mid = 0.5 * (lo + hi);
      const NegativityPair p = negativity_pair(w_noise_state(mid, 4));
      ((n1_measure ? p.n1 : p.n2) > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  };
  const double q1 = threshold(true);
  const double q2 = threshold(false);
  all &= verify_line("N1 threshold q = " + format_double(q1) + ", want 0.1112",
                     std::abs(q1 - 0.1112) <= 5e-4);
  all &= verify_line("N2 threshold q = " + format_double(q2) + ", want 0.1262",
                     std::abs(q2 - 0.1262) <= 5e-4);

  return all ? 0 : 5;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian entanglement estimation from simulated tomography data"};
  app.require_subcommand(1);

  // sample-prior
  auto* sp = app.add_subcommand("sample-prior", "draw and summarize prior states");
  std::string sp_prior = "GH", sp_out;
  bool sp_mixed = false;
  double sp_beta = 0.0;
  int sp_n = 4, sp_count = 1000;
  std::uint64_t sp_seed = 0;
  sp->add_option("--prior", sp_prior, "Z or GH")->capture_default_str();
  sp->add_flag("--mixed", sp_mixed, "mix in the identity with lambda = u^beta");
  sp->add_option("--beta", sp_beta, "distortion exponent (default per prior)");
  sp->add_option("--n", sp_n, "number of qubits")->capture_default_str();
  sp->add_option("--count", sp_count, "number of draws")->capture_default_str();
  sp->add_option("--seed", sp_seed, "RNG seed")->capture_default_str();
  sp->add_option("--out", sp_out, "CSV output path (index,n1,n2)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "emit a measurement record");
  std::string sim_state = "w_noise:0.6", sim_out = "record.csv";
  int sim_n = 4;
  std::uint64_t sim_m = 10000, sim_seed = 0;
  sim->add_option("--state", sim_state, "w_noise:<q> | smolin | file:<path>")
      ->capture_default_str();
  sim->add_option("--n", sim_n, "number of qubits")->capture_default_str();
  sim->add_option("--m", sim_m, "number of POVM shots")->capture_default_str();
  sim->add_option("--seed", sim_seed, "RNG seed")->capture_default_str();
  sim->add_option("--out", sim_out, "record CSV path")->capture_default_str();

  // chain
  auto* ch = app.add_subcommand("chain", "single Metropolis-Hastings run");
  std::string ch_record, ch_prior = "GH", ch_out = "chain.csv";
  bool ch_mixed = false;
  double ch_beta = 0.0;
  ChainConfig ch_cfg;
  ch->add_option("--record", ch_record, "record CSV path")->required();
  ch->add_option("--prior", ch_prior, "Z or GH")->capture_default_str();
  ch->add_flag("--mixed", ch_mixed, "walk the identity-mixed prior");
  ch->add_option("--beta", ch_beta, "distortion exponent (default per prior)");
  ch->add_option("--steps", ch_cfg.total_steps, "total steps")->capture_default_str();
  ch->add_option("--burn-in", ch_cfg.burn_in, "burn-in steps")->capture_default_str();
  ch->add_option("--thin", ch_cfg.thinning, "thinning stride")->capture_default_str();
  ch->add_option("--step", ch_cfg.initial_step_size, "initial proposal scale")
      ->capture_default_str();
  ch->add_option("--seed", ch_cfg.seed, "RNG seed")->capture_default_str();
  ch->add_option("--out", ch_out, "chain CSV path")->capture_default_str();
  bool ch_cold = false;
  ch->add_flag("--cold-start", ch_cold, "start from a prior draw instead of the MLE");

  // mle
  auto* ml = app.add_subcommand("mle", "linear inversion + bootstrap error bars");
  std::string ml_record, ml_out = "bootstrap.csv", ml_state_out;
  int ml_resamples = 100;
  std::uint64_t ml_seed = 0;
  ml->add_option("--record", ml_record, "record CSV path")->required();
  ml->add_option("--resamples", ml_resamples, "bootstrap resamples")
      ->capture_default_str();
  ml->add_option("--seed", ml_seed, "RNG seed")->capture_default_str();
  ml->add_option("--out", ml_out, "bootstrap CSV path")->capture_default_str();
  ml->add_option("--state-out", ml_state_out, "write rho_MLE as JSON");

  // run
  auto* run = app.add_subcommand("run", "full experiment sweep from a config file");
  std::string run_config, run_output;
  std::int64_t run_seed = -1;
  int run_workers = 0;
  run->add_option("--config", run_config, "experiment config JSON")->required();
  run->add_option("--seed", run_seed, "override config seed");
  run->add_option("--workers", run_workers, "override worker count");
  run->add_option("--output", run_output, "override output directory");

  // report
  auto* rep = app.add_subcommand("report", "recompute criteria from stored outputs");
  std::string rep_output;
  rep->add_option("--output", rep_output, "experiment output directory")->required();

  // verify
  app.add_subcommand("verify", "golden-value checks (SIC algebra, Smolin, thresholds)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sp->parsed()) {
      return cmd_sample_prior(sp_prior, sp_mixed, sp_beta, sp_n, sp_count, sp_seed, sp_out);
    }
    if (sim->parsed()) return cmd_simulate(sim_state, sim_n, sim_m, sim_seed, sim_out);
    if (ch->parsed()) {
      ch_cfg.warm_start = !ch_cold;
      return cmd_chain(ch_record, ch_prior, ch_mixed, ch_beta, ch_cfg, ch_out);
    }
    if (ml->parsed()) return cmd_mle(ml_record, ml_resamples, ml_seed, ml_out, ml_state_out);
    if (run->parsed()) return cmd_run(run_config, run_seed, run_workers, run_output);
    if (rep->parsed()) return cmd_report(rep_output);
    return cmd_verify();
  } catch (const validation_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const argument_error& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return 2;
  } catch (const io_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 3;
  } catch (const diagnostic_error& e) {
    std::cerr << "diagnostic error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
