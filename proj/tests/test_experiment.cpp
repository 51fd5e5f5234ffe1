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

#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <map>

#include "qbayes/experiment.hpp"

using namespace qbayes;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag)
      : path(fs::temp_directory_path() /
             ("qbayes_exp_" + tag + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

ExperimentConfig smoke_config(const fs::path& out) {
  ExperimentConfig cfg;
  cfg.true_state = TrueStateSpec::parse("w_noise:0.6");
  cfg.n_qubits = 2;
  cfg.m_values = {100};
  cfg.priors = {PriorSpec::z(), PriorSpec::gh()};
  cfg.chain.total_steps = 200;
  cfg.chain.burn_in = 50;
  cfg.chain.thinning = 5;
  cfg.bootstrap_resamples = 10;
  cfg.trials_per_m = 1;
  cfg.seed = 12345;
  cfg.output_dir = out;
  cfg.workers = 1;
  return cfg;
}

std::map<std::string, std::string> snapshot_tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) {
      out[fs::relative(entry.path(), root).string()] =
          read_text_file(entry.path());
    }
  }
  return out;
}

}  // namespace

TEST_CASE("true state spec parsing") {
  CHECK(TrueStateSpec::parse("smolin").kind == TrueStateSpec::Kind::Smolin);
  const TrueStateSpec w = TrueStateSpec::parse("w_noise:0.35");
  CHECK(w.kind == TrueStateSpec::Kind::WNoise);
  CHECK(w.q == doctest::Approx(0.35));
  const TrueStateSpec f = TrueStateSpec::parse("file:/tmp/x.json");
  CHECK(f.kind == TrueStateSpec::Kind::File);
  CHECK(f.path == "/tmp/x.json");
  CHECK_THROWS_AS(TrueStateSpec::parse("wat"), validation_error);
}

TEST_CASE("config validation reports field paths") {
  TempDir tmp("validate");
  ExperimentConfig cfg = smoke_config(tmp.path);

  cfg.m_values = {100, 100};
  CHECK_THROWS_WITH_AS(cfg.validate(),
                       doctest::Contains("m_values"), validation_error);
  cfg.m_values = {100};

  cfg.trials_per_m = 0;
  try {
    cfg.validate();
    CHECK(false);
  } catch (const validation_error& e) {
    CHECK(e.field() == "trials_per_m");
  }
  cfg.trials_per_m = 1;

  cfg.true_state = TrueStateSpec::parse("smolin");
  CHECK_THROWS_AS(cfg.validate(), validation_error);  // smolin needs n = 4
  cfg.true_state = TrueStateSpec::parse("w_noise:0.6");

  cfg.priors = {PriorSpec::gh(), PriorSpec::gh()};
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("duplicate"),
                       validation_error);
}

TEST_CASE("config JSON round trip keeps every field") {
  TempDir tmp("json");
  const ExperimentConfig cfg = smoke_config(tmp.path);
  const ExperimentConfig back = ExperimentConfig::from_json(cfg.to_json());
  CHECK(back.to_json() == cfg.to_json());
  CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"n_qubits", 2}}),
                  validation_error);
}

TEST_CASE("smoke experiment emits the declared artifact tree") {
  TempDir tmp("smoke");
  const ExperimentConfig cfg = smoke_config(tmp.path);
  const ExperimentResult result = run_experiment(cfg);

  const fs::path cell = tmp.path / "cells" / "m100" / "t000";
  for (const char* name :
       {"record.csv", "chain_Z.csv", "chain_Z.meta.json", "chain_GH.csv",
        "chain_GH.meta.json", "bootstrap.csv", "rho_mle.json", "summaries.json"}) {
    CAPTURE(name);
    CHECK(fs::exists(cell / name));
  }
  CHECK(fs::exists(tmp.path / "manifest.json"));
  CHECK(fs::exists(tmp.path / "report" / "criteria.json"));
  CHECK(fs::exists(tmp.path / "report" / "sweep.csv"));

  // manifest carries config hash + seed + version
  const json manifest = read_json_file(tmp.path / "manifest.json");
  CHECK(manifest.contains("config_hash"));
  CHECK(manifest.at("seed").get<std::uint64_t>() == 12345);
  CHECK(manifest.contains("version"));

  // report content reflects the single m
  CHECK(result.report.at("m_values").size() == 1);
  CHECK(result.report.at("per_m").size() == 1);
}

TEST_CASE("same seed reproduces byte-identical outputs") {
  TempDir a("det_a"), b("det_b");
  ExperimentConfig ca = smoke_config(a.path);
  ExperimentConfig cb = smoke_config(b.path);
  run_experiment(ca);
  run_experiment(cb);
  auto ta = snapshot_tree(a.path);
  auto tb = snapshot_tree(b.path);
  // output_dir differs inside the manifests; compare everything else
  ta.erase("manifest.json");
  tb.erase("manifest.json");
  CHECK(ta == tb);
}

TEST_CASE("worker count does not change outputs") {
  TempDir a("w1"), b("w2");
  ExperimentConfig ca = smoke_config(a.path);
  ca.m_values = {50, 100};
  ca.trials_per_m = 2;
  ExperimentConfig cb = ca;
  cb.output_dir = b.path;
  cb.workers = 2;
  run_experiment(ca);
  run_experiment(cb);
  auto ta = snapshot_tree(a.path);
  auto tb = snapshot_tree(b.path);
  ta.erase("manifest.json");
  tb.erase("manifest.json");
  CHECK(ta == tb);
}

TEST_CASE("sweeps resume from completed cells and reports are pure") {
  TempDir tmp("resume");
  ExperimentConfig cfg = smoke_config(tmp.path);
  cfg.m_values = {50, 100};
  cfg.trials_per_m = 2;
  run_experiment(cfg);
  const auto before = snapshot_tree(tmp.path);

  // wipe one cell and the report; re-run must regenerate identical bytes
  fs::remove(tmp.path / "cells" / "m100" / "t001" / "summaries.json");
  fs::remove_all(tmp.path / "report");
  run_experiment(cfg);
  CHECK(snapshot_tree(tmp.path) == before);

  // report alone is a pure function of stored files
  build_report(tmp.path);
  CHECK(snapshot_tree(tmp.path) == before);
}

TEST_CASE("a single-prior sweep reports criterion 1.5 only") {
  TempDir tmp("single");
  ExperimentConfig cfg = smoke_config(tmp.path);
  cfg.priors = {PriorSpec::gh()};
  const ExperimentResult result = run_experiment(cfg);
  const json& entry = result.report.at("per_m")[0].at("measures").at("N1");
  CHECK(!entry.contains("c1"));
  CHECK(entry.at("c15").contains("GH"));
  CHECK(!result.report.at("sufficient_m").at("N1").contains("c1"));
}

TEST_CASE("mismatched config in an existing output dir is refused") {
  TempDir tmp("mismatch");
  ExperimentConfig cfg = smoke_config(tmp.path);
  run_experiment(cfg);
  cfg.seed = 999;  // different config, same directory
  CHECK_THROWS_AS(run_experiment(cfg), validation_error);
}

TEST_CASE("file-backed true states load and validate") {
  TempDir tmp("file_state");
  Rng rng(3);
  const DensityMatrix dm = sample_gh(rng, 2);
  const fs::path state_path = tmp.path / "state.json";
  save_density_matrix(state_path, dm);

  ExperimentConfig cfg = smoke_config(tmp.path / "out");
  cfg.true_state = TrueStateSpec::parse("file:" + state_path.string());
  const DensityMatrix loaded = cfg.build_true_state();
  CHECK((loaded.matrix() - dm.matrix()).cwiseAbs().maxCoeff() == 0.0);

  cfg.n_qubits = 3;  // mismatch
  CHECK_THROWS_AS(cfg.build_true_state(), validation_error);
}
