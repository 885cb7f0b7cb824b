// Copyright 2026 The KBC Authors.
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

// kbc: runs the completion pipeline and scores its output.
//
//   kbc run --dataset data/evaluation.jsonl --snapshot kb.jsonl
//       --corpus articles.jsonl --backend http://127.0.0.1:8080 --out run/
//   kbc calibrate --facts val/facts.jsonl --validation data/validation.jsonl
//       --out run/
//   kbc eval --facts run/facts.jsonl --gold data/evaluation.jsonl --out run/
//   kbc annotate --facts run/facts.jsonl --gold data/evaluation.jsonl
//       --n 25 --seed 7 --out run/

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli_util.h"
#include "json.hpp"

namespace {

using namespace kbc_cli;
using nlohmann::json;

struct RunConfig {
  std::string dataset;
  std::vector<std::string> snapshots;
  std::string corpus;
  std::string registry;
  std::string backend;
  std::string mock_gazetteer;
  std::string mock_truth;
  size_t k = 20;
  size_t window = 1;
  size_t max_in_flight = 8;
  double failure_tolerance = 0.10;
  std::string out;
};

struct CalibrateConfig {
  std::string facts;
  std::string validation;
  std::vector<std::string> snapshots;
  std::string out;
};

struct EvalConfig {
  std::string facts;
  std::string gold;
  std::optional<double> alpha;
  std::string calibration;
  std::vector<std::string> snapshots;
  std::string registry;
  std::string replay;
  std::string out;
};

struct AnnotateConfig {
  std::string facts;
  std::string gold;
  std::vector<std::string> snapshots;
  size_t n = 25;
  uint64_t seed = 0;
  std::optional<double> alpha;
  std::string calibration;
  std::string out;
};

struct ServeConfig {
  std::vector<std::string> snapshots;
  std::string registry;
  std::string gazetteer;
  std::string truth;
  std::string host = "127.0.0.1";
  int port = 8080;
};

Snapshot OptionalSnapshot(const std::vector<std::string> &paths) {
  if (paths.empty()) return Snapshot();
  return LoadSnapshot(paths);
}

int RunCommand(RunConfig config) {
  if (config.k < 1) UsageError("--k must be at least 1");
  if (config.window < 1) UsageError("--window must be at least 1");
  if (config.failure_tolerance < 0.0 || config.failure_tolerance > 1.0) {
    UsageError("--failure-tolerance must be in [0, 1]");
  }
  if (config.backend.empty()) {
    const char *env = std::getenv("KBC_BACKEND_URL");
    if (env != nullptr) config.backend = env;
  }
  if (config.backend.empty()) {
    UsageError("no backend: pass --backend or set KBC_BACKEND_URL");
  }

  Registry registry = LoadRegistry(config.registry);
  Snapshot snapshot = LoadSnapshot(config.snapshots);
  Dataset dataset;
  Check(kbc_dataset_load(config.dataset.c_str(), dataset.out()),
        config.dataset.c_str());
  Corpus corpus;
  Check(kbc_corpus_load(config.corpus.c_str(), corpus.out()),
        config.corpus.c_str());

  Backend backend;
  if (config.backend == "mock") {
    if (config.mock_gazetteer.empty() || config.mock_truth.empty()) {
      UsageError("--backend mock needs --mock-gazetteer and --mock-truth");
    }
    Check(kbc_backend_mock_create(snapshot.get(), registry.get(),
                                  config.mock_gazetteer.c_str(),
                                  config.mock_truth.c_str(), backend.out()),
          "mock backend");
  } else {
    Check(kbc_backend_http_create(config.backend.c_str(), config.max_in_flight,
                                  backend.out()),
          "backend");
  }
  size_t needed = 0;
  Check(kbc_backend_health(backend.get(), nullptr, 0, &needed), "health check");
  std::string health(needed + 1, '\0');
  Check(
      kbc_backend_health(backend.get(), health.data(), health.size(), nullptr),
      "health check");
  health.resize(needed);

  kbc_run_options options;
  kbc_run_options_init(&options);
  options.k = config.k;
  options.window = config.window;
  options.workers = config.max_in_flight;
  options.failure_tolerance = config.failure_tolerance;

  auto start = std::chrono::steady_clock::now();
  Run run;
  kbc_status status =
      kbc_pipeline_run(dataset.get(), snapshot.get(), corpus.get(),
                       registry.get(), backend.get(), &options, run.out());
  std::string run_error = status == KBC_OK ? "" : kbc_last_error();
  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  if (!run) Check(status, "run");

  Facts facts;
  Check(kbc_run_facts(run.get(), facts.out()), "run");
  MakeOutDir(config.out);
  Check(kbc_facts_save(facts.get(), OutPath(config.out, "facts.jsonl").c_str()),
        "facts.jsonl");

  json failures = json::array();
  for (size_t i = 0; i < kbc_run_failure_count(run.get()); ++i) {
    std::string line = kbc_run_failure(run.get(), i);
    size_t a = line.find('\t');
    size_t b = line.find('\t', a + 1);
    failures.push_back({{"subject", line.substr(0, a)},
                        {"pid", line.substr(a + 1, b - a - 1)},
                        {"error", line.substr(b + 1)}});
  }
  json manifest = {
      {"command", "kbc run"},
      {"version", kbc_version()},
      {"config",
       {{"dataset", config.dataset},
        {"snapshots", config.snapshots},
        {"corpus", config.corpus},
        {"registry", config.registry},
        {"backend", config.backend},
        {"mock_gazetteer", config.mock_gazetteer},
        {"mock_truth", config.mock_truth},
        {"k", config.k},
        {"window", config.window},
        {"max_in_flight", config.max_in_flight},
        {"failure_tolerance", config.failure_tolerance}}},
      {"backend_health", json::parse(health, nullptr, false)},
      {"timings", {{"pipeline_ms", elapsed.count()}}},
      {"counts",
       {{"items", kbc_run_item_count(run.get())},
        {"failed_items", kbc_run_failure_count(run.get())},
        {"facts", kbc_facts_size(facts.get())}}},
      {"failures", failures},
      {"tolerance_breached", status == KBC_ERROR_TOLERANCE},
  };
  WriteText(OutPath(config.out, "manifest.json"), manifest.dump(2) + "\n");

  std::printf("%zu facts from %zu items (%zu failed)\n",
              kbc_facts_size(facts.get()), kbc_run_item_count(run.get()),
              kbc_run_failure_count(run.get()));
  if (status != KBC_OK) {
    std::fprintf(stderr, "error: run: %s\n", run_error.c_str());
    return ExitCodeFor(status);
  }
  return kExitOk;
}

int CalibrateCommand(const CalibrateConfig &config) {
  Snapshot snapshot = OptionalSnapshot(config.snapshots);
  Facts facts;
  Check(kbc_facts_load(config.facts.c_str(), facts.out()),
        config.facts.c_str());
  Dataset validation;
  Check(kbc_dataset_load(config.validation.c_str(), validation.out()),
        config.validation.c_str());
  Calibration calibration;
  Check(kbc_calibrate(facts.get(), validation.get(), snapshot.get(),
                      calibration.out()),
        "calibrate");
  MakeOutDir(config.out);
  Check(kbc_calibration_save(calibration.get(),
                             OutPath(config.out, "calibration.json").c_str()),
        "calibration.json");
  std::printf("alpha = %.6f (validation F1 = %.4f)\n",
              kbc_calibration_alpha(calibration.get()),
              kbc_calibration_best_f1(calibration.get()));
  return kExitOk;
}

int EvalCommand(const EvalConfig &config) {
  Registry registry = LoadRegistry(config.registry);
  Report report;
  if (!config.replay.empty()) {
    if (!config.facts.empty() || !config.gold.empty()) {
      UsageError("--replay cannot be combined with --facts/--gold");
    }
    Check(kbc_report_from_rows(config.replay.c_str(), report.out()),
          config.replay.c_str());
  } else {
    if (config.facts.empty() || config.gold.empty()) {
      UsageError("eval needs --facts and --gold (or --replay)");
    }
    double alpha = 0.0;
    if (config.alpha) {
      alpha = *config.alpha;
      if (alpha < 0.0 || alpha > 1.0) UsageError("--alpha must be in [0, 1]");
    } else {
      std::string path = config.calibration;
      if (path.empty()) path = OutPath(config.out, "calibration.json");
      if (!std::filesystem::exists(path)) {
        UsageError("no --alpha given and no calibration at " + path);
      }
      Calibration calibration;
      Check(kbc_calibration_load(path.c_str(), calibration.out()),
            path.c_str());
      alpha = kbc_calibration_alpha(calibration.get());
    }
    Snapshot snapshot = OptionalSnapshot(config.snapshots);
    Facts facts;
    Check(kbc_facts_load(config.facts.c_str(), facts.out()),
          config.facts.c_str());
    Dataset gold;
    Check(kbc_dataset_load(config.gold.c_str(), gold.out()),
          config.gold.c_str());
    Check(kbc_evaluate(facts.get(), gold.get(), snapshot.get(), alpha,
                       report.out()),
          "eval");
  }
  MakeOutDir(config.out);
  std::string text_path = OutPath(config.out, "report.txt");
  Check(kbc_report_write(report.get(), registry.get(),
                         OutPath(config.out, "report.json").c_str(),
                         text_path.c_str()),
        "report");
  double values[3];
  Check(kbc_report_aggregate(report.get(), KBC_AGGREGATE_UNWEIGHTED, values),
        "report");
  std::printf("P = %.1f  R = %.1f  F1 = %.1f\n", values[0] * 100,
              values[1] * 100, values[2] * 100);
  return kExitOk;
}

int AnnotateCommand(const AnnotateConfig &config) {
  if (config.n < 1) UsageError("--n must be at least 1");
  Snapshot snapshot = OptionalSnapshot(config.snapshots);
  Facts facts;
  Check(kbc_facts_load(config.facts.c_str(), facts.out()),
        config.facts.c_str());
  std::optional<double> alpha = config.alpha;
  if (!alpha && !config.calibration.empty()) {
    Calibration calibration;
    Check(kbc_calibration_load(config.calibration.c_str(), calibration.out()),
          config.calibration.c_str());
    alpha = kbc_calibration_alpha(calibration.get());
  }
  if (alpha) {
    Facts kept;
    Check(kbc_facts_filter(facts.get(), *alpha, kept.out()), "--alpha");
    facts = std::move(kept);
  }
  Dataset gold;
  Check(kbc_dataset_load(config.gold.c_str(), gold.out()), config.gold.c_str());
  MakeOutDir(config.out);
  size_t rows = 0;
  Check(kbc_annotate(facts.get(), gold.get(), snapshot.get(), config.n,
                     config.seed, OutPath(config.out, "annotation.csv").c_str(),
                     &rows),
        "annotate");
  std::printf("%zu rows\n", rows);
  return kExitOk;
}

int ServeCommand(const ServeConfig &config) {
  Registry registry = LoadRegistry(config.registry);
  Snapshot snapshot = LoadSnapshot(config.snapshots);
  Backend backend;
  Check(kbc_backend_mock_create(snapshot.get(), registry.get(),
                                config.gazetteer.c_str(), config.truth.c_str(),
                                backend.out()),
        "mock backend");
  Check(kbc_backend_serve(backend.get(), config.host.c_str(), config.port),
        "serve");
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Knowledge-base completion from entity articles."};
  app.require_subcommand(1);

  RunConfig run;
  CLI::App *run_cmd =
      app.add_subcommand("run", "Generate and corroborate facts");
  run_cmd->add_option("--dataset", run.dataset, "Dataset (JSON lines)")
      ->required();
  run_cmd
      ->add_option("--snapshot", run.snapshots,
                   "Snapshot file; repeat for shards")
      ->required();
  run_cmd->add_option("--corpus", run.corpus, "Articles (JSON lines)")
      ->required();
  run_cmd->add_option("--registry", run.registry, "Relation registry (JSON)");
  run_cmd->add_option("--backend", run.backend,
                      "Backend base URL, or \"mock\" (default: "
                      "$KBC_BACKEND_URL)");
  run_cmd->add_option("--mock-gazetteer", run.mock_gazetteer,
                      "Mock QA gazetteer (JSON object)");
  run_cmd->add_option("--mock-truth", run.mock_truth,
                      "Mock ED truth facts (JSON lines)");
  run_cmd->add_option("--k", run.k, "Candidates per stage")
      ->capture_default_str();
  run_cmd->add_option("--window", run.window, "Sentences per context")
      ->capture_default_str();
  run_cmd
      ->add_option("--max-in-flight", run.max_in_flight,
                   "Concurrent backend requests")
      ->capture_default_str()
      ->check(CLI::Range(1, 1024));
  run_cmd
      ->add_option("--failure-tolerance", run.failure_tolerance,
                   "Fraction of failed items allowed")
      ->capture_default_str();
  run_cmd->add_option("--out", run.out, "Output directory")->required();

  CalibrateConfig cal;
  CLI::App *cal_cmd =
      app.add_subcommand("calibrate", "Pick the threshold on validation data");
  cal_cmd->add_option("--facts", cal.facts, "Facts (JSON lines)")->required();
  cal_cmd->add_option("--validation", cal.validation, "Validation dataset")
      ->required();
  cal_cmd->add_option("--snapshot", cal.snapshots, "Snapshot for alias lookup");
  cal_cmd->add_option("--out", cal.out, "Output directory")->required();

  EvalConfig ev;
  CLI::App *eval_cmd = app.add_subcommand("eval", "Score facts against gold");
  eval_cmd->add_option("--facts", ev.facts, "Facts (JSON lines)");
  eval_cmd->add_option("--gold", ev.gold, "Gold dataset (JSON lines)");
  auto *alpha_opt = eval_cmd->add_option("--alpha", ev.alpha, "Threshold");
  eval_cmd
      ->add_option("--calibration", ev.calibration,
                   "Calibration file (default: <out>/calibration.json)")
      ->excludes(alpha_opt);
  eval_cmd->add_option("--snapshot", ev.snapshots, "Snapshot for alias lookup");
  eval_cmd->add_option("--registry", ev.registry, "Relation registry (JSON)");
  eval_cmd->add_option("--replay", ev.replay,
                       "Recompute aggregates from per-relation rows (JSON)");
  eval_cmd->add_option("--out", ev.out, "Output directory")->required();

  AnnotateConfig ann;
  CLI::App *ann_cmd =
      app.add_subcommand("annotate", "Sample facts for manual assessment");
  ann_cmd->add_option("--facts", ann.facts, "Facts (JSON lines)")->required();
  ann_cmd->add_option("--gold", ann.gold, "Gold dataset (JSON lines)")
      ->required();
  ann_cmd->add_option("--snapshot", ann.snapshots, "Snapshot for alias lookup");
  ann_cmd->add_option("--n", ann.n, "Facts per relation")
      ->capture_default_str();
  ann_cmd->add_option("--seed", ann.seed, "Sampling seed")
      ->capture_default_str();
  auto *ann_alpha = ann_cmd->add_option(
      "--alpha", ann.alpha, "Drop facts scored below this threshold first");
  ann_cmd
      ->add_option("--calibration", ann.calibration,
                   "Take the threshold from a calibration file")
      ->excludes(ann_alpha);
  ann_cmd->add_option("--out", ann.out, "Output directory")->required();

  ServeConfig serve;
  CLI::App *serve_cmd = app.add_subcommand(
      "mock-server", "Serve the deterministic mock backends over HTTP");
  serve_cmd->add_option("--snapshot", serve.snapshots, "Snapshot file")
      ->required();
  serve_cmd->add_option("--registry", serve.registry, "Relation registry");
  serve_cmd->add_option("--gazetteer", serve.gazetteer, "QA gazetteer")
      ->required();
  serve_cmd->add_option("--truth", serve.truth, "ED truth facts")->required();
  serve_cmd->add_option("--host", serve.host, "Bind address")
      ->capture_default_str();
  serve_cmd->add_option("--port", serve.port, "Port")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run_cmd) return RunCommand(run);
    if (*cal_cmd) return CalibrateCommand(cal);
    if (*eval_cmd) return EvalCommand(ev);
    if (*ann_cmd) return AnnotateCommand(ann);
    if (*serve_cmd) return ServeCommand(serve);
  } catch (const CommandFailed &e) {
    return e.exit_code;
  }
  return kExitUsage;
}
