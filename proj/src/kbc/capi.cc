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

#include <cstring>
#include <exception>
#include <fstream>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "kbc/backend.h"
#include "kbc/corpus.h"
#include "kbc/eval.h"
#include "kbc/http_backend.h"
#include "kbc/io.h"
#include "kbc/kb.h"
#include "kbc/kbc.h"
#include "kbc/malt.h"
#include "kbc/pipeline.h"
#include "kbc/prompts.h"
#include "kbc/status.h"
#include "spdlog/spdlog.h"

using kbc::ErrorCode;

struct kbc_snapshot_s {
  std::shared_ptr<const kbc::KbSnapshot> kb;
  kbc::NameIndex index;
  size_t warnings = 0;
};

struct kbc_registry_s {
  kbc::RelationRegistry registry;
};

struct kbc_dataset_s {
  std::vector<kbc::MaltRecord> records;
};

struct kbc_corpus_s {
  kbc::ArticleStore store;
};

struct kbc_backend_s {
  std::unique_ptr<kbc::QaBackend> qa_owner;
  std::unique_ptr<kbc::EdBackend> ed_owner;
  std::unique_ptr<kbc::HttpBackend> http;
  kbc::QaBackend *qa = nullptr;
  kbc::EdBackend *ed = nullptr;
  nlohmann::json models;
};

struct kbc_run_s {
  kbc::PipelineResult result;
  std::vector<std::string> failures;
};

struct kbc_facts_s {
  std::vector<kbc::CorroboratedFact> facts;
};

struct kbc_report_s {
  kbc::EvalReport report;
};

struct kbc_calibration_s {
  kbc::CalibrationResult result;
};

namespace {

thread_local std::string last_error;

kbc_status SetError(kbc_status status, const std::string &message) {
  last_error = message;
  return status;
}

kbc_status FromCode(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage:
      return KBC_ERROR_USAGE;
    case ErrorCode::kData:
      return KBC_ERROR_DATA;
    case ErrorCode::kBackend:
      return KBC_ERROR_BACKEND;
    case ErrorCode::kTolerance:
      return KBC_ERROR_TOLERANCE;
    case ErrorCode::kProtocol:
      return KBC_ERROR_PROTOCOL;
    case ErrorCode::kInternal:
      return KBC_ERROR_INTERNAL;
  }
  return KBC_ERROR_INTERNAL;
}

template <typename F>
kbc_status Guard(F &&body) {
  try {
    return body();
  } catch (const kbc::Error &e) {
    return SetError(FromCode(e.code()), e.what());
  } catch (const std::bad_alloc &) {
    return SetError(KBC_ERROR_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return SetError(KBC_ERROR_INTERNAL, e.what());
  }
}

#define KBC_REQUIRE(cond, what)                                   \
  do {                                                            \
    if (!(cond)) return SetError(KBC_ERROR_INVALID_HANDLE, what); \
  } while (0)

kbc_status CopyOut(const std::string &value, char *out, size_t capacity,
                   size_t *needed) {
  if (needed != nullptr) *needed = value.size();
  if (out != nullptr && capacity > 0) {
    size_t n = std::min(value.size(), capacity - 1);
    std::memcpy(out, value.data(), n);
    out[n] = '\0';
  }
  return KBC_OK;
}

std::string Str(const char *s, const char *what) {
  if (s == nullptr)
    kbc::Fail(ErrorCode::kUsage, std::string(what) + " is null");
  return s;
}

std::vector<std::string> SplitPids(const std::string &text) {
  std::vector<std::string> pids;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) pids.push_back(item.substr(b, e - b + 1));
  }
  return pids;
}

const kbc::KbSnapshot *KbOrNull(kbc_snapshot snapshot) {
  return snapshot != nullptr ? snapshot->kb.get() : nullptr;
}

kbc_snapshot MakeSnapshot(kbc::KbSnapshot kb, size_t warnings) {
  auto handle = std::make_unique<kbc_snapshot_s>();
  handle->kb = std::make_shared<const kbc::KbSnapshot>(std::move(kb));
  handle->index = kbc::BuildNameIndex(*handle->kb);
  handle->warnings = warnings;
  return handle.release();
}

}  // namespace

extern "C" {

const char *kbc_version(void) { return "0.1.0"; }

const char *kbc_last_error(void) { return last_error.c_str(); }

const char *kbc_status_name(kbc_status status) {
  switch (status) {
    case KBC_OK:
      return "ok";
    case KBC_ERROR_USAGE:
      return "usage error";
    case KBC_ERROR_DATA:
      return "data error";
    case KBC_ERROR_BACKEND:
      return "backend error";
    case KBC_ERROR_TOLERANCE:
      return "failure tolerance exceeded";
    case KBC_ERROR_PROTOCOL:
      return "protocol error";
    case KBC_ERROR_INVALID_HANDLE:
      return "invalid handle";
    case KBC_ERROR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

kbc_status kbc_normalize(const char *raw, char *out, size_t capacity,
                         size_t *needed) {
  return Guard([&] {
    return CopyOut(kbc::Normalize(Str(raw, "name")).str(), out, capacity,
                   needed);
  });
}

kbc_status kbc_strip_qualifier(const char *name, char *out, size_t capacity,
                               size_t *needed) {
  return Guard([&] {
    return CopyOut(std::string(kbc::StripQualifier(Str(name, "name"))), out,
                   capacity, needed);
  });
}

kbc_status kbc_snapshot_load(const char *path, kbc_snapshot *out) {
  KBC_REQUIRE(out != nullptr, "output handle is null");
  return Guard([&] {
    kbc::Warnings warnings;
    kbc::KbSnapshot kb = kbc::LoadSnapshotFile(Str(path, "path"), &warnings);
    *out = MakeSnapshot(std::move(kb), warnings.messages().size());
    return KBC_OK;
  });
}

kbc_status kbc_snapshot_load_shards(const char *const *paths, size_t count,
                                    kbc_snapshot *out) {
  KBC_REQUIRE(out != nullptr, "output handle is null");
  return Guard([&] {
    if (paths == nullptr || count == 0) {
      kbc::Fail(ErrorCode::kUsage, "no snapshot shards given");
    }
    std::vector<std::string> files;
    for (size_t i = 0; i < count; ++i) files.push_back(Str(paths[i], "path"));
    kbc::Warnings warnings;
    kbc::KbSnapshot kb = kbc::LoadSnapshotShards(files, &warnings);
    *out = MakeSnapshot(std::move(kb), warnings.messages().size());
    return KBC_OK;
  });
}

void kbc_snapshot_free(kbc_snapshot snapshot) { delete snapshot; }

size_t kbc_snapshot_entity_count(kbc_snapshot snapshot) {
  return snapshot != nullptr ? snapshot->kb->entities.size() : 0;
}

size_t kbc_snapshot_triple_count(kbc_snapshot snapshot) {
  return snapshot != nullptr ? snapshot->kb->TripleCount() : 0;
}

size_t kbc_snapshot_warning_count(kbc_snapshot snapshot) {
  return snapshot != nullptr ? snapshot->warnings : 0;
}

kbc_status kbc_snapshot_is_long_tail(kbc_snapshot snapshot,
                                     const char *entity_id, int *result) {
  KBC_REQUIRE(snapshot != nullptr && result != nullptr, "null argument");
  return Guard([&] {
    const auto &entity =
        snapshot->kb->Get(kbc::EntityId(Str(entity_id, "entity id")));
    *result = kbc::IsLongTail(entity) ? 1 : 0;
    return KBC_OK;
  });
}

kbc_status kbc_snapshot_is_ambiguous(kbc_snapshot snapshot,
                                     const char *entity_id, int *result) {
  KBC_REQUIRE(snapshot != nullptr && result != nullptr, "null argument");
  return Guard([&] {
    const auto &entity =
        snapshot->kb->Get(kbc::EntityId(Str(entity_id, "entity id")));
    *result = kbc::IsAmbiguous(entity, snapshot->index) ? 1 : 0;
    return KBC_OK;
  });
}

kbc_status kbc_snapshot_match_names(kbc_snapshot snapshot, const char *surface,
                                    const char *entity_id, int *result) {
  KBC_REQUIRE(snapshot != nullptr && result != nullptr, "null argument");
  return Guard([&] {
    const auto &entity =
        snapshot->kb->Get(kbc::EntityId(Str(entity_id, "entity id")));
    *result = kbc::MatchNames(Str(surface, "surface"), entity) ? 1 : 0;
    return KBC_OK;
  });
}

kbc_status kbc_registry_default(kbc_registry *out) {
  KBC_REQUIRE(out != nullptr, "output handle is null");
  return Guard([&] {
    *out = new kbc_registry_s{kbc::RelationRegistry::Default()};
    return KBC_OK;
  });
}

kbc_status kbc_registry_load(const char *path, kbc_registry *out) {
  KBC_REQUIRE(out != nullptr, "output handle is null");
  return Guard([&] {
    *out =
        new kbc_registry_s{kbc::RelationRegistry::FromFile(Str(path, "path"))};
    return KBC_OK;
  });
}

kbc_status kbc_registry_select(kbc_registry registry, const char *pids,
                               kbc_registry *out) {
  KBC_REQUIRE(registry != nullptr && out != nullptr, "null argument");
  return Guard([&] {
    std::vector<std::string> wanted = SplitPids(Str(pids, "relations"));
    if (wanted.empty()) kbc::Fail(ErrorCode::kUsage, "no relations selected");
    *out = new kbc_registry_s{registry->registry.Select(wanted)};
    return KBC_OK;
  });
}

void kbc_registry_free(kbc_registry registry) { delete registry; }

size_t kbc_registry_size(kbc_registry registry) {
  return registry != nullptr ? registry->registry.size() : 0;
}

const char *kbc_registry_pid(kbc_registry registry, size_t i) {
  if (registry == nullptr || i >= registry->registry.size()) return nullptr;
  return registry->registry.specs()[i].pid.c_str();
}

kbc_status kbc_registry_render(kbc_registry registry, const char *pid, int kind,
                               const char *subject_label, char *out,
                               size_t capacity, size_t *needed) {
  KBC_REQUIRE(registry != nullptr, "registry handle is null");
  return Guard([&] {
    const kbc::RelationSpec &spec = registry->registry.Get(Str(pid, "pid"));
    std::string label = Str(subject_label, "subject label");
    kbc::RenderedPrompt prompt;
    if (kind == 0) {
      prompt = kbc::RenderGenerationPrompt(spec, label);
    } else if (kind == 1) {
      prompt = kbc::RenderCorroborationPrompt(spec, label);
    } else {
      kbc::Fail(ErrorCode::kUsage, "prompt kind must be 0 or 1");
    }
    return CopyOut(prompt.text, out, capacity, needed);
  });
}

kbc_status kbc_dataset_build(kbc_snapshot snapshot, kbc_registry registry,
                             size_t per_relation_sample, uint64_t seed,
                             kbc_dataset *out) {
  KBC_REQUIRE(snapshot != nullptr && registry != nullptr && out != nullptr,
              "null argument");
  return Guard([&] {
    std::optional<size_t> sample;
    if (per_relation_sample > 0) sample = per_relation_sample;
    kbc::Warnings warnings;
    auto records =
        kbc::BuildDataset(*snapshot->kb, snapshot->index, registry->registry,
                          sample, seed, &warnings);
    *out = new kbc_dataset_s{std::move(records)};
    return KBC_OK;
  });
}

kbc_status kbc_dataset_load(const char *path, kbc_dataset *out) {
  KBC_REQUIRE(out != nullptr, "output handle is null");
  return Guard([&] {
    *out = new kbc_dataset_s{kbc::ReadDatasetFile(Str(path, "path"))};
    return KBC_OK;
  });
}

kbc_status kbc_dataset_save(kbc_dataset dataset, const char *path) {
  KBC_REQUIRE(dataset != nullptr, "dataset handle is null");
  return Guard([&] {
    kbc::WriteDatasetFile(dataset->records, Str(path, "path"));
    return KBC_OK;
  });
}

kbc_status kbc_dataset_split(kbc_dataset dataset, double validation_fraction,
                             uint64_t seed, kbc_dataset *evaluation,
                             kbc_dataset *validation) {
  KBC_REQUIRE(
      dataset != nullptr && evaluation != nullptr && validation != nullptr,
      "null argument");
  return Guard([&] {
    kbc::Warnings warnings;
    kbc::DatasetSplit split = kbc::SplitDataset(
        dataset->records, validation_fraction, seed, &warnings);
    auto eval = std::make_unique<kbc_dataset_s>();
    eval->records = std::move(split.evaluation);
    *validation = new kbc_dataset_s{std::move(split.validation)};
    *evaluation = eval.release();
    return KBC_OK;
  });
}

kbc_status kbc_dataset_write_stats(kbc_dataset dataset, kbc_registry registry,
                                   const char *json_path,
                                   const char *text_path) {
  KBC_REQUIRE(dataset != nullptr, "dataset handle is null");
  return Guard([&] {
    kbc::StatsTable table = kbc::DatasetStats(
        dataset->records, registry != nullptr ? &registry->registry : nullptr);
    if (json_path != nullptr) {
      kbc::WriteTextFile(json_path, kbc::ToJson(table).dump(2) + "\n");
    }
    if (text_path != nullptr) {
      kbc::WriteTextFile(text_path, kbc::FormatStatsTable(table));
    }
    return KBC_OK;
  });
}

void kbc_dataset_free(kbc_dataset dataset) { delete dataset; }

size_t kbc_dataset_size(kbc_dataset dataset) {
  return dataset != nullptr ? dataset->records.size() : 0;
}

size_t kbc_dataset_triple_count(kbc_dataset dataset) {
  if (dataset == nullptr) return 0;
  size_t n = 0;
  for (const auto &record : dataset->records) n += record.gold_objects.size();
  return n;
}

kbc_status kbc_corpus_load(const char *path, kbc_corpus *out) {
  KBC_REQUIRE(out != nullptr, "output handle is null");
  return Guard([&] {
    kbc::Warnings warnings;
    *out = new kbc_corpus_s{kbc::LoadCorpusFile(Str(path, "path"), &warnings)};
    return KBC_OK;
  });
}

void kbc_corpus_free(kbc_corpus corpus) { delete corpus; }

size_t kbc_corpus_size(kbc_corpus corpus) {
  return corpus != nullptr ? corpus->store.size() : 0;
}

kbc_status kbc_corpus_sentence_count(kbc_corpus corpus, const char *entity_id,
                                     size_t *count) {
  KBC_REQUIRE(corpus != nullptr && count != nullptr, "null argument");
  return Guard([&] {
    *count = kbc::Sentences(corpus->store,
                            kbc::EntityId(Str(entity_id, "entity id")))
                 .size();
    return KBC_OK;
  });
}

kbc_status kbc_backend_http_create(const char *base_url, size_t max_in_flight,
                                   kbc_backend *out) {
  KBC_REQUIRE(out != nullptr, "output handle is null");
  return Guard([&] {
    kbc::HttpBackendOptions options;
    options.base_url = Str(base_url, "backend url");
    if (max_in_flight > 0) options.max_in_flight = max_in_flight;
    auto handle = std::make_unique<kbc_backend_s>();
    handle->http = std::make_unique<kbc::HttpBackend>(std::move(options));
    handle->qa = handle->http.get();
    handle->ed = handle->http.get();
    *out = handle.release();
    return KBC_OK;
  });
}

kbc_status kbc_backend_mock_create(kbc_snapshot snapshot, kbc_registry registry,
                                   const char *gazetteer_path,
                                   const char *truth_path, kbc_backend *out) {
  KBC_REQUIRE(snapshot != nullptr && out != nullptr, "null argument");
  return Guard([&] {
    auto gazetteer = kbc::LoadGazetteerFile(Str(gazetteer_path, "gazetteer"));
    auto truth = kbc::LoadTruthFile(Str(truth_path, "truth"));
    kbc::RelationRegistry relations = registry != nullptr
                                          ? registry->registry
                                          : kbc::RelationRegistry::Default();
    auto handle = std::make_unique<kbc_backend_s>();
    handle->qa_owner =
        std::make_unique<kbc::MockQaBackend>(std::move(gazetteer));
    handle->ed_owner = std::make_unique<kbc::MockEdBackend>(
        snapshot->kb, std::move(relations), std::move(truth));
    handle->qa = handle->qa_owner.get();
    handle->ed = handle->ed_owner.get();
    handle->models = {{"qa", "mock-gazetteer"}, {"ed", "mock-truth"}};
    *out = handle.release();
    return KBC_OK;
  });
}

kbc_status kbc_backend_health(kbc_backend backend, char *out, size_t capacity,
                              size_t *needed) {
  KBC_REQUIRE(backend != nullptr, "backend handle is null");
  return Guard([&] {
    nlohmann::json health;
    if (backend->http != nullptr) {
      health = backend->http->Health();
    } else {
      health = {{"status", "ok"}, {"models", backend->models}};
    }
    return CopyOut(health.dump(), out, capacity, needed);
  });
}

kbc_status kbc_backend_serve(kbc_backend backend, const char *host, int port) {
  KBC_REQUIRE(backend != nullptr, "backend handle is null");
  return Guard([&] {
    std::string bind = Str(host, "host");
    httplib::Server server;
    kbc::RegisterBackendRoutes(server, *backend->qa, *backend->ed,
                               backend->models);
    spdlog::info("serving on {}:{}", bind, port);
    if (!server.listen(bind, port)) {
      kbc::Fail(ErrorCode::kUsage,
                "cannot listen on " + bind + ":" + std::to_string(port));
    }
    return KBC_OK;
  });
}

void kbc_backend_free(kbc_backend backend) { delete backend; }

void kbc_run_options_init(kbc_run_options *options) {
  if (options == nullptr) return;
  kbc::PipelineOptions defaults;
  options->k = defaults.k;
  options->window = defaults.window;
  options->workers = defaults.workers;
  options->failure_tolerance = defaults.failure_tolerance;
}

kbc_status kbc_pipeline_run(kbc_dataset dataset, kbc_snapshot snapshot,
                            kbc_corpus corpus, kbc_registry registry,
                            kbc_backend backend, const kbc_run_options *options,
                            kbc_run *out) {
  KBC_REQUIRE(dataset != nullptr && snapshot != nullptr && corpus != nullptr &&
                  backend != nullptr && out != nullptr,
              "null argument");
  return Guard([&] {
    kbc::PipelineOptions opts;
    if (options != nullptr) {
      opts.k = options->k;
      opts.window = options->window;
      opts.workers = options->workers;
      opts.failure_tolerance = options->failure_tolerance;
    }
    kbc::RelationRegistry relations = registry != nullptr
                                          ? registry->registry
                                          : kbc::RelationRegistry::Default();
    auto items = kbc::WorkItemsFromDataset(dataset->records);
    kbc::QaPromptGenerator generator(*backend->qa);
    auto run = std::make_unique<kbc_run_s>();
    run->result =
        kbc::RunPipeline(items, *snapshot->kb, snapshot->index, corpus->store,
                         relations, generator, *backend->ed, opts);
    for (const auto &failure : run->result.failures) {
      run->failures.push_back(failure.item.subject.str() + "\t" +
                              failure.item.pid + "\t" + failure.message);
    }
    bool breached = run->result.tolerance_breached;
    size_t failed = run->result.failures.size();
    size_t total = run->result.items;
    *out = run.release();
    if (breached) {
      return SetError(KBC_ERROR_TOLERANCE,
                      std::to_string(failed) + " of " + std::to_string(total) +
                          " work items failed, above the failure tolerance");
    }
    return KBC_OK;
  });
}

void kbc_run_free(kbc_run run) { delete run; }

size_t kbc_run_item_count(kbc_run run) {
  return run != nullptr ? run->result.items : 0;
}

size_t kbc_run_failure_count(kbc_run run) {
  return run != nullptr ? run->failures.size() : 0;
}

const char *kbc_run_failure(kbc_run run, size_t i) {
  if (run == nullptr || i >= run->failures.size()) return nullptr;
  return run->failures[i].c_str();
}

kbc_status kbc_run_facts(kbc_run run, kbc_facts *out) {
  KBC_REQUIRE(run != nullptr && out != nullptr, "null argument");
  return Guard([&] {
    *out = new kbc_facts_s{run->result.facts};
    return KBC_OK;
  });
}

kbc_status kbc_facts_load(const char *path, kbc_facts *out) {
  KBC_REQUIRE(out != nullptr, "output handle is null");
  return Guard([&] {
    *out = new kbc_facts_s{kbc::ReadFactsFile(Str(path, "path"))};
    return KBC_OK;
  });
}

kbc_status kbc_facts_save(kbc_facts facts, const char *path) {
  KBC_REQUIRE(facts != nullptr, "facts handle is null");
  return Guard([&] {
    kbc::WriteFactsFile(facts->facts, Str(path, "path"));
    return KBC_OK;
  });
}

kbc_status kbc_facts_filter(kbc_facts facts, double alpha, kbc_facts *out) {
  KBC_REQUIRE(facts != nullptr && out != nullptr, "null argument");
  return Guard([&] {
    *out = new kbc_facts_s{kbc::FilterThreshold(facts->facts, alpha)};
    return KBC_OK;
  });
}

void kbc_facts_free(kbc_facts facts) { delete facts; }

size_t kbc_facts_size(kbc_facts facts) {
  return facts != nullptr ? facts->facts.size() : 0;
}

double kbc_facts_fused_score(kbc_facts facts, size_t i) {
  if (facts == nullptr || i >= facts->facts.size()) return 0.0;
  return facts->facts[i].fused_score;
}

kbc_status kbc_evaluate(kbc_facts facts, kbc_dataset gold,
                        kbc_snapshot snapshot, double alpha, kbc_report *out) {
  KBC_REQUIRE(facts != nullptr && gold != nullptr && out != nullptr,
              "null argument");
  return Guard([&] {
    kbc::MatchTable table(facts->facts, gold->records, KbOrNull(snapshot));
    std::optional<double> min_score;
    if (alpha >= 0.0) {
      if (alpha > 1.0) kbc::Fail(ErrorCode::kUsage, "alpha must be in [0, 1]");
      min_score = alpha;
    }
    kbc::EvalReport report = table.Evaluate(min_score);
    report.alpha = min_score;
    *out = new kbc_report_s{std::move(report)};
    return KBC_OK;
  });
}

kbc_status kbc_report_aggregate(kbc_report report, kbc_aggregate_mode mode,
                                double out[3]) {
  KBC_REQUIRE(report != nullptr && out != nullptr, "null argument");
  const auto &values = mode == KBC_AGGREGATE_WEIGHTED
                           ? report->report.weighted
                           : report->report.unweighted;
  for (int i = 0; i < 3; ++i) out[i] = values[i];
  return KBC_OK;
}

size_t kbc_report_relation_count(kbc_report report) {
  return report != nullptr ? report->report.rows.size() : 0;
}

kbc_status kbc_report_write(kbc_report report, kbc_registry registry,
                            const char *json_path, const char *text_path) {
  KBC_REQUIRE(report != nullptr, "report handle is null");
  return Guard([&] {
    if (json_path != nullptr) {
      kbc::WriteTextFile(json_path, kbc::ToJson(report->report).dump(2) + "\n");
    }
    if (text_path != nullptr) {
      kbc::WriteTextFile(
          text_path, kbc::FormatReport(report->report, registry != nullptr
                                                           ? &registry->registry
                                                           : nullptr));
    }
    return KBC_OK;
  });
}

void kbc_report_free(kbc_report report) { delete report; }

kbc_status kbc_calibrate(kbc_facts facts, kbc_dataset validation,
                         kbc_snapshot snapshot, kbc_calibration *out) {
  KBC_REQUIRE(facts != nullptr && validation != nullptr && out != nullptr,
              "null argument");
  return Guard([&] {
    *out = new kbc_calibration_s{kbc::CalibrateAlpha(
        facts->facts, validation->records, KbOrNull(snapshot))};
    return KBC_OK;
  });
}

kbc_status kbc_calibration_load(const char *path, kbc_calibration *out) {
  KBC_REQUIRE(out != nullptr, "output handle is null");
  return Guard([&] {
    *out = new kbc_calibration_s{
        kbc::CalibrationFromJson(kbc::ReadJsonFile(Str(path, "path")))};
    return KBC_OK;
  });
}

kbc_status kbc_calibration_save(kbc_calibration calibration, const char *path) {
  KBC_REQUIRE(calibration != nullptr, "calibration handle is null");
  return Guard([&] {
    kbc::WriteTextFile(Str(path, "path"),
                       kbc::ToJson(calibration->result).dump(2) + "\n");
    return KBC_OK;
  });
}

double kbc_calibration_alpha(kbc_calibration calibration) {
  return calibration != nullptr ? calibration->result.alpha : 0.0;
}

double kbc_calibration_best_f1(kbc_calibration calibration) {
  return calibration != nullptr ? calibration->result.best_f1 : 0.0;
}

void kbc_calibration_free(kbc_calibration calibration) { delete calibration; }

kbc_status kbc_annotate(kbc_facts facts, kbc_dataset gold,
                        kbc_snapshot snapshot, size_t per_relation,
                        uint64_t seed, const char *csv_path, size_t *rows) {
  KBC_REQUIRE(facts != nullptr && gold != nullptr, "null argument");
  return Guard([&] {
    auto sample = kbc::SampleForAnnotation(
        facts->facts, gold->records, per_relation, seed, KbOrNull(snapshot));
    std::ostringstream csv;
    kbc::WriteAnnotationCsv(sample, csv);
    kbc::WriteTextFile(Str(csv_path, "path"), csv.str());
    if (rows != nullptr) *rows = sample.size();
    return KBC_OK;
  });
}

kbc_status kbc_aggregate(const kbc_metric_row *rows, size_t count,
                         kbc_aggregate_mode mode, double out[3]) {
  KBC_REQUIRE(out != nullptr && (rows != nullptr || count == 0),
              "null argument");
  return Guard([&] {
    if (count == 0) kbc::Fail(ErrorCode::kUsage, "no rows to aggregate");
    std::vector<kbc::AggregateRow> input;
    for (size_t i = 0; i < count; ++i) {
      input.push_back(
          {rows[i].weight, {rows[i].precision, rows[i].recall, rows[i].f1}});
    }
    auto values = kbc::Aggregate(input, mode == KBC_AGGREGATE_WEIGHTED
                                            ? kbc::AggregateMode::kWeighted
                                            : kbc::AggregateMode::kUnweighted);
    for (int i = 0; i < 3; ++i) out[i] = values[i];
    return KBC_OK;
  });
}

kbc_status kbc_report_from_rows(const char *path, kbc_report *out) {
  KBC_REQUIRE(out != nullptr, "output handle is null");
  return Guard([&] {
    auto report = std::make_unique<kbc_report_s>();
    report->report.rows = kbc::ReadMetricRowsFile(Str(path, "path"));
    report->report.unweighted = kbc::AggregateMetrics(
        report->report.rows, kbc::AggregateMode::kUnweighted);
    report->report.weighted = kbc::AggregateMetrics(
        report->report.rows, kbc::AggregateMode::kWeighted);
    *out = report.release();
    return KBC_OK;
  });
}

}  // extern "C"
