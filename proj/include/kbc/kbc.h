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

// C interface to the knowledge-base completion toolkit.
//
// Objects are opaque handles created by kbc_*_create / kbc_*_load calls and
// released with the matching kbc_*_free. Every fallible call returns a
// kbc_status; on failure a message is available from kbc_last_error() on
// the calling thread until the next failing call on that thread. Output
// handles are written only on success.
//
// Strings are UTF-8. Borrowed `const char *` results stay valid while the
// owning handle is alive.

#ifndef KBC_KBC_H_
#define KBC_KBC_H_

#include <stddef.h>
#include <stdint.h>

#if defined(KBC_BUILDING_LIBRARY)
#define KBC_API __attribute__((visibility("default")))
#else
#define KBC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kbc_status {
  KBC_OK = 0,
  KBC_ERROR_USAGE = 1,
  KBC_ERROR_DATA = 2,
  KBC_ERROR_BACKEND = 3,
  KBC_ERROR_TOLERANCE = 4,
  KBC_ERROR_PROTOCOL = 5,
  KBC_ERROR_INVALID_HANDLE = 6,
  KBC_ERROR_INTERNAL = 7,
} kbc_status;

typedef enum kbc_aggregate_mode {
  KBC_AGGREGATE_UNWEIGHTED = 0,
  KBC_AGGREGATE_WEIGHTED = 1,
} kbc_aggregate_mode;

typedef struct kbc_snapshot_s *kbc_snapshot;
typedef struct kbc_registry_s *kbc_registry;
typedef struct kbc_dataset_s *kbc_dataset;
typedef struct kbc_corpus_s *kbc_corpus;
typedef struct kbc_backend_s *kbc_backend;
typedef struct kbc_run_s *kbc_run;
typedef struct kbc_facts_s *kbc_facts;
typedef struct kbc_report_s *kbc_report;
typedef struct kbc_calibration_s *kbc_calibration;

KBC_API const char *kbc_version(void);
KBC_API const char *kbc_last_error(void);
KBC_API const char *kbc_status_name(kbc_status status);

/* ---- names ------------------------------------------------------------ */

// Writes the normalized form of `raw` into `out` (NUL-terminated, truncated
// to `capacity`). `*needed` receives the full length excluding the NUL.
KBC_API kbc_status kbc_normalize(const char *raw, char *out, size_t capacity,
                                 size_t *needed);
KBC_API kbc_status kbc_strip_qualifier(const char *name, char *out,
                                       size_t capacity, size_t *needed);

/* ---- knowledge base ---------------------------------------------------- */

KBC_API kbc_status kbc_snapshot_load(const char *path, kbc_snapshot *out);
// Loads several snapshot shards concurrently; later shards override
// earlier ones for duplicate ids.
KBC_API kbc_status kbc_snapshot_load_shards(const char *const *paths,
                                            size_t count, kbc_snapshot *out);
KBC_API void kbc_snapshot_free(kbc_snapshot snapshot);
KBC_API size_t kbc_snapshot_entity_count(kbc_snapshot snapshot);
KBC_API size_t kbc_snapshot_triple_count(kbc_snapshot snapshot);
// Number of warnings (duplicate ids, ...) raised while loading.
KBC_API size_t kbc_snapshot_warning_count(kbc_snapshot snapshot);
// *result = 1 if the entity is long-tail / ambiguous, else 0.
KBC_API kbc_status kbc_snapshot_is_long_tail(kbc_snapshot snapshot,
                                             const char *entity_id,
                                             int *result);
KBC_API kbc_status kbc_snapshot_is_ambiguous(kbc_snapshot snapshot,
                                             const char *entity_id,
                                             int *result);
// *result = 1 if `surface` matches a name of the entity.
KBC_API kbc_status kbc_snapshot_match_names(kbc_snapshot snapshot,
                                            const char *surface,
                                            const char *entity_id, int *result);

/* ---- relations --------------------------------------------------------- */

KBC_API kbc_status kbc_registry_default(kbc_registry *out);
KBC_API kbc_status kbc_registry_load(const char *path, kbc_registry *out);
// Keeps only the comma-separated pids (e.g. "P19,P20") of `registry`.
KBC_API kbc_status kbc_registry_select(kbc_registry registry, const char *pids,
                                       kbc_registry *out);
KBC_API void kbc_registry_free(kbc_registry registry);
KBC_API size_t kbc_registry_size(kbc_registry registry);
KBC_API const char *kbc_registry_pid(kbc_registry registry, size_t i);
// Renders the generation (kind 0) or corroboration (kind 1) prompt.
KBC_API kbc_status kbc_registry_render(kbc_registry registry, const char *pid,
                                       int kind, const char *subject_label,
                                       char *out, size_t capacity,
                                       size_t *needed);

/* ---- benchmark datasets ------------------------------------------------ */

// per_relation_sample == 0 keeps every subject.
KBC_API kbc_status kbc_dataset_build(kbc_snapshot snapshot,
                                     kbc_registry registry,
                                     size_t per_relation_sample, uint64_t seed,
                                     kbc_dataset *out);
KBC_API kbc_status kbc_dataset_load(const char *path, kbc_dataset *out);
KBC_API kbc_status kbc_dataset_save(kbc_dataset dataset, const char *path);
KBC_API kbc_status kbc_dataset_split(kbc_dataset dataset,
                                     double validation_fraction, uint64_t seed,
                                     kbc_dataset *evaluation,
                                     kbc_dataset *validation);
// Per-relation statistics as JSON and as an aligned text table. Either
// path may be NULL.
KBC_API kbc_status kbc_dataset_write_stats(kbc_dataset dataset,
                                           kbc_registry registry,
                                           const char *json_path,
                                           const char *text_path);
KBC_API void kbc_dataset_free(kbc_dataset dataset);
KBC_API size_t kbc_dataset_size(kbc_dataset dataset);
KBC_API size_t kbc_dataset_triple_count(kbc_dataset dataset);

/* ---- corpus ------------------------------------------------------------ */

KBC_API kbc_status kbc_corpus_load(const char *path, kbc_corpus *out);
KBC_API void kbc_corpus_free(kbc_corpus corpus);
KBC_API size_t kbc_corpus_size(kbc_corpus corpus);
KBC_API kbc_status kbc_corpus_sentence_count(kbc_corpus corpus,
                                             const char *entity_id,
                                             size_t *count);

/* ---- inference backends ------------------------------------------------ */

KBC_API kbc_status kbc_backend_http_create(const char *base_url,
                                           size_t max_in_flight,
                                           kbc_backend *out);
// Deterministic in-process mocks: a gazetteer (JSON object surface ->
// score) for extractive QA and truth facts (JSON lines) for entity
// disambiguation. `registry` may be NULL for the default relations.
KBC_API kbc_status kbc_backend_mock_create(kbc_snapshot snapshot,
                                           kbc_registry registry,
                                           const char *gazetteer_path,
                                           const char *truth_path,
                                           kbc_backend *out);
// Checks the backend's health endpoint (always OK for mocks). The health
// document, as JSON, is copied into `out` when it is non-NULL.
KBC_API kbc_status kbc_backend_health(kbc_backend backend, char *out,
                                      size_t capacity, size_t *needed);
// Serves `backend` over HTTP on host:port until the process exits.
KBC_API kbc_status kbc_backend_serve(kbc_backend backend, const char *host,
                                     int port);
KBC_API void kbc_backend_free(kbc_backend backend);

/* ---- pipeline ---------------------------------------------------------- */

typedef struct kbc_run_options {
  size_t k;                  // candidates per stage, default 20
  size_t window;             // sentences per context, default 1
  size_t workers;            // concurrent work items, default 8
  double failure_tolerance;  // failed-item fraction allowed, default 0.10
} kbc_run_options;

KBC_API void kbc_run_options_init(kbc_run_options *options);

// Runs both stages over every (subject, relation) pair of `dataset`. A
// failure-tolerance breach still yields a run (with facts and failures) and
// returns KBC_ERROR_TOLERANCE.
KBC_API kbc_status kbc_pipeline_run(kbc_dataset dataset, kbc_snapshot snapshot,
                                    kbc_corpus corpus, kbc_registry registry,
                                    kbc_backend backend,
                                    const kbc_run_options *options,
                                    kbc_run *out);
KBC_API void kbc_run_free(kbc_run run);
KBC_API size_t kbc_run_item_count(kbc_run run);
KBC_API size_t kbc_run_failure_count(kbc_run run);
// "subject\tpid\tmessage" of the i-th failed item.
KBC_API const char *kbc_run_failure(kbc_run run, size_t i);
// Copies the run's facts into a new handle.
KBC_API kbc_status kbc_run_facts(kbc_run run, kbc_facts *out);

KBC_API kbc_status kbc_facts_load(const char *path, kbc_facts *out);
KBC_API kbc_status kbc_facts_save(kbc_facts facts, const char *path);
// Facts with fused score >= alpha.
KBC_API kbc_status kbc_facts_filter(kbc_facts facts, double alpha,
                                    kbc_facts *out);
KBC_API void kbc_facts_free(kbc_facts facts);
KBC_API size_t kbc_facts_size(kbc_facts facts);
KBC_API double kbc_facts_fused_score(kbc_facts facts, size_t i);

/* ---- evaluation -------------------------------------------------------- */

// Scores `facts` against `gold` after applying alpha (alpha < 0 keeps all
// facts). `snapshot` and `registry` may be NULL.
KBC_API kbc_status kbc_evaluate(kbc_facts facts, kbc_dataset gold,
                                kbc_snapshot snapshot, double alpha,
                                kbc_report *out);
KBC_API kbc_status kbc_report_aggregate(kbc_report report,
                                        kbc_aggregate_mode mode, double out[3]);
KBC_API size_t kbc_report_relation_count(kbc_report report);
KBC_API kbc_status kbc_report_write(kbc_report report, kbc_registry registry,
                                    const char *json_path,
                                    const char *text_path);
KBC_API void kbc_report_free(kbc_report report);

KBC_API kbc_status kbc_calibrate(kbc_facts facts, kbc_dataset validation,
                                 kbc_snapshot snapshot, kbc_calibration *out);
KBC_API kbc_status kbc_calibration_load(const char *path, kbc_calibration *out);
KBC_API kbc_status kbc_calibration_save(kbc_calibration calibration,
                                        const char *path);
KBC_API double kbc_calibration_alpha(kbc_calibration calibration);
KBC_API double kbc_calibration_best_f1(kbc_calibration calibration);
KBC_API void kbc_calibration_free(kbc_calibration calibration);

// Writes the annotation sheet (CSV) and reports its row count.
KBC_API kbc_status kbc_annotate(kbc_facts facts, kbc_dataset gold,
                                kbc_snapshot snapshot, size_t per_relation,
                                uint64_t seed, const char *csv_path,
                                size_t *rows);

// Aggregates per-relation (precision, recall, f1) rows.
typedef struct kbc_metric_row {
  double precision;
  double recall;
  double f1;
  double weight;  // used in weighted mode (gold triples)
} kbc_metric_row;

KBC_API kbc_status kbc_aggregate(const kbc_metric_row *rows, size_t count,
                                 kbc_aggregate_mode mode, double out[3]);

// Reads a replay file (JSON array of {"pid", "precision", "recall", "f1",
// "n_gold"}) into a report whose aggregates are recomputed from the rows.
KBC_API kbc_status kbc_report_from_rows(const char *path, kbc_report *out);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // KBC_KBC_H_
