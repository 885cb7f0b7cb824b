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
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "kbc/kbc.h"
#include "local_server.h"
#include "test_paths.h"

namespace {

using kbc::testing::DataDir;
using kbc::testing::ScratchDir;

std::string Fixture(const char *name) {
  return (DataDir() / "fixture" / name).string();
}

std::string ReadAll(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

TEST(CApiTest, Version) {
  EXPECT_STRNE(kbc_version(), "");
  EXPECT_STREQ(kbc_status_name(KBC_ERROR_TOLERANCE),
               "failure tolerance exceeded");
}

TEST(CApiTest, NullHandles) {
  EXPECT_EQ(kbc_snapshot_entity_count(nullptr), 0u);
  EXPECT_EQ(kbc_registry_size(nullptr), 0u);
  kbc_snapshot_free(nullptr);
  kbc_dataset_free(nullptr);
  kbc_report *null_out = nullptr;
  EXPECT_EQ(kbc_evaluate(nullptr, nullptr, nullptr, 0.0, null_out),
            KBC_ERROR_INVALID_HANDLE);
  EXPECT_STRNE(kbc_last_error(), "");
  EXPECT_EQ(kbc_snapshot_load(nullptr, nullptr), KBC_ERROR_INVALID_HANDLE);
  int result = 0;
  EXPECT_EQ(kbc_snapshot_is_long_tail(nullptr, "Q1", &result),
            KBC_ERROR_INVALID_HANDLE);
}

TEST(CApiTest, ErrorsCarryMessages) {
  kbc_snapshot snapshot = nullptr;
  EXPECT_EQ(kbc_snapshot_load("/nonexistent.jsonl", &snapshot), KBC_ERROR_DATA);
  EXPECT_EQ(snapshot, nullptr);
  EXPECT_NE(std::string(kbc_last_error()).find("/nonexistent.jsonl"),
            std::string::npos);

  kbc_registry registry = nullptr;
  ASSERT_EQ(kbc_registry_default(&registry), KBC_OK);
  kbc_registry selected = nullptr;
  EXPECT_EQ(kbc_registry_select(registry, "P19,P999", &selected),
            KBC_ERROR_USAGE);
  EXPECT_NE(std::string(kbc_last_error()).find("P999"), std::string::npos);
  kbc_registry_free(registry);
}

TEST(CApiTest, NormalizeBuffers) {
  size_t needed = 0;
  ASSERT_EQ(kbc_normalize("  Lhasa  de Sela. ", nullptr, 0, &needed), KBC_OK);
  EXPECT_EQ(needed, std::strlen("lhasa de sela"));
  char small[6];
  ASSERT_EQ(kbc_normalize("Lhasa de Sela", small, sizeof small, &needed),
            KBC_OK);
  EXPECT_STREQ(small, "lhasa");
  std::vector<char> big(needed + 1);
  ASSERT_EQ(kbc_normalize("Lhasa de Sela", big.data(), big.size(), nullptr),
            KBC_OK);
  EXPECT_STREQ(big.data(), "lhasa de sela");
  char stripped[64];
  ASSERT_EQ(
      kbc_strip_qualifier("Bratsch (band)", stripped, sizeof stripped, nullptr),
      KBC_OK);
  EXPECT_STREQ(stripped, "Bratsch");
  EXPECT_EQ(kbc_normalize(nullptr, small, sizeof small, nullptr),
            KBC_ERROR_USAGE);
}

TEST(CApiTest, RegistryRender) {
  kbc_registry registry = nullptr;
  ASSERT_EQ(kbc_registry_default(&registry), KBC_OK);
  EXPECT_EQ(kbc_registry_size(registry), 8u);
  EXPECT_STREQ(kbc_registry_pid(registry, 0), "P108");
  EXPECT_EQ(kbc_registry_pid(registry, 8), nullptr);
  char text[256];
  ASSERT_EQ(kbc_registry_render(registry, "P19", 0, "Kenji Mori", text,
                                sizeof text, nullptr),
            KBC_OK);
  EXPECT_STREQ(text, "the person Kenji Mori was born in which place?");
  ASSERT_EQ(kbc_registry_render(registry, "P19", 1, "Kenji Mori", text,
                                sizeof text, nullptr),
            KBC_OK);
  EXPECT_STREQ(text,
               "the person Kenji Mori was born in [ENT] this place [ENT]");
  kbc_registry_free(registry);
}

TEST(CApiTest, SnapshotQueries) {
  kbc_snapshot snapshot = nullptr;
  ASSERT_EQ(kbc_snapshot_load(Fixture("snapshot.jsonl").c_str(), &snapshot),
            KBC_OK)
      << kbc_last_error();
  EXPECT_GT(kbc_snapshot_entity_count(snapshot), 40u);
  int result = -1;
  ASSERT_EQ(kbc_snapshot_is_ambiguous(snapshot, "Q2256", &result), KBC_OK);
  EXPECT_EQ(result, 1);
  ASSERT_EQ(kbc_snapshot_match_names(snapshot, "Lhasa", "Q1001", &result),
            KBC_OK);
  EXPECT_EQ(result, 1);
  ASSERT_EQ(kbc_snapshot_match_names(snapshot, "everyone", "Q4001", &result),
            KBC_OK);
  EXPECT_EQ(result, 0);
  EXPECT_EQ(kbc_snapshot_is_long_tail(snapshot, "Q404404", &result),
            KBC_ERROR_DATA);
  kbc_snapshot_free(snapshot);
}

TEST(CApiTest, Aggregate) {
  kbc_metric_row rows[] = {{0.5, 0.5, 0.5, 1.0}, {1.0, 1.0, 1.0, 3.0}};
  double out[3];
  ASSERT_EQ(kbc_aggregate(rows, 2, KBC_AGGREGATE_UNWEIGHTED, out), KBC_OK);
  EXPECT_DOUBLE_EQ(out[0], 0.75);
  ASSERT_EQ(kbc_aggregate(rows, 2, KBC_AGGREGATE_WEIGHTED, out), KBC_OK);
  EXPECT_DOUBLE_EQ(out[0], 0.875);
  EXPECT_EQ(kbc_aggregate(rows, 0, KBC_AGGREGATE_UNWEIGHTED, out),
            KBC_ERROR_USAGE);
}

TEST(CApiTest, ReportFromRows) {
  kbc_report report = nullptr;
  std::string path = (DataDir() / "reported_relation_scores.json").string();
  ASSERT_EQ(kbc_report_from_rows(path.c_str(), &report), KBC_OK)
      << kbc_last_error();
  EXPECT_EQ(kbc_report_relation_count(report), 8u);
  double out[3];
  ASSERT_EQ(kbc_report_aggregate(report, KBC_AGGREGATE_UNWEIGHTED, out),
            KBC_OK);
  EXPECT_NEAR(100 * out[0], 44.2, 0.05);
  EXPECT_NEAR(100 * out[1], 43.2, 0.05);
  EXPECT_NEAR(100 * out[2], 42.2, 0.05);
  kbc_report_free(report);
}

// Loads the fixture and runs the whole flow: build, split, validate,
// calibrate, evaluate, annotate.
class FixtureFlow : public ::testing::Test {
 protected:
  void SetUp() override {
    ASSERT_EQ(kbc_snapshot_load(Fixture("snapshot.jsonl").c_str(), &snapshot_),
              KBC_OK)
        << kbc_last_error();
    ASSERT_EQ(kbc_registry_default(&registry_), KBC_OK);
    ASSERT_EQ(kbc_corpus_load(Fixture("corpus.jsonl").c_str(), &corpus_),
              KBC_OK)
        << kbc_last_error();
    ASSERT_EQ(kbc_dataset_build(snapshot_, registry_, 0, 1, &dataset_), KBC_OK)
        << kbc_last_error();
    ASSERT_EQ(kbc_backend_mock_create(
                  snapshot_, registry_, Fixture("gazetteer.json").c_str(),
                  Fixture("truth.jsonl").c_str(), &backend_),
              KBC_OK)
        << kbc_last_error();
  }
  void TearDown() override {
    kbc_backend_free(backend_);
    kbc_dataset_free(dataset_);
    kbc_corpus_free(corpus_);
    kbc_registry_free(registry_);
    kbc_snapshot_free(snapshot_);
  }

  kbc_facts Run(kbc_dataset dataset, size_t workers) {
    kbc_run_options options;
    kbc_run_options_init(&options);
    options.workers = workers;
    kbc_run run = nullptr;
    EXPECT_EQ(kbc_pipeline_run(dataset, snapshot_, corpus_, registry_, backend_,
                               &options, &run),
              KBC_OK)
        << kbc_last_error();
    EXPECT_EQ(kbc_run_failure_count(run), 0u);
    EXPECT_EQ(kbc_run_item_count(run), kbc_dataset_size(dataset));
    kbc_facts facts = nullptr;
    EXPECT_EQ(kbc_run_facts(run, &facts), KBC_OK);
    kbc_run_free(run);
    return facts;
  }

  kbc_snapshot snapshot_ = nullptr;
  kbc_registry registry_ = nullptr;
  kbc_corpus corpus_ = nullptr;
  kbc_dataset dataset_ = nullptr;
  kbc_backend backend_ = nullptr;
};

TEST_F(FixtureFlow, EndToEnd) {
  kbc_dataset evaluation = nullptr, validation = nullptr;
  ASSERT_EQ(kbc_dataset_split(dataset_, 0.3, 1, &evaluation, &validation),
            KBC_OK)
      << kbc_last_error();
  EXPECT_EQ(kbc_dataset_size(evaluation) + kbc_dataset_size(validation),
            kbc_dataset_size(dataset_));

  kbc_facts val_facts = Run(validation, 2);
  kbc_calibration calibration = nullptr;
  ASSERT_EQ(kbc_calibrate(val_facts, validation, snapshot_, &calibration),
            KBC_OK)
      << kbc_last_error();
  double alpha = kbc_calibration_alpha(calibration);
  EXPECT_GT(alpha, 0.75);
  EXPECT_DOUBLE_EQ(kbc_calibration_best_f1(calibration), 1.0);

  kbc_facts facts = Run(evaluation, 4);
  kbc_report report = nullptr;
  ASSERT_EQ(kbc_evaluate(facts, evaluation, snapshot_, alpha, &report), KBC_OK);
  double values[3];
  ASSERT_EQ(kbc_report_aggregate(report, KBC_AGGREGATE_UNWEIGHTED, values),
            KBC_OK);
  EXPECT_DOUBLE_EQ(values[0], 1.0);
  EXPECT_DOUBLE_EQ(values[1], 1.0);
  EXPECT_DOUBLE_EQ(values[2], 1.0);

  auto dir = ScratchDir("capi_flow");
  std::string json = (dir / "report.json").string();
  std::string text = (dir / "report.txt").string();
  ASSERT_EQ(kbc_report_write(report, registry_, json.c_str(), text.c_str()),
            KBC_OK);
  EXPECT_NE(ReadAll(text).find("100.0"), std::string::npos);

  kbc_facts kept = nullptr;
  ASSERT_EQ(kbc_facts_filter(facts, alpha, &kept), KBC_OK);
  for (size_t i = 0; i < kbc_facts_size(kept); ++i) {
    EXPECT_GE(kbc_facts_fused_score(kept, i), alpha);
  }
  std::string csv = (dir / "annotation.csv").string();
  size_t rows = 99;
  ASSERT_EQ(
      kbc_annotate(facts, evaluation, snapshot_, 25, 1, csv.c_str(), &rows),
      KBC_OK);
  EXPECT_GT(rows, 0u);
  size_t kept_rows = 99;
  ASSERT_EQ(
      kbc_annotate(kept, evaluation, snapshot_, 25, 1, csv.c_str(), &kept_rows),
      KBC_OK);
  EXPECT_EQ(kept_rows, 0u);

  kbc_facts_free(kept);
  kbc_report_free(report);
  kbc_facts_free(facts);
  kbc_calibration_free(calibration);
  kbc_facts_free(val_facts);
  kbc_dataset_free(validation);
  kbc_dataset_free(evaluation);
}

TEST_F(FixtureFlow, RerunsAreByteIdentical) {
  auto dir = ScratchDir("capi_rerun");
  std::string a = (dir / "a.jsonl").string();
  std::string b = (dir / "b.jsonl").string();
  kbc_facts first = Run(dataset_, 1);
  kbc_facts second = Run(dataset_, 8);
  ASSERT_EQ(kbc_facts_save(first, a.c_str()), KBC_OK);
  ASSERT_EQ(kbc_facts_save(second, b.c_str()), KBC_OK);
  EXPECT_EQ(ReadAll(a), ReadAll(b));
  kbc_facts loaded = nullptr;
  ASSERT_EQ(kbc_facts_load(a.c_str(), &loaded), KBC_OK);
  EXPECT_EQ(kbc_facts_size(loaded), kbc_facts_size(first));
  kbc_facts_free(loaded);
  kbc_facts_free(first);
  kbc_facts_free(second);
}

TEST_F(FixtureFlow, DatasetSaveLoadAndStats) {
  auto dir = ScratchDir("capi_dataset");
  std::string path = (dir / "dataset.jsonl").string();
  ASSERT_EQ(kbc_dataset_save(dataset_, path.c_str()), KBC_OK);
  kbc_dataset loaded = nullptr;
  ASSERT_EQ(kbc_dataset_load(path.c_str(), &loaded), KBC_OK);
  EXPECT_EQ(kbc_dataset_size(loaded), kbc_dataset_size(dataset_));
  EXPECT_EQ(kbc_dataset_triple_count(loaded),
            kbc_dataset_triple_count(dataset_));
  std::string json = (dir / "stats.json").string();
  std::string text = (dir / "stats.txt").string();
  ASSERT_EQ(
      kbc_dataset_write_stats(loaded, registry_, json.c_str(), text.c_str()),
      KBC_OK);
  EXPECT_NE(ReadAll(text).find("P19"), std::string::npos);
  kbc_dataset_free(loaded);

  kbc_dataset eval = nullptr, val = nullptr;
  EXPECT_EQ(kbc_dataset_split(dataset_, 0.0, 1, &eval, &val), KBC_ERROR_USAGE);
}

TEST_F(FixtureFlow, MockHealth) {
  char buffer[256];
  ASSERT_EQ(kbc_backend_health(backend_, buffer, sizeof buffer, nullptr),
            KBC_OK);
  EXPECT_NE(std::string(buffer).find("\"ok\""), std::string::npos);
}

// A model server whose QA endpoint answers with a malformed payload.
TEST_F(FixtureFlow, ToleranceBreachStillReturnsTheRun) {
  kbc::testing::LocalServer server;
  server.server().Post(
      "/v1/qa", [](const httplib::Request &, httplib::Response &res) {
        res.set_content("{\"answers\": 5}", "application/json");
      });
  server.server().Post(
      "/v1/ed", [](const httplib::Request &, httplib::Response &res) {
        res.set_content("{\"entities\": []}", "application/json");
      });
  server.server().Get("/v1/health", [](const httplib::Request &,
                                       httplib::Response &res) {
    res.set_content("{\"status\":\"ok\",\"models\":{}}", "application/json");
  });
  std::string url = server.Start();
  kbc_backend http = nullptr;
  ASSERT_EQ(kbc_backend_http_create(url.c_str(), 4, &http), KBC_OK);
  char health[256];
  ASSERT_EQ(kbc_backend_health(http, health, sizeof health, nullptr), KBC_OK)
      << kbc_last_error();

  kbc_run run = nullptr;
  EXPECT_EQ(kbc_pipeline_run(dataset_, snapshot_, corpus_, registry_, http,
                             nullptr, &run),
            KBC_ERROR_TOLERANCE);
  EXPECT_NE(std::string(kbc_last_error()).find("failure tolerance"),
            std::string::npos);
  ASSERT_NE(run, nullptr);
  EXPECT_GT(kbc_run_failure_count(run), 0u);
  std::string failure = kbc_run_failure(run, 0);
  EXPECT_NE(failure.find("\tP"), std::string::npos) << failure;
  EXPECT_NE(failure.find("answers"), std::string::npos) << failure;
  EXPECT_EQ(kbc_run_failure(run, kbc_run_failure_count(run)), nullptr);
  kbc_run_free(run);
  kbc_backend_free(http);
}

TEST(CApiTest, UnreachableBackend) {
  kbc_backend http = nullptr;
  ASSERT_EQ(kbc_backend_http_create("http://127.0.0.1:1", 2, &http), KBC_OK);
  char health[64];
  EXPECT_EQ(kbc_backend_health(http, health, sizeof health, nullptr),
            KBC_ERROR_BACKEND);
  kbc_backend_free(http);
  EXPECT_EQ(kbc_backend_http_create("", 2, &http), KBC_ERROR_USAGE);
}

}  // namespace
