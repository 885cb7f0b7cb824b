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

#include "kbc/io.h"

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.h"

namespace kbc {
namespace {

MaltRecord SampleRecord(std::mt19937_64 &rng, size_t i) {
  MaltRecord record;
  record.subject = EntityId("Q" + std::to_string(i));
  record.subject_label = testing::RandomName(rng);
  record.pid = "P19";
  size_t n = 1 + rng() % 3;
  for (size_t o = 0; o < n; ++o) {
    GoldObject object;
    object.id = EntityId("Q" + std::to_string(1000 + o));
    object.label = testing::RandomName(rng) + " \"quoted\" \\ ünï";
    if (rng() % 2) object.aliases = {testing::RandomName(rng), "alt"};
    record.gold_objects.push_back(object);
  }
  record.flags = FactFlags{rng() % 2 == 0, rng() % 2 == 0, rng() % 2 == 0};
  return record;
}

CorroboratedFact SampleFact(std::mt19937_64 &rng, size_t i) {
  std::uniform_real_distribution<double> u(0, 1);
  CorroboratedFact fact;
  fact.subject = EntityId("Q" + std::to_string(i));
  fact.subject_label = testing::RandomName(rng);
  fact.pid = "P175";
  fact.object = EntityId("Q" + std::to_string(rng() % 100));
  fact.object_label = testing::RandomName(rng);
  fact.surface = testing::RandomName(rng);
  fact.gen_score = u(rng);
  fact.ed_score = u(rng);
  fact.fused_score = (fact.gen_score + fact.ed_score) / 2;
  fact.evidence_index = rng() % 30;
  fact.evidence_text = "Line with\ttab and \"quotes\".";
  return fact;
}

TEST(IoTest, DatasetRoundTrip) {
  std::mt19937_64 rng(3);
  std::vector<MaltRecord> records;
  for (size_t i = 0; i < 200; ++i) records.push_back(SampleRecord(rng, i));
  std::stringstream buffer;
  WriteDataset(records, buffer);
  EXPECT_EQ(ReadDataset(buffer), records);

  std::string path = (testing::ScratchDir("io_dataset") / "d.jsonl").string();
  WriteDatasetFile(records, path);
  EXPECT_EQ(ReadDatasetFile(path), records);
}

TEST(IoTest, FactsRoundTripIsExact) {
  std::mt19937_64 rng(4);
  std::vector<CorroboratedFact> facts;
  for (size_t i = 0; i < 200; ++i) facts.push_back(SampleFact(rng, i));
  std::stringstream buffer;
  WriteFacts(facts, buffer);
  std::string first = buffer.str();
  auto read = ReadFacts(buffer);
  EXPECT_EQ(read, facts);
  std::stringstream again;
  WriteFacts(read, again);
  EXPECT_EQ(again.str(), first);
}

TEST(IoTest, CalibrationRoundTrip) {
  CalibrationResult result;
  result.alpha = 0.625;
  result.best_f1 = 0.4;
  result.curve = {{0.0, 0.1, 0.9, 0.18}, {0.625, 0.5, 0.333, 0.4}};
  CalibrationResult back = CalibrationFromJson(ToJson(result));
  EXPECT_EQ(back.alpha, result.alpha);
  EXPECT_EQ(back.best_f1, result.best_f1);
  ASSERT_EQ(back.curve.size(), 2u);
  EXPECT_EQ(back.curve[1].recall, 0.333);
  EXPECT_THROW(CalibrationFromJson(nlohmann::json::object()), Error);
}

TEST(IoTest, BlankLinesAreSkipped) {
  std::stringstream in(
      "\n"
      "{\"subject\":\"Q1\",\"pid\":\"P19\",\"gold_objects\":"
      "[{\"id\":\"Q2\",\"label\":\"Paris\"}]}\n"
      "   \n");
  auto records = ReadDataset(in);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].gold_objects[0].label, "Paris");
  EXPECT_FALSE(records[0].flags.long_tail);
}

struct MalformedCase {
  std::string name;
  std::string text;
  std::string expect;
};

void PrintTo(const MalformedCase &c, std::ostream *os) { *os << c.name; }

class MalformedDatasetTest : public ::testing::TestWithParam<MalformedCase> {};

TEST_P(MalformedDatasetTest, NamesTheLine) {
  std::stringstream in(GetParam().text);
  try {
    ReadDataset(in, "d.jsonl");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kData);
    std::string what = e.what();
    EXPECT_NE(what.find(GetParam().expect), std::string::npos) << what;
  }
}

INSTANTIATE_TEST_SUITE_P(
    Cases, MalformedDatasetTest,
    ::testing::Values(
        MalformedCase{"NotJson", "{\"subject\":\"Q1\",\n", "d.jsonl:1"},
        MalformedCase{"MissingPid",
                      "\n{\"subject\":\"Q1\",\"gold_objects\":[]}\n",
                      "d.jsonl:2"},
        MalformedCase{
            "NoGold",
            "{\"subject\":\"Q1\",\"pid\":\"P19\",\"gold_objects\":[]}",
            "no gold objects"}),
    [](const auto &info) { return info.param.name; });

TEST(IoTest, MalformedFact) {
  std::stringstream in("{\"subject\":\"Q1\",\"pid\":\"P19\"}\n");
  EXPECT_THROW(ReadFacts(in), Error);
}

TEST(IoTest, MissingFile) {
  try {
    ReadFactsFile("/nonexistent/facts.jsonl");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kData);
    EXPECT_NE(std::string(e.what()).find("/nonexistent/facts.jsonl"),
              std::string::npos);
  }
}

TEST(IoTest, MetricRows) {
  auto rows =
      ReadMetricRowsFile((testing::DataDir() / "reported_relation_scores.json").string());
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_EQ(rows[0].pid, "P112");
  EXPECT_DOUBLE_EQ(rows[0].f1, 0.5);

  auto dir = testing::ScratchDir("io_rows");
  std::string empty = (dir / "empty.json").string();
  WriteTextFile(empty, "[]");
  EXPECT_THROW(ReadMetricRowsFile(empty), Error);
  std::string bad = (dir / "bad.json").string();
  WriteTextFile(bad, "[{\"pid\":\"P1\"}]");
  EXPECT_THROW(ReadMetricRowsFile(bad), Error);
}

TEST(IoTest, ReportJson) {
  EvalReport report;
  report.rows = {MakeMetrics("P19", 1, 1, 1)};
  report.unweighted = AggregateMetrics(report.rows, AggregateMode::kUnweighted);
  report.weighted = report.unweighted;
  nlohmann::json json = ToJson(report);
  EXPECT_TRUE(json["alpha"].is_null());
  EXPECT_EQ(json["relations"][0]["tp"], 1);
  EXPECT_DOUBLE_EQ(json["aggregate_unweighted"]["f1"].get<double>(), 0.5);
}

}  // namespace
}  // namespace kbc
