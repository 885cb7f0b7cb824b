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

#include "kbc/backend.h"

#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.h"

namespace kbc {
namespace {

using testing::EntityLine;
using testing::SnapshotFromLines;

std::shared_ptr<const KbSnapshot> BirminghamKb() {
  return std::make_shared<const KbSnapshot>(SnapshotFromLines({
      EntityLine("Q2256", "Birmingham", 900),
      EntityLine("Q79867", "Birmingham", 700),
      EntityLine("Q5", "Bratsch (band)", 20),
      EntityLine("Q1001", "Lhasa de Sela", 9, {"Lhasa"}, {{"P19", "Q2256"}}),
  }));
}

// Scripted backend for exercising the validating wrappers.
class FixedQa : public QaBackend {
 public:
  explicit FixedQa(std::vector<SpanAnswer> answers) : answers_(answers) {}
  std::vector<SpanAnswer> Extract(const QaRequest &) override {
    return answers_;
  }

 private:
  std::vector<SpanAnswer> answers_;
};

class FixedEd : public EdBackend {
 public:
  explicit FixedEd(std::vector<EntityGuess> guesses) : guesses_(guesses) {}
  std::vector<EntityGuess> Generate(const EdRequest &) override {
    return guesses_;
  }

 private:
  std::vector<EntityGuess> guesses_;
};

ErrorCode CodeOf(const std::function<void()> &f) {
  try {
    f();
  } catch (const Error &e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

TEST(MockQaTest, GazetteerHit) {
  MockQaBackend qa({{"Bratsch", 1.0}});
  std::string context = "She joined the group Bratsch in 1990.";
  auto answers = QaExtract(qa, {"which group?", context, 20});
  ASSERT_EQ(answers.size(), 1u);
  EXPECT_EQ(answers[0].text, "Bratsch");
  EXPECT_EQ(answers[0].score, 1.0);
  EXPECT_EQ(context.substr(answers[0].char_start,
                           answers[0].char_end - answers[0].char_start),
            "Bratsch");
}

TEST(MockQaTest, NoHitAndEmptyGazetteer) {
  MockQaBackend qa({{"Bratsch", 1.0}});
  EXPECT_TRUE(QaExtract(qa, {"who?", "Nothing relevant.", 20}).empty());
  MockQaBackend empty({});
  EXPECT_TRUE(QaExtract(empty, {"who?", "Bratsch everywhere.", 20}).empty());
}

TEST(MockQaTest, WholeWordsOnly) {
  MockQaBackend qa({{"Paris", 0.9}, {"everyone", 0.6}});
  EXPECT_TRUE(QaExtract(qa, {"where?", "Parisian Everyone.", 20}).empty());
  auto answers = QaExtract(qa, {"where?", "Parisian life, Paris.", 20});
  ASSERT_EQ(answers.size(), 1u);
  EXPECT_EQ(answers[0].char_start, 15u);
}

TEST(MockQaTest, KOneKeepsEarliestOfEqualScores) {
  MockQaBackend qa({{"Zagreb", 1.0}, {"Athens", 1.0}});
  auto answers = QaExtract(qa, {"where?", "From Zagreb to Athens.", 1});
  ASSERT_EQ(answers.size(), 1u);
  EXPECT_EQ(answers[0].text, "Zagreb");
  answers = QaExtract(qa, {"where?", "From Zagreb to Athens.", 20});
  ASSERT_EQ(answers.size(), 2u);
  EXPECT_EQ(answers[1].text, "Athens");
}

TEST(MockEdTest, PlantedObjectScoresOne) {
  auto kb = BirminghamKb();
  RelationRegistry registry = RelationRegistry::Default();
  MockEdBackend ed(kb, registry,
                   {GroundFact{EntityId("Q1001"), "P19", EntityId("Q2256")}});
  std::string prompt =
      RenderCorroborationPrompt(registry.Get("P19"), "Lhasa de Sela").text;
  auto guesses = EdGenerate(ed, {prompt, "She was born in Birmingham.", 20});
  // Both Birminghams appear; the true one is scored 1.0, the other 0.5.
  ASSERT_EQ(guesses.size(), 2u);
  EXPECT_EQ(guesses[0], (EntityGuess{"Birmingham", 1.0}));
  EXPECT_EQ(guesses[1], (EntityGuess{"Birmingham", 0.5}));
}

TEST(MockEdTest, NoEntityInContext) {
  auto kb = BirminghamKb();
  MockEdBackend ed(kb, RelationRegistry::Default(), {});
  std::string prompt =
      RenderCorroborationPrompt(RelationRegistry::Default().Get("P19"),
                                "Lhasa de Sela")
          .text;
  EXPECT_TRUE(EdGenerate(ed, {prompt, "Nothing to see here.", 20}).empty());
}

TEST(MockEdTest, EmptyTruthScoresHalf) {
  auto kb = BirminghamKb();
  MockEdBackend ed(kb, RelationRegistry::Default(), {});
  std::string prompt =
      RenderCorroborationPrompt(RelationRegistry::Default().Get("P175"),
                                "Night Ferry")
          .text;
  auto guesses =
      EdGenerate(ed, {prompt, "Performed by Bratsch in Birmingham.", 20});
  ASSERT_EQ(guesses.size(), 3u);
  for (const auto &g : guesses) EXPECT_EQ(g.score, 0.5);
  // Ties are ordered by name; the band is found through its stripped label.
  EXPECT_EQ(guesses[0].name, "Birmingham");
  EXPECT_EQ(guesses[2].name, "Bratsch (band)");
}

TEST(MockEdTest, AliasInContext) {
  auto kb = BirminghamKb();
  MockEdBackend ed(kb, RelationRegistry::Default(), {});
  std::string prompt =
      RenderCorroborationPrompt(RelationRegistry::Default().Get("P175"), "Song")
          .text;
  auto guesses = EdGenerate(ed, {prompt, "Sung by Lhasa, live.", 1});
  ASSERT_EQ(guesses.size(), 1u);
  EXPECT_EQ(guesses[0].name, "Lhasa de Sela");
}

TEST(WrapperTest, RejectsInvalidRequests) {
  MockQaBackend qa({});
  EXPECT_EQ(CodeOf([&] { QaExtract(qa, {"no question mark", "c", 20}); }),
            ErrorCode::kUsage);
  EXPECT_EQ(CodeOf([&] { QaExtract(qa, {"why?", "c", 0}); }),
            ErrorCode::kUsage);
  FixedEd ed({});
  EXPECT_EQ(CodeOf([&] { EdGenerate(ed, {"only [ENT] one", "c", 20}); }),
            ErrorCode::kUsage);
  EXPECT_EQ(CodeOf([&] { EdGenerate(ed, {"[ENT] x [ENT]", "c", 0}); }),
            ErrorCode::kUsage);
}

TEST(WrapperTest, RejectsMalformedAnswers) {
  FixedQa out_of_range({{"abc", 1.5, 0, 3}});
  EXPECT_EQ(CodeOf([&] { QaExtract(out_of_range, {"q?", "abcdef", 20}); }),
            ErrorCode::kProtocol);
  FixedQa nan({{"abc", std::nan(""), 0, 3}});
  EXPECT_EQ(CodeOf([&] { QaExtract(nan, {"q?", "abcdef", 20}); }),
            ErrorCode::kProtocol);
  FixedQa bad_slice({{"abd", 0.5, 0, 3}});
  EXPECT_EQ(CodeOf([&] { QaExtract(bad_slice, {"q?", "abcdef", 20}); }),
            ErrorCode::kProtocol);
  FixedQa past_end({{"ef", 0.5, 4, 9}});
  EXPECT_EQ(CodeOf([&] { QaExtract(past_end, {"q?", "abcdef", 20}); }),
            ErrorCode::kProtocol);
  FixedEd empty_name({{"", 0.5}});
  EXPECT_EQ(CodeOf([&] { EdGenerate(empty_name, {"[ENT] [ENT]", "c", 20}); }),
            ErrorCode::kProtocol);
  FixedEd negative({{"x", -0.1}});
  EXPECT_EQ(CodeOf([&] { EdGenerate(negative, {"[ENT] [ENT]", "c", 20}); }),
            ErrorCode::kProtocol);
}

TEST(WrapperTest, SortsAndTruncates) {
  FixedQa qa({{"b", 0.5, 1, 2}, {"a", 0.9, 0, 1}, {"c", 0.5, 2, 3}});
  auto answers = QaExtract(qa, {"q?", "abc", 2});
  ASSERT_EQ(answers.size(), 2u);
  EXPECT_EQ(answers[0].text, "a");
  EXPECT_EQ(answers[1].text, "b");
  FixedEd ed({{"zeta", 0.5}, {"alpha", 0.5}, {"mid", 0.7}});
  auto guesses = EdGenerate(ed, {"[ENT] [ENT]", "c", 20});
  EXPECT_EQ(guesses[0].name, "mid");
  EXPECT_EQ(guesses[1].name, "alpha");
  EXPECT_EQ(guesses[2].name, "zeta");
}

TEST(FilesTest, GazetteerAndTruth) {
  std::filesystem::path dir = testing::ScratchDir("backend_files");
  {
    std::ofstream g(dir / "g.json");
    g << R"({"Paris": 1.0, "everyone": 0.6})";
    std::ofstream t(dir / "t.jsonl");
    t << R"({"subject": "Q1", "pid": "P19", "object": "Q2"})" << "\n";
    std::ofstream bad(dir / "bad.json");
    bad << R"({"Paris": 2.0})";
  }
  auto gazetteer = LoadGazetteerFile((dir / "g.json").string());
  EXPECT_EQ(gazetteer.size(), 2u);
  EXPECT_EQ(gazetteer.at("everyone"), 0.6);
  auto truth = LoadTruthFile((dir / "t.jsonl").string());
  EXPECT_EQ(truth.size(), 1u);
  EXPECT_THROW(LoadGazetteerFile((dir / "bad.json").string()), Error);
  EXPECT_THROW(LoadGazetteerFile((dir / "none.json").string()), Error);
}

}  // namespace
}  // namespace kbc
