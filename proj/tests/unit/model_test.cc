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

#include "kbc/model.h"

#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "kbc/aggregate.h"
#include "kbc/status.h"
#include "test_util.h"

namespace kbc {
namespace {

TEST(EntityIdTest, RejectsEmpty) {
  EXPECT_THROW(EntityId(""), Error);
  EXPECT_EQ(EntityId("Q2256").str(), "Q2256");
  EXPECT_NE(EntityId("Q2256"), EntityId("q2256"));
}

TEST(EntityRecordTest, NamesStartWithLabel) {
  EntityRecord e;
  e.label = "Lhasa de Sela";
  e.aliases = {"Lhasa", "Sela"};
  EXPECT_EQ(e.Names(),
            (std::vector<std::string>{"Lhasa de Sela", "Lhasa", "Sela"}));
}

TEST(NormalizeTest, Examples) {
  EXPECT_EQ(Normalize("Bratsch").str(), "bratsch");
  EXPECT_EQ(Normalize("  Anyone  and Everyone ").str(), "anyone and everyone");
  EXPECT_EQ(Normalize("Birmingham, Alabama").str(), "birmingham, alabama");
}

TEST(NormalizeTest, EmptyAndPunctuationOnly) {
  EXPECT_TRUE(Normalize("").empty());
  EXPECT_TRUE(Normalize("   ").empty());
  EXPECT_TRUE(Normalize(" ... ").empty());
  EXPECT_FALSE(Normalize("x") == Normalize(""));
}

TEST(NormalizeTest, CompatibilityAndCaseFolding) {
  EXPECT_EQ(Normalize("Ｆｕｌｌ").str(), "full");
  EXPECT_EQ(Normalize("STRASSE").str(), Normalize("Straße").str());
  EXPECT_EQ(Normalize("ﬁsh").str(), "fish");
  EXPECT_EQ(Normalize("Montréal"), Normalize("Montréal"));
}

TEST(NormalizeTest, StripsSurroundingPunctuationOnly) {
  EXPECT_EQ(Normalize("\"Paris.\"").str(), "paris");
  EXPECT_EQ(Normalize("«Paris»").str(), "paris");
  EXPECT_EQ(Normalize("St. Louis").str(), "st. louis");
  EXPECT_EQ(Normalize("x ").str(), "x");
  EXPECT_EQ(Normalize("Bratsch (band)").str(), "bratsch (band)");
  EXPECT_EQ(Normalize("(band)").str(), "(band)");
  EXPECT_EQ(Normalize("Bratsch (band").str(), "bratsch (band");
  EXPECT_EQ(Normalize("Bratsch)").str(), "bratsch");
}

TEST(NormalizeTest, CollapsesAllWhitespace) {
  EXPECT_EQ(Normalize("a\t\tb\n c d").str(), "a b c d");
}

TEST(NormalizeTest, IdempotentOnRandomNames) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    std::string name = testing::RandomName(rng);
    NormalizedName once = Normalize(name);
    EXPECT_EQ(Normalize(once.str()), once) << name;
  }
  for (const char *tricky : {" .(a). ", "\"(x)\"", "- -x- -", "..", "((a))",
                             "a ( b )", "İstanbul", "ǅ", "'n'"}) {
    NormalizedName once = Normalize(tricky);
    EXPECT_EQ(Normalize(once.str()), once) << tricky;
  }
}

TEST(NormalizeTest, InvalidUtf8IsTotal) {
  std::string bad = "abc\xff\xfe";
  NormalizedName n = Normalize(bad);
  EXPECT_EQ(Normalize(n.str()), n);
}

TEST(StripQualifierTest, Examples) {
  EXPECT_EQ(StripQualifier("Bratsch (band)"), "Bratsch");
  EXPECT_EQ(StripQualifier("Bratsch"), "Bratsch");
  EXPECT_EQ(StripQualifier("A (b) (c)"), "A (b)");
}

TEST(StripQualifierTest, EdgeCases) {
  EXPECT_EQ(StripQualifier("(band)"), "(band)");
  EXPECT_EQ(StripQualifier("Bratsch (band) "), "Bratsch");
  EXPECT_EQ(StripQualifier("Bratsch (band"), "Bratsch (band");
  EXPECT_EQ(StripQualifier("f(x) and more"), "f(x) and more");
  EXPECT_EQ(StripQualifier("A (b (c))"), "A");
  EXPECT_EQ(StripQualifier(""), "");
}

TEST(CountTest, TokensAndOccurrences) {
  EXPECT_EQ(CountTokens("Anyone and Everyone"), 3u);
  EXPECT_EQ(CountTokens("  Bratsch "), 1u);
  EXPECT_EQ(CountTokens(""), 0u);
  EXPECT_EQ(CountOccurrences("[ENT] this person [ENT]", "[ENT]"), 2u);
  EXPECT_EQ(CountOccurrences("aaaa", "aa"), 2u);
  EXPECT_EQ(CountOccurrences("abc", ""), 0u);
}

TEST(AggregateTest, UnweightedAndWeighted) {
  std::vector<AggregateRow> rows = {{1, {0.2, 0.4, 0.6}}, {3, {0.6, 0.8, 1.0}}};
  auto u = Aggregate(rows, AggregateMode::kUnweighted);
  EXPECT_DOUBLE_EQ(u[0], 0.4);
  EXPECT_DOUBLE_EQ(u[1], 0.6);
  EXPECT_DOUBLE_EQ(u[2], 0.8);
  auto w = Aggregate(rows, AggregateMode::kWeighted);
  EXPECT_DOUBLE_EQ(w[0], 0.5);
  EXPECT_DOUBLE_EQ(w[1], 0.7);
  EXPECT_DOUBLE_EQ(w[2], 0.9);
}

TEST(AggregateTest, SingleRowAndEqualWeights) {
  std::vector<AggregateRow> one = {{5, {0.1, 0.2, 0.3}}};
  EXPECT_EQ(Aggregate(one, AggregateMode::kUnweighted), one[0].values);
  EXPECT_EQ(Aggregate(one, AggregateMode::kWeighted), one[0].values);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<AggregateRow> rows;
  for (int i = 0; i < 8; ++i) rows.push_back({2.0, {u(rng), u(rng), u(rng)}});
  auto a = Aggregate(rows, AggregateMode::kUnweighted);
  auto b = Aggregate(rows, AggregateMode::kWeighted);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
}

TEST(AggregateTest, EmptyYieldsZeros) {
  std::vector<AggregateRow> none;
  EXPECT_EQ(Aggregate(none, AggregateMode::kUnweighted),
            (std::array<double, 3>{0, 0, 0}));
  std::vector<AggregateRow> weightless = {{0, {1, 1, 1}}};
  EXPECT_EQ(Aggregate(weightless, AggregateMode::kWeighted),
            (std::array<double, 3>{0, 0, 0}));
}

TEST(StatusTest, ExcerptTruncates) {
  EXPECT_EQ(Excerpt("short"), "short");
  std::string longer(500, 'a');
  EXPECT_LT(Excerpt(longer, 20).size(), 30u);
  Warnings w;
  Warn(&w, "careful");
  Warn(nullptr, "dropped");
  EXPECT_EQ(w.messages(), std::vector<std::string>{"careful"});
}

}  // namespace
}  // namespace kbc
