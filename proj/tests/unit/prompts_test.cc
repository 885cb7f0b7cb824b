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

#include "kbc/prompts.h"

#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "kbc/model.h"
#include "kbc/status.h"

namespace kbc {
namespace {

struct Row {
  const char *pid, *name, *subject_type, *verb, *object_type;
};

// The eight benchmark relations as verbalized for the shipped registry.
const Row kRows[] = {
    {"P112", "founded by", "business", "is founded by", "person"},
    {"P175", "performer", "song", "is performed by", "person"},
    {"P86", "composer", "song", "is composed by", "person"},
    {"P19", "place of birth", "person", "was born in", "place"},
    {"P20", "place of death", "person", "died in", "place"},
    {"P108", "employer", "person", "worked in", "place"},
    {"P69", "educated at", "person", "graduated from", "place"},
    {"P551", "residence", "person", "lived in", "place"},
};

TEST(PromptsTest, GenerationExamples) {
  RelationRegistry registry = RelationRegistry::Default();
  RenderedPrompt p =
      RenderGenerationPrompt(registry.Get("P175"), "Anyone and Everyone");
  EXPECT_EQ(p.text,
            "the song Anyone and Everyone is performed by which person?");
  EXPECT_EQ(p.kind, PromptKind::kGeneration);
  EXPECT_EQ(p.pid, "P175");
  EXPECT_EQ(RenderGenerationPrompt(registry.Get("P19"), "X").text,
            "the person X was born in which place?");
}

TEST(PromptsTest, CorroborationExamples) {
  RelationRegistry registry = RelationRegistry::Default();
  RenderedPrompt p =
      RenderCorroborationPrompt(registry.Get("P175"), "Anyone and Everyone");
  EXPECT_EQ(p.text,
            "the song Anyone and Everyone is performed by [ENT] this person "
            "[ENT]");
  EXPECT_EQ(p.kind, PromptKind::kCorroboration);
  EXPECT_EQ(RenderCorroborationPrompt(registry.Get("P551"), "X").text,
            "the person X lived in [ENT] this place [ENT]");
  EXPECT_EQ(RenderCorroborationPrompt(registry.Get("P551"), "X").text,
            RenderCorroborationPrompt(registry.Get("P551"), "X").text);
}

TEST(PromptsTest, LiteralPlaceholderInLabel) {
  RelationRegistry registry = RelationRegistry::Default();
  EXPECT_EQ(RenderGenerationPrompt(registry.Get("P19"), "[x]").text,
            "the person [x] was born in which place?");
  EXPECT_EQ(SubstituteSubject("[x] and [x]", "a"), "a and [x]");
}

TEST(PromptsTest, GenericSpecEqualsShippedRegistry) {
  RelationRegistry registry = RelationRegistry::Default();
  ASSERT_EQ(registry.size(), 8u);
  for (const Row &row : kRows) {
    RelationSpec generic = MakeGenericSpec(row.pid, row.name, row.subject_type,
                                           row.verb, row.object_type);
    EXPECT_EQ(generic, registry.Get(row.pid)) << row.pid;
  }
  RelationSpec p86 = registry.Get("P86");
  EXPECT_EQ(p86.qa_template, "the song [x] is composed by which person?");
  EXPECT_EQ(p86.ed_template,
            "the song [x] is composed by [ENT] this person [ENT]");
}

TEST(PromptsTest, RenderedPromptsHaveNoResidue) {
  RelationRegistry registry = RelationRegistry::Default();
  for (const RelationSpec &spec : registry.specs()) {
    std::string q = RenderGenerationPrompt(spec, "Lhasa de Sela").text;
    std::string e = RenderCorroborationPrompt(spec, "Lhasa de Sela").text;
    EXPECT_EQ(q.find("[x]"), std::string::npos);
    EXPECT_EQ(q.back(), '?');
    EXPECT_EQ(e.find("[x]"), std::string::npos);
    EXPECT_EQ(CountOccurrences(e, "[ENT]"), 2u);
  }
}

TEST(PromptsTest, GenericSpecRejectsEmptyParts) {
  EXPECT_THROW(MakeGenericSpec("P86", "composer", "song", "", "person"), Error);
  EXPECT_THROW(MakeGenericSpec("", "composer", "song", "is", "person"), Error);
  EXPECT_THROW(MakeGenericSpec("P86", "composer", "song", "is", ""), Error);
}

TEST(PromptsTest, ValidateSpecChecksPlaceholders) {
  RelationSpec spec = MakeGenericSpec("P1", "r", "thing", "has", "thing");
  EXPECT_NO_THROW(ValidateSpec(spec));
  RelationSpec bad = spec;
  bad.qa_template = "which thing?";
  EXPECT_THROW(ValidateSpec(bad), Error);
  bad = spec;
  bad.ed_template = "the thing [x] has [ENT] this thing";
  EXPECT_THROW(ValidateSpec(bad), Error);
  bad = spec;
  bad.ed_template = "the thing [x] [x] has [ENT] this thing [ENT]";
  EXPECT_THROW(ValidateSpec(bad), Error);
}

TEST(RegistryTest, LookupAndSelect) {
  RelationRegistry registry = RelationRegistry::Default();
  EXPECT_EQ(registry.Find("P999"), nullptr);
  try {
    registry.Get("P999");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kUsage);
  }
  RelationRegistry two = registry.Select({"P20", "P19"});
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two.specs()[0].pid, "P19");
  EXPECT_THROW(registry.Select({"P19", "P999"}), Error);
}

TEST(RegistryTest, FromJsonFillsTemplates) {
  RelationRegistry r = RelationRegistry::FromJson(R"([
    {"pid": "P50", "name": "author", "subject_type_label": "book",
     "object_type_label": "person", "verb_phrase": "is written by"},
    {"pid": "P1", "name": "custom", "subject_type_label": "thing",
     "object_type_label": "thing", "verb_phrase": "has",
     "qa_template": "what does [x] have?",
     "ed_template": "[x] has [ENT] this [ENT]"}
  ])");
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r.Get("P50").qa_template,
            "the book [x] is written by which person?");
  EXPECT_EQ(r.Get("P1").qa_template, "what does [x] have?");
}

TEST(RegistryTest, FromJsonRejectsBadInput) {
  EXPECT_THROW(RelationRegistry::FromJson("{}"), Error);
  EXPECT_THROW(RelationRegistry::FromJson("[1]"), Error);
  EXPECT_THROW(RelationRegistry::FromJson("not json"), Error);
  EXPECT_THROW(RelationRegistry::FromJson(R"([{"pid": "P1"}])"), Error);
  EXPECT_THROW(RelationRegistry::FromJson(R"([
    {"pid": "P1", "name": "a", "subject_type_label": "t",
     "object_type_label": "t", "verb_phrase": "v"},
    {"pid": "P1", "name": "b", "subject_type_label": "t",
     "object_type_label": "t", "verb_phrase": "v"}])"),
               Error);
  EXPECT_THROW(RelationRegistry::FromJson(R"([
    {"pid": "P1", "name": "a", "subject_type_label": "t",
     "object_type_label": "t", "verb_phrase": "v",
     "qa_template": "no placeholder?"}])"),
               Error);
}

}  // namespace
}  // namespace kbc
