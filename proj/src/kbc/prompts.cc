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

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "kbc/status.h"

namespace kbc {

using json = nlohmann::json;

std::string SubstituteSubject(std::string_view tmpl, std::string_view label) {
  std::string out(tmpl);
  size_t pos = out.find(kSubjectPlaceholder);
  if (pos != std::string::npos) {
    out.replace(pos, kSubjectPlaceholder.size(), label);
  }
  return out;
}

RenderedPrompt RenderGenerationPrompt(const RelationSpec &spec,
                                      std::string_view subject_label,
                                      const EntityId &subject) {
  return RenderedPrompt{SubstituteSubject(spec.qa_template, subject_label),
                        PromptKind::kGeneration, spec.pid, subject};
}

RenderedPrompt RenderCorroborationPrompt(const RelationSpec &spec,
                                         std::string_view subject_label,
                                         const EntityId &subject) {
  return RenderedPrompt{SubstituteSubject(spec.ed_template, subject_label),
                        PromptKind::kCorroboration, spec.pid, subject};
}

RelationSpec MakeGenericSpec(std::string_view pid, std::string_view name,
                             std::string_view subject_type,
                             std::string_view verb_phrase,
                             std::string_view object_type) {
  if (pid.empty() || name.empty() || subject_type.empty() ||
      verb_phrase.empty() || object_type.empty()) {
    Fail(ErrorCode::kUsage,
         fmt::format("relation '{}': pid, name, subject type, verb phrase and "
                     "object type must all be non-empty",
                     pid));
  }
  RelationSpec spec;
  spec.pid = pid;
  spec.name = name;
  spec.subject_type_label = subject_type;
  spec.object_type_label = object_type;
  spec.verb_phrase = verb_phrase;
  spec.qa_template = fmt::format("the {} [x] {} which {}?", subject_type,
                                 verb_phrase, object_type);
  spec.ed_template = fmt::format("the {} [x] {} [ENT] this {} [ENT]",
                                 subject_type, verb_phrase, object_type);
  return spec;
}

void ValidateSpec(const RelationSpec &spec) {
  if (spec.pid.empty()) Fail(ErrorCode::kData, "relation with empty pid");
  if (CountOccurrences(spec.qa_template, kSubjectPlaceholder) != 1) {
    Fail(ErrorCode::kData,
         fmt::format("relation {}: qa_template needs exactly one [x]",
                     spec.pid));
  }
  if (spec.qa_template.empty() || spec.qa_template.back() != '?') {
    Fail(ErrorCode::kData,
         fmt::format("relation {}: qa_template must end with '?'", spec.pid));
  }
  if (CountOccurrences(spec.ed_template, kSubjectPlaceholder) != 1 ||
      CountOccurrences(spec.ed_template, kEntityMarker) != 2) {
    Fail(ErrorCode::kData,
         fmt::format("relation {}: ed_template needs one [x] and two [ENT]",
                     spec.pid));
  }
}

RelationRegistry::RelationRegistry(std::vector<RelationSpec> specs)
    : specs_(std::move(specs)) {
  for (const RelationSpec &spec : specs_) ValidateSpec(spec);
  std::sort(specs_.begin(), specs_.end(),
            [](const RelationSpec &a, const RelationSpec &b) {
              return a.pid < b.pid;
            });
  for (size_t i = 1; i < specs_.size(); ++i) {
    if (specs_[i].pid == specs_[i - 1].pid) {
      Fail(ErrorCode::kData,
           fmt::format("relation {} registered twice", specs_[i].pid));
    }
  }
}

RelationRegistry RelationRegistry::Default() {
  struct Row {
    const char *pid, *name, *subject_type, *verb, *object_type, *qa, *ed;
  };
  // Verbatim prompt table for the eight benchmark relations.
  static const Row kRows[] = {
      {"P112", "founded by", "business", "is founded by", "person",
       "the business [x] is founded by which person?",
       "the business [x] is founded by [ENT] this person [ENT]"},
      {"P175", "performer", "song", "is performed by", "person",
       "the song [x] is performed by which person?",
       "the song [x] is performed by [ENT] this person [ENT]"},
      {"P86", "composer", "song", "is composed by", "person",
       "the song [x] is composed by which person?",
       "the song [x] is composed by [ENT] this person [ENT]"},
      {"P19", "place of birth", "person", "was born in", "place",
       "the person [x] was born in which place?",
       "the person [x] was born in [ENT] this place [ENT]"},
      {"P20", "place of death", "person", "died in", "place",
       "the person [x] died in which place?",
       "the person [x] died in [ENT] this place [ENT]"},
      {"P108", "employer", "person", "worked in", "place",
       "the person [x] worked in which place?",
       "the person [x] worked in [ENT] this place [ENT]"},
      {"P69", "educated at", "person", "graduated from", "place",
       "the person [x] graduated from which place?",
       "the person [x] graduated from [ENT] this place [ENT]"},
      {"P551", "residence", "person", "lived in", "place",
       "the person [x] lived in which place?",
       "the person [x] lived in [ENT] this place [ENT]"},
  };
  std::vector<RelationSpec> specs;
  for (const Row &row : kRows) {
    specs.push_back(RelationSpec{row.pid, row.name, row.subject_type,
                                 row.object_type, row.verb, row.qa, row.ed});
  }
  return RelationRegistry(std::move(specs));
}

RelationRegistry RelationRegistry::FromJson(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    Fail(ErrorCode::kData, fmt::format("relation registry: {}", e.what()));
  }
  if (!doc.is_array()) {
    Fail(ErrorCode::kData, "relation registry must be a JSON array");
  }
  std::vector<RelationSpec> specs;
  for (const json &item : doc) {
    auto get = [&item](const char *field) -> std::string {
      auto it = item.find(field);
      if (it == item.end() || !it->is_string()) return {};
      return it->get<std::string>();
    };
    if (!item.is_object()) {
      Fail(ErrorCode::kData, "relation registry entries must be objects");
    }
    RelationSpec spec;
    try {
      spec = MakeGenericSpec(get("pid"), get("name"), get("subject_type_label"),
                             get("verb_phrase"), get("object_type_label"));
    } catch (const Error &e) {
      Fail(ErrorCode::kData, e.what());
    }
    if (std::string qa = get("qa_template"); !qa.empty()) spec.qa_template = qa;
    if (std::string ed = get("ed_template"); !ed.empty()) spec.ed_template = ed;
    specs.push_back(std::move(spec));
  }
  return RelationRegistry(std::move(specs));
}

RelationRegistry RelationRegistry::FromFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kData, fmt::format("cannot open '{}'", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return FromJson(buffer.str());
}

const RelationSpec *RelationRegistry::Find(std::string_view pid) const {
  for (const RelationSpec &spec : specs_) {
    if (spec.pid == pid) return &spec;
  }
  return nullptr;
}

const RelationSpec &RelationRegistry::Get(std::string_view pid) const {
  const RelationSpec *spec = Find(pid);
  if (spec == nullptr) {
    Fail(ErrorCode::kUsage, fmt::format("unknown relation '{}'", pid));
  }
  return *spec;
}

RelationRegistry RelationRegistry::Select(
    const std::vector<std::string> &pids) const {
  std::vector<RelationSpec> selected;
  for (const std::string &pid : pids) selected.push_back(Get(pid));
  return RelationRegistry(std::move(selected));
}

}  // namespace kbc
