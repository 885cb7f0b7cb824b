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

#ifndef KBC_PROMPTS_H_
#define KBC_PROMPTS_H_

#include <string>
#include <string_view>
#include <vector>

#include "kbc/model.h"

namespace kbc {

enum class PromptKind { kGeneration, kCorroboration };

struct RenderedPrompt {
  std::string text;
  PromptKind kind = PromptKind::kGeneration;
  std::string pid;
  EntityId subject;
};

// Question prompt for extractive QA, e.g.
// "the song Anyone and Everyone is performed by which person?".
RenderedPrompt RenderGenerationPrompt(const RelationSpec &spec,
                                      std::string_view subject_label,
                                      const EntityId &subject = {});

// Mention-marked prompt for entity disambiguation, e.g.
// "the song Anyone and Everyone is performed by [ENT] this person [ENT]".
RenderedPrompt RenderCorroborationPrompt(const RelationSpec &spec,
                                         std::string_view subject_label,
                                         const EntityId &subject = {});

// Builds both templates from a relation's type signature and verb phrase.
// Throws a usage error when any argument is empty.
RelationSpec MakeGenericSpec(std::string_view pid, std::string_view name,
                             std::string_view subject_type,
                             std::string_view verb_phrase,
                             std::string_view object_type);

// Checks the placeholder counts; throws a data error naming the pid.
void ValidateSpec(const RelationSpec &spec);

// Replaces the leftmost [x] in `tmpl`.
std::string SubstituteSubject(std::string_view tmpl, std::string_view label);

// Registered relations in pid order.
class RelationRegistry {
 public:
  RelationRegistry() = default;
  explicit RelationRegistry(std::vector<RelationSpec> specs);

  // The eight benchmark relations with their shipped prompts.
  static RelationRegistry Default();
  // JSON array of relation objects; missing templates are generated.
  static RelationRegistry FromJson(std::string_view text);
  static RelationRegistry FromFile(const std::string &path);

  const RelationSpec *Find(std::string_view pid) const;
  const RelationSpec &Get(std::string_view pid) const;
  const std::vector<RelationSpec> &specs() const { return specs_; }
  size_t size() const { return specs_.size(); }

  // Restricts to `pids` (in registry order); throws on unknown pids.
  RelationRegistry Select(const std::vector<std::string> &pids) const;

 private:
  std::vector<RelationSpec> specs_;
};

}  // namespace kbc

#endif  // KBC_PROMPTS_H_
