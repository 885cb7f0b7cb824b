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

#ifndef KBC_MODEL_H_
#define KBC_MODEL_H_

#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace kbc {

// Opaque entity identifier ("Q2256" in Wikidata-derived data).
class EntityId {
 public:
  EntityId() = default;
  explicit EntityId(std::string value);

  const std::string &str() const { return value_; }
  bool empty() const { return value_.empty(); }

  auto operator<=>(const EntityId &) const = default;

 private:
  std::string value_;
};

struct EntityRecord {
  EntityId id;
  std::string label;
  std::set<std::string> aliases;  // never contains the label
  std::set<std::string> type_tags;
  uint64_t statement_count = 0;

  // Label followed by the aliases.
  std::vector<std::string> Names() const;
};

// Verbalization of one relation: type signature plus the two prompt
// templates. `qa_template` holds one [x]; `ed_template` holds one [x] and a
// pair of [ENT] markers.
struct RelationSpec {
  std::string pid;
  std::string name;
  std::string subject_type_label;
  std::string object_type_label;
  std::string verb_phrase;
  std::string qa_template;
  std::string ed_template;

  bool operator==(const RelationSpec &) const = default;
};

inline constexpr std::string_view kSubjectPlaceholder = "[x]";
inline constexpr std::string_view kEntityMarker = "[ENT]";

struct GroundFact {
  EntityId subject;
  std::string pid;
  EntityId object;

  auto operator<=>(const GroundFact &) const = default;
};

// Result of Normalize(). Only Normalize() constructs non-empty values.
class NormalizedName {
 public:
  NormalizedName() = default;

  const std::string &str() const { return value_; }
  bool empty() const { return value_.empty(); }

  auto operator<=>(const NormalizedName &) const = default;

 private:
  friend NormalizedName Normalize(std::string_view raw);
  explicit NormalizedName(std::string value) : value_(std::move(value)) {}

  std::string value_;
};

// NFKC compatibility normalization and case folding, then trimming,
// removal of surrounding punctuation and whitespace collapsing. Total and
// idempotent. Brackets that are balanced inside the name are kept, so
// "Bratsch (band)" keeps its closing parenthesis.
NormalizedName Normalize(std::string_view raw);

// Removes one trailing parenthetical group, e.g. "Bratsch (band)" ->
// "Bratsch". Returns the input unchanged when there is no such group or when
// the group is the whole string.
std::string StripQualifier(std::string_view name);

// Number of whitespace-delimited tokens.
size_t CountTokens(std::string_view text);

// Number of non-overlapping occurrences of `needle` in `haystack`.
size_t CountOccurrences(std::string_view haystack, std::string_view needle);

}  // namespace kbc

#endif  // KBC_MODEL_H_
