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

#include "kbc/kb.h"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <future>

#include "json.hpp"

namespace kbc {

using json = nlohmann::json;

const EntityRecord *KbSnapshot::Find(const EntityId &id) const {
  auto it = entities.find(id);
  return it == entities.end() ? nullptr : &it->second;
}

const EntityRecord &KbSnapshot::Get(const EntityId &id) const {
  const EntityRecord *record = Find(id);
  if (record == nullptr) {
    Fail(ErrorCode::kData, fmt::format("unknown entity id '{}'", id.str()));
  }
  return *record;
}

const std::set<EntityId> &KbSnapshot::Objects(const EntityId &subject,
                                              std::string_view pid) const {
  static const std::set<EntityId> kEmpty;
  auto it = facts.find(FactKey{subject, std::string(pid)});
  return it == facts.end() ? kEmpty : it->second;
}

std::vector<EntityId> KbSnapshot::SubjectsOf(std::string_view pid) const {
  std::vector<EntityId> subjects;
  for (const auto &[key, objects] : facts) {
    if (key.pid == pid && !objects.empty()) subjects.push_back(key.subject);
  }
  std::sort(subjects.begin(), subjects.end());
  return subjects;
}

size_t KbSnapshot::TripleCount() const {
  size_t total = 0;
  for (const auto &[key, objects] : facts) total += objects.size();
  return total;
}

namespace {

struct ParsedRecord {
  uint64_t seq = 0;
  size_t line = 0;
  EntityRecord entity;
  std::vector<std::pair<std::string, std::string>> facts;  // (pid, object)
};

std::string Where(std::string_view source, size_t line) {
  return fmt::format("{}:{}", source, line);
}

const json &Required(const json &obj, const char *field,
                     std::string_view where) {
  auto it = obj.find(field);
  if (it == obj.end()) {
    Fail(ErrorCode::kData,
         fmt::format("{}: missing required field '{}'", where, field));
  }
  return *it;
}

std::string StringField(const json &value, const char *field,
                        std::string_view where) {
  if (!value.is_string()) {
    Fail(ErrorCode::kData,
         fmt::format("{}: field '{}' must be a string", where, field));
  }
  return value.get<std::string>();
}

std::vector<std::string> StringArray(const json &obj, const char *field,
                                     std::string_view where) {
  std::vector<std::string> out;
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) return out;
  if (!it->is_array()) {
    Fail(ErrorCode::kData,
         fmt::format("{}: field '{}' must be an array", where, field));
  }
  for (const json &item : *it) out.push_back(StringField(item, field, where));
  return out;
}

ParsedRecord ParseRecord(std::string_view text, std::string_view where) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error &e) {
    Fail(ErrorCode::kData,
         fmt::format("{}: malformed record: {}", where, e.what()));
  }
  if (!obj.is_object()) {
    Fail(ErrorCode::kData,
         fmt::format("{}: malformed record: expected a JSON object", where));
  }

  ParsedRecord record;
  std::string id = StringField(Required(obj, "id", where), "id", where);
  if (id.empty()) {
    Fail(ErrorCode::kData, fmt::format("{}: field 'id' is empty", where));
  }
  record.entity.id = EntityId(std::move(id));
  record.entity.label =
      StringField(Required(obj, "label", where), "label", where);
  if (record.entity.label.empty()) {
    Fail(ErrorCode::kData, fmt::format("{}: field 'label' is empty", where));
  }
  const json &count = Required(obj, "statement_count", where);
  if (!count.is_number_integer() ||
      (count.is_number_integer() && count.get<int64_t>() < 0)) {
    Fail(ErrorCode::kData,
         fmt::format("{}: field 'statement_count' must be a non-negative "
                     "integer",
                     where));
  }
  record.entity.statement_count = count.get<uint64_t>();

  // Aliases: drop empties and anything that normalizes onto an earlier name.
  std::set<NormalizedName> seen{Normalize(record.entity.label)};
  std::vector<std::string> aliases = StringArray(obj, "aliases", where);
  std::sort(aliases.begin(), aliases.end());
  for (std::string &alias : aliases) {
    NormalizedName key = Normalize(alias);
    if (key.empty() || !seen.insert(key).second) continue;
    record.entity.aliases.insert(std::move(alias));
  }
  for (std::string &tag : StringArray(obj, "types", where)) {
    record.entity.type_tags.insert(std::move(tag));
  }

  auto facts = obj.find("facts");
  if (facts != obj.end() && !facts->is_null()) {
    if (!facts->is_array()) {
      Fail(ErrorCode::kData,
           fmt::format("{}: field 'facts' must be an array", where));
    }
    for (const json &fact : *facts) {
      if (!fact.is_object()) {
        Fail(ErrorCode::kData,
             fmt::format("{}: facts entries must be objects", where));
      }
      std::string pid = StringField(Required(fact, "pid", where), "pid", where);
      std::string object =
          StringField(Required(fact, "object", where), "object", where);
      if (pid.empty() || object.empty()) {
        Fail(ErrorCode::kData,
             fmt::format("{}: fact with empty 'pid' or 'object'", where));
      }
      record.facts.emplace_back(std::move(pid), std::move(object));
    }
  }
  return record;
}

std::vector<ParsedRecord> ParseStream(std::istream &in, std::string_view source,
                                      uint64_t shard) {
  std::vector<ParsedRecord> records;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ParsedRecord record = ParseRecord(line, Where(source, line_number));
    record.seq = (shard << 40) | line_number;
    record.line = line_number;
    records.push_back(std::move(record));
  }
  if (in.bad()) {
    Fail(ErrorCode::kData, fmt::format("{}: read error", source));
  }
  return records;
}

KbSnapshot Merge(std::vector<std::vector<ParsedRecord>> shards,
                 Warnings *warnings) {
  std::map<EntityId, ParsedRecord> latest;
  for (auto &shard : shards) {
    for (ParsedRecord &record : shard) {
      auto it = latest.find(record.entity.id);
      if (it == latest.end()) {
        EntityId id = record.entity.id;
        latest.emplace(std::move(id), std::move(record));
        continue;
      }
      Warn(warnings, fmt::format("duplicate entity id '{}' (line {}); the "
                                 "later record wins",
                                 record.entity.id.str(), record.line));
      if (record.seq > it->second.seq) it->second = std::move(record);
    }
  }

  KbSnapshot snapshot;
  for (auto &[id, record] : latest) {
    for (auto &[pid, object] : record.facts) {
      snapshot.facts[FactKey{id, pid}].insert(EntityId(object));
    }
    snapshot.entities.emplace(id, std::move(record.entity));
  }

  std::map<EntityId, size_t> fact_counts;
  for (const auto &[key, objects] : snapshot.facts) {
    fact_counts[key.subject] += objects.size();
    for (const EntityId &object : objects) {
      if (snapshot.Find(object) == nullptr) {
        Fail(ErrorCode::kData,
             fmt::format("fact ({}, {}, {}) references unknown entity '{}'",
                         key.subject.str(), key.pid, object.str(),
                         object.str()));
      }
    }
  }
  for (const auto &[id, count] : fact_counts) {
    if (snapshot.Get(id).statement_count < count) {
      Fail(ErrorCode::kData,
           fmt::format("entity '{}' lists {} facts but statement_count is {}",
                       id.str(), count, snapshot.Get(id).statement_count));
    }
  }
  return snapshot;
}

std::ifstream OpenOrFail(const std::string &path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kData, fmt::format("cannot open '{}'", path));
  return in;
}

}  // namespace

KbSnapshot LoadSnapshot(std::istream &in, Warnings *warnings,
                        std::string_view source) {
  std::vector<std::vector<ParsedRecord>> shards;
  shards.push_back(ParseStream(in, source, 0));
  return Merge(std::move(shards), warnings);
}

KbSnapshot LoadSnapshotFile(const std::string &path, Warnings *warnings) {
  std::ifstream in = OpenOrFail(path);
  return LoadSnapshot(in, warnings, path);
}

KbSnapshot LoadSnapshotShards(std::span<const std::string> paths,
                              Warnings *warnings) {
  std::vector<std::future<std::vector<ParsedRecord>>> pending;
  for (size_t i = 0; i < paths.size(); ++i) {
    pending.push_back(std::async(std::launch::async, [&paths, i] {
      std::ifstream in = OpenOrFail(paths[i]);
      return ParseStream(in, paths[i], i);
    }));
  }
  std::vector<std::vector<ParsedRecord>> shards;
  for (auto &future : pending) shards.push_back(future.get());
  return Merge(std::move(shards), warnings);
}

const std::vector<EntityId> &NameIndex::Lookup(
    const NormalizedName &name) const {
  static const std::vector<EntityId> kNone;
  auto it = by_name_.find(name);
  return it == by_name_.end() ? kNone : it->second;
}

const std::vector<EntityId> &NameIndex::Resolve(std::string_view name) const {
  const std::vector<EntityId> &direct = Lookup(Normalize(name));
  if (!direct.empty()) return direct;
  return Lookup(Normalize(StripQualifier(name)));
}

NameIndex BuildNameIndex(const KbSnapshot &snapshot) {
  NameIndex index;
  for (const auto &[id, entity] : snapshot.entities) {
    for (const std::string &name : entity.Names()) {
      NormalizedName key = Normalize(name);
      if (key.empty()) continue;
      std::vector<EntityId> &bucket = index.by_name_[key];
      // Entities are visited in id order, so buckets stay sorted.
      if (bucket.empty() || bucket.back() != id) bucket.push_back(id);
    }
  }
  return index;
}

bool IsLongTail(const EntityRecord &entity) {
  return entity.statement_count <= kLongTailMaxStatements;
}

bool IsAmbiguous(const EntityRecord &entity, const NameIndex &index) {
  for (const std::string &name : entity.Names()) {
    if (index.Lookup(Normalize(name)).size() >= 2) return true;
  }
  return false;
}

}  // namespace kbc
