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

#ifndef KBC_KB_H_
#define KBC_KB_H_

#include <istream>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kbc/model.h"
#include "kbc/status.h"

namespace kbc {

struct FactKey {
  EntityId subject;
  std::string pid;

  auto operator<=>(const FactKey &) const = default;
};

// In-memory knowledge-base snapshot. Immutable once loaded.
struct KbSnapshot {
  std::map<EntityId, EntityRecord> entities;
  std::map<FactKey, std::set<EntityId>> facts;

  const EntityRecord *Find(const EntityId &id) const;
  // Throws a data error naming the id when it is missing.
  const EntityRecord &Get(const EntityId &id) const;

  // Objects of (subject, pid); empty when there are none.
  const std::set<EntityId> &Objects(const EntityId &subject,
                                    std::string_view pid) const;
  // Subjects with at least one fact for `pid`, in id order.
  std::vector<EntityId> SubjectsOf(std::string_view pid) const;
  size_t TripleCount() const;
};

// Reads a line-delimited JSON snapshot. Duplicate ids: the later record
// wins and a warning is recorded. Errors carry `source` and the line number.
KbSnapshot LoadSnapshot(std::istream &in, Warnings *warnings = nullptr,
                        std::string_view source = "<stream>");
KbSnapshot LoadSnapshotFile(const std::string &path,
                            Warnings *warnings = nullptr);

// Parses shards concurrently. Records are merged by (shard index, line), so
// a record in a later shard overrides one in an earlier shard.
KbSnapshot LoadSnapshotShards(std::span<const std::string> paths,
                              Warnings *warnings = nullptr);

// Alias table: normalized surface name -> entities carrying it.
class NameIndex {
 public:
  const std::vector<EntityId> &Lookup(const NormalizedName &name) const;
  // Entities named `name`; falls back to the qualifier-stripped form when
  // the verbatim name is unknown.
  const std::vector<EntityId> &Resolve(std::string_view name) const;

  const std::map<NormalizedName, std::vector<EntityId>> &by_name() const {
    return by_name_;
  }

 private:
  friend NameIndex BuildNameIndex(const KbSnapshot &snapshot);
  std::map<NormalizedName, std::vector<EntityId>> by_name_;
};

NameIndex BuildNameIndex(const KbSnapshot &snapshot);

inline constexpr uint64_t kLongTailMaxStatements = 13;

// At most 13 statements in the source KB.
bool IsLongTail(const EntityRecord &entity);

// Some normalized name of the entity is shared with another entity.
bool IsAmbiguous(const EntityRecord &entity, const NameIndex &index);

}  // namespace kbc

#endif  // KBC_KB_H_
