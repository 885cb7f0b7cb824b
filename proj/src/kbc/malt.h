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

#ifndef KBC_MALT_H_
#define KBC_MALT_H_

#include <optional>
#include <string>
#include <vector>

#include "kbc/kb.h"
#include "kbc/model.h"
#include "kbc/prompts.h"
#include "kbc/status.h"

namespace kbc {

struct FactFlags {
  bool multi_token = false;  // some gold object label has >= 2 tokens
  bool ambiguous = false;    // subject or some gold object shares a name
  bool long_tail = false;    // subject has at most 13 statements

  bool operator==(const FactFlags &) const = default;
};

struct GoldObject {
  EntityId id;
  std::string label;
  std::set<std::string> aliases;

  std::vector<std::string> Names() const;
  bool operator==(const GoldObject &) const = default;
};

// One benchmark item: a (subject, relation) pair with all of its objects.
struct MaltRecord {
  EntityId subject;
  std::string subject_label;
  std::string pid;
  std::vector<GoldObject> gold_objects;
  FactFlags flags;

  bool operator==(const MaltRecord &) const = default;
};

// A label is multi-token when its qualifier-stripped form has at least two
// whitespace-delimited tokens.
bool IsMultiToken(std::string_view label);

// Samples up to `per_relation_sample` subjects per relation (all when
// unset), uniformly without replacement, and keeps every object of each
// sampled subject. Output is ordered by (pid, subject).
std::vector<MaltRecord> BuildDataset(const KbSnapshot &snapshot,
                                     const NameIndex &index,
                                     const RelationRegistry &relations,
                                     std::optional<size_t> per_relation_sample,
                                     uint64_t seed,
                                     Warnings *warnings = nullptr);

FactFlags ComputeFlags(const MaltRecord &record, const KbSnapshot &snapshot,
                       const NameIndex &index);

struct StatsRow {
  std::string pid;
  std::string relation;
  std::string subject_type;
  size_t triples = 0;
  double multi_token_pct = 0.0;
  double ambiguous_pct = 0.0;
  double long_tail_pct = 0.0;
};

struct StatsTable {
  std::vector<StatsRow> rows;  // pid order
  StatsRow aggregate;          // triple-weighted over rows
};

// Per-relation percentages over triples: each gold object is one triple. A
// triple's multi-token flag is its own object's; ambiguity and long-tail
// come from the record. `relations` only supplies display names.
StatsTable DatasetStats(const std::vector<MaltRecord> &records,
                        const RelationRegistry *relations = nullptr);

// Triple-weighted aggregate row over precomputed per-relation rows.
StatsRow AggregateStats(const std::vector<StatsRow> &rows);

// Aligned plain-text rendering, one line per relation plus the aggregate.
std::string FormatStatsTable(const StatsTable &table);

struct DatasetSplit {
  std::vector<MaltRecord> evaluation;
  std::vector<MaltRecord> validation;
};

// Per-relation stratified split; round-half-up(fraction * n) records of
// each relation go to validation. A relation with one record keeps it in
// the evaluation set.
DatasetSplit SplitDataset(const std::vector<MaltRecord> &records,
                          double validation_fraction, uint64_t seed,
                          Warnings *warnings = nullptr);

// round-half-up(fraction * n)
size_t ValidationSize(size_t n, double fraction);

}  // namespace kbc

#endif  // KBC_MALT_H_
