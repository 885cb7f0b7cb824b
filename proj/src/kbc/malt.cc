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

#include "kbc/malt.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "kbc/aggregate.h"
#include "kbc/random.h"

namespace kbc {

std::vector<std::string> GoldObject::Names() const {
  std::vector<std::string> names{label};
  names.insert(names.end(), aliases.begin(), aliases.end());
  return names;
}

bool IsMultiToken(std::string_view label) {
  return CountTokens(StripQualifier(label)) >= 2;
}

FactFlags ComputeFlags(const MaltRecord &record, const KbSnapshot &snapshot,
                       const NameIndex &index) {
  const EntityRecord &subject = snapshot.Get(record.subject);
  FactFlags flags;
  flags.long_tail = IsLongTail(subject);
  flags.ambiguous = IsAmbiguous(subject, index);
  for (const GoldObject &gold : record.gold_objects) {
    const EntityRecord &object = snapshot.Get(gold.id);
    flags.multi_token = flags.multi_token || IsMultiToken(object.label);
    flags.ambiguous = flags.ambiguous || IsAmbiguous(object, index);
  }
  return flags;
}

std::vector<MaltRecord> BuildDataset(const KbSnapshot &snapshot,
                                     const NameIndex &index,
                                     const RelationRegistry &relations,
                                     std::optional<size_t> per_relation_sample,
                                     uint64_t seed, Warnings *warnings) {
  if (per_relation_sample && *per_relation_sample == 0) {
    Fail(ErrorCode::kUsage, "per-relation sample size must be positive");
  }
  std::vector<MaltRecord> records;
  for (const RelationSpec &spec : relations.specs()) {
    std::vector<EntityId> subjects = snapshot.SubjectsOf(spec.pid);
    if (subjects.empty()) {
      Warn(warnings, fmt::format("relation {} has no subjects in the snapshot",
                                 spec.pid));
      continue;
    }
    std::vector<EntityId> chosen;
    if (per_relation_sample && *per_relation_sample < subjects.size()) {
      std::mt19937_64 rng = SeededRng(seed, "sample/" + spec.pid);
      // Selection sampling keeps the id order of the input.
      std::sample(subjects.begin(), subjects.end(), std::back_inserter(chosen),
                  *per_relation_sample, rng);
    } else {
      chosen = std::move(subjects);
    }
    for (const EntityId &subject_id : chosen) {
      const EntityRecord &subject = snapshot.Get(subject_id);
      MaltRecord record;
      record.subject = subject_id;
      record.subject_label = subject.label;
      record.pid = spec.pid;
      for (const EntityId &object_id : snapshot.Objects(subject_id, spec.pid)) {
        const EntityRecord &object = snapshot.Get(object_id);
        record.gold_objects.push_back(
            GoldObject{object.id, object.label, object.aliases});
      }
      record.flags = ComputeFlags(record, snapshot, index);
      records.push_back(std::move(record));
    }
  }
  return records;
}

StatsRow AggregateStats(const std::vector<StatsRow> &rows) {
  std::vector<AggregateRow> weighted;
  StatsRow aggregate;
  aggregate.pid = "-";
  aggregate.relation = "Weighted-Avg";
  aggregate.subject_type = "-";
  for (const StatsRow &row : rows) {
    weighted.push_back(AggregateRow{
        static_cast<double>(row.triples),
        {row.multi_token_pct, row.ambiguous_pct, row.long_tail_pct}});
    aggregate.triples += row.triples;
  }
  auto means = Aggregate(weighted, AggregateMode::kWeighted);
  aggregate.multi_token_pct = means[0];
  aggregate.ambiguous_pct = means[1];
  aggregate.long_tail_pct = means[2];
  return aggregate;
}

StatsTable DatasetStats(const std::vector<MaltRecord> &records,
                        const RelationRegistry *relations) {
  struct Counts {
    size_t triples = 0, multi_token = 0, ambiguous = 0, long_tail = 0;
  };
  std::map<std::string, Counts> by_pid;
  for (const MaltRecord &record : records) {
    Counts &c = by_pid[record.pid];
    size_t n = record.gold_objects.size();
    c.triples += n;
    for (const GoldObject &gold : record.gold_objects) {
      if (IsMultiToken(gold.label)) ++c.multi_token;
    }
    if (record.flags.ambiguous) c.ambiguous += n;
    if (record.flags.long_tail) c.long_tail += n;
  }

  StatsTable table;
  for (const auto &[pid, c] : by_pid) {
    StatsRow row;
    row.pid = pid;
    if (const RelationSpec *spec = relations ? relations->Find(pid) : nullptr) {
      row.relation = spec->name;
      row.subject_type = spec->subject_type_label;
    }
    row.triples = c.triples;
    if (c.triples > 0) {
      double t = static_cast<double>(c.triples);
      row.multi_token_pct = 100.0 * static_cast<double>(c.multi_token) / t;
      row.ambiguous_pct = 100.0 * static_cast<double>(c.ambiguous) / t;
      row.long_tail_pct = 100.0 * static_cast<double>(c.long_tail) / t;
    }
    table.rows.push_back(std::move(row));
  }
  table.aggregate = AggregateStats(table.rows);
  return table;
}

std::string FormatStatsTable(const StatsTable &table) {
  std::string out =
      fmt::format("{:<14} {:<16} {:<6} {:>8} {:>15} {:>14} {:>14}\n",
                  "Subject Type", "Relation", "ID", "Triples", "multi-token(%)",
                  "ambiguous(%)", "long-tail(%)");
  auto line = [&out](const StatsRow &row) {
    out += fmt::format(
        "{:<14} {:<16} {:<6} {:>8} {:>15.1f} {:>14.1f} {:>14.1f}\n",
        row.subject_type.empty() ? "-" : row.subject_type,
        row.relation.empty() ? "-" : row.relation, row.pid, row.triples,
        row.multi_token_pct, row.ambiguous_pct, row.long_tail_pct);
  };
  for (const StatsRow &row : table.rows) line(row);
  line(table.aggregate);
  return out;
}

size_t ValidationSize(size_t n, double fraction) {
  // The epsilon keeps products like 0.15 * 10 on the intended side of .5.
  return static_cast<size_t>(
      std::floor(fraction * static_cast<double>(n) + 0.5 + 1e-9));
}

DatasetSplit SplitDataset(const std::vector<MaltRecord> &records,
                          double validation_fraction, uint64_t seed,
                          Warnings *warnings) {
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    Fail(ErrorCode::kUsage, fmt::format("validation fraction {} is not in "
                                        "(0, 1)",
                                        validation_fraction));
  }
  std::map<std::string, std::vector<const MaltRecord *>> by_pid;
  for (const MaltRecord &record : records)
    by_pid[record.pid].push_back(&record);

  DatasetSplit split;
  for (auto &[pid, group] : by_pid) {
    std::sort(group.begin(), group.end(),
              [](const MaltRecord *a, const MaltRecord *b) {
                return a->subject < b->subject;
              });
    size_t n_val = ValidationSize(group.size(), validation_fraction);
    if (group.size() == 1) {
      Warn(warnings, fmt::format("relation {} has a single record; it stays "
                                 "in the evaluation set",
                                 pid));
      n_val = 0;
    }
    std::vector<size_t> order(group.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 rng = SeededRng(seed, "split/" + pid);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<bool> in_validation(group.size(), false);
    for (size_t i = 0; i < n_val; ++i) in_validation[order[i]] = true;
    for (size_t i = 0; i < group.size(); ++i) {
      (in_validation[i] ? split.validation : split.evaluation)
          .push_back(*group[i]);
    }
  }
  return split;
}

}  // namespace kbc
