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

#include "kbc/eval.h"

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <set>

#include "kbc/random.h"

namespace kbc {

namespace {

std::set<NormalizedName> GoldNames(const GoldObject &gold) {
  std::set<NormalizedName> names;
  for (const std::string &name : gold.Names()) {
    for (NormalizedName n :
         {Normalize(name), Normalize(StripQualifier(name))}) {
      if (!n.empty()) names.insert(std::move(n));
    }
  }
  return names;
}

std::set<NormalizedName> PredictionNames(const CorroboratedFact &prediction,
                                         const KbSnapshot *snapshot) {
  std::set<NormalizedName> names;
  auto add = [&names](std::string_view raw) {
    NormalizedName n = Normalize(raw);
    if (!n.empty()) names.insert(std::move(n));
  };
  add(prediction.surface);
  add(prediction.object_label);
  if (snapshot != nullptr && !prediction.object.empty()) {
    if (const EntityRecord *object = snapshot->Find(prediction.object)) {
      for (const std::string &name : object->Names()) add(name);
    }
  }
  return names;
}

bool Intersects(const std::set<NormalizedName> &a,
                const std::set<NormalizedName> &b) {
  for (const NormalizedName &n : a) {
    if (b.count(n)) return true;
  }
  return false;
}

std::optional<size_t> MatchAgainst(
    const CorroboratedFact &prediction, const MaltRecord &gold,
    const std::vector<std::set<NormalizedName>> &gold_names,
    const KbSnapshot *snapshot) {
  if (!prediction.object.empty()) {
    for (size_t i = 0; i < gold.gold_objects.size(); ++i) {
      if (gold.gold_objects[i].id == prediction.object) return i;
    }
  }
  std::set<NormalizedName> names = PredictionNames(prediction, snapshot);
  for (size_t i = 0; i < gold_names.size(); ++i) {
    if (Intersects(names, gold_names[i])) return i;
  }
  return std::nullopt;
}

std::vector<std::set<NormalizedName>> AllGoldNames(const MaltRecord &gold) {
  std::vector<std::set<NormalizedName>> out;
  for (const GoldObject &object : gold.gold_objects) {
    out.push_back(GoldNames(object));
  }
  return out;
}

}  // namespace

bool IsCorrectSurface(std::string_view surface, const MaltRecord &gold) {
  NormalizedName n = Normalize(surface);
  if (n.empty()) return false;
  for (const GoldObject &object : gold.gold_objects) {
    if (GoldNames(object).count(n)) return true;
  }
  return false;
}

std::optional<size_t> MatchGoldObject(const CorroboratedFact &prediction,
                                      const MaltRecord &gold,
                                      const KbSnapshot *snapshot) {
  return MatchAgainst(prediction, gold, AllGoldNames(gold), snapshot);
}

bool IsCorrect(const CorroboratedFact &prediction, const MaltRecord &gold,
               const KbSnapshot *snapshot) {
  return MatchGoldObject(prediction, gold, snapshot).has_value();
}

double HarmonicMean(double precision, double recall) {
  if (precision + recall <= 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

RelationMetrics MakeMetrics(std::string pid, size_t tp, size_t fp, size_t fn) {
  RelationMetrics m;
  m.pid = std::move(pid);
  m.tp = tp;
  m.fp = fp;
  m.fn = fn;
  m.n_predictions = tp + fp;
  m.n_gold = tp + fn;
  m.precision = tp + fp == 0
                    ? 0.0
                    : static_cast<double>(tp) / static_cast<double>(tp + fp);
  m.recall = tp + fn == 0
                 ? 0.0
                 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  m.f1 = HarmonicMean(m.precision, m.recall);
  return m;
}

std::array<double, 3> AggregateMetrics(const std::vector<RelationMetrics> &rows,
                                       AggregateMode mode) {
  std::vector<AggregateRow> table;
  for (const RelationMetrics &row : rows) {
    table.push_back(AggregateRow{static_cast<double>(row.n_gold),
                                 {row.precision, row.recall, row.f1}});
  }
  return Aggregate(table, mode);
}

MatchTable::MatchTable(const std::vector<CorroboratedFact> &predictions,
                       const std::vector<MaltRecord> &gold,
                       const KbSnapshot *snapshot, Warnings *warnings) {
  struct GoldEntry {
    const MaltRecord *record;
    size_t base;
    std::vector<std::set<NormalizedName>> names;
  };
  std::map<FactKey, GoldEntry> by_pair;
  for (const MaltRecord &record : gold) {
    FactKey key{record.subject, record.pid};
    if (by_pair.count(key)) {
      Warn(warnings, fmt::format("gold set lists ({}, {}) twice; keeping the "
                                 "first record",
                                 record.subject.str(), record.pid));
      continue;
    }
    by_pair.emplace(key,
                    GoldEntry{&record, gold_triples_, AllGoldNames(record)});
    gold_triples_ += record.gold_objects.size();
    gold_per_pid_[record.pid] += record.gold_objects.size();
    for (size_t i = 0; i < record.gold_objects.size(); ++i) {
      triple_pid_.push_back(record.pid);
    }
  }

  size_t unknown = 0;
  for (const CorroboratedFact &prediction : predictions) {
    Entry entry{prediction.pid, prediction.fused_score, std::nullopt};
    auto it = by_pair.find(FactKey{prediction.subject, prediction.pid});
    if (it == by_pair.end()) {
      ++unknown;
    } else if (auto i = MatchAgainst(prediction, *it->second.record,
                                     it->second.names, snapshot)) {
      entry.triple = it->second.base + *i;
    }
    entries_.push_back(std::move(entry));
  }
  if (unknown > 0) {
    Warn(warnings, fmt::format("{} prediction(s) reference a (subject, pid) "
                               "pair outside the gold set; counted as false "
                               "positives",
                               unknown));
  }
}

EvalReport MatchTable::Evaluate(std::optional<double> min_score) const {
  struct Tally {
    size_t predictions = 0;
    size_t fp = 0;
    std::set<size_t> credited;
  };
  std::map<std::string, Tally> tallies;
  for (const auto &[pid, count] : gold_per_pid_) tallies[pid];
  for (const Entry &entry : entries_) {
    if (min_score && entry.score < *min_score) continue;
    Tally &t = tallies[entry.pid];
    ++t.predictions;
    if (entry.triple) {
      t.credited.insert(*entry.triple);
    } else {
      ++t.fp;
    }
  }

  EvalReport report;
  for (const auto &[pid, t] : tallies) {
    auto gold_it = gold_per_pid_.find(pid);
    size_t n_gold = gold_it == gold_per_pid_.end() ? 0 : gold_it->second;
    size_t tp = t.credited.size();
    RelationMetrics m = MakeMetrics(pid, tp, t.fp, n_gold - tp);
    m.n_predictions = t.predictions;
    report.rows.push_back(std::move(m));
  }
  report.unweighted = AggregateMetrics(report.rows, AggregateMode::kUnweighted);
  report.weighted = AggregateMetrics(report.rows, AggregateMode::kWeighted);
  return report;
}

std::vector<double> MatchTable::DistinctScores() const {
  std::vector<double> scores;
  for (const Entry &entry : entries_) scores.push_back(entry.score);
  std::sort(scores.begin(), scores.end());
  scores.erase(std::unique(scores.begin(), scores.end()), scores.end());
  return scores;
}

EvalReport Evaluate(const std::vector<CorroboratedFact> &predictions,
                    const std::vector<MaltRecord> &gold,
                    const KbSnapshot *snapshot, Warnings *warnings) {
  return MatchTable(predictions, gold, snapshot, warnings).Evaluate();
}

CalibrationResult CalibrateAlpha(const std::vector<CorroboratedFact> &facts,
                                 const std::vector<MaltRecord> &validation,
                                 const KbSnapshot *snapshot,
                                 Warnings *warnings) {
  if (validation.empty()) {
    Fail(ErrorCode::kData,
         "validation set is empty; re-split the dataset with a larger "
         "validation fraction");
  }
  MatchTable table(facts, validation, snapshot, warnings);
  std::vector<double> alphas{0.0};
  for (double score : table.DistinctScores()) {
    if (score > 0.0 && score <= 1.0) alphas.push_back(score);
  }

  CalibrationResult result;
  bool first = true;
  for (double alpha : alphas) {
    EvalReport report = table.Evaluate(alpha);
    CurvePoint point{alpha, report.unweighted[0], report.unweighted[1],
                     report.unweighted[2]};
    result.curve.push_back(point);
    // Ascending sweep: >= moves ties toward the larger alpha.
    if (first || point.f1 >= result.best_f1) {
      result.alpha = alpha;
      result.best_f1 = point.f1;
      first = false;
    }
  }
  return result;
}

std::vector<AnnotationRow> SampleForAnnotation(
    const std::vector<CorroboratedFact> &facts,
    const std::vector<MaltRecord> &gold, size_t per_relation, uint64_t seed,
    const KbSnapshot *snapshot, Warnings *warnings) {
  if (per_relation == 0) {
    Fail(ErrorCode::kUsage, "per-relation sample size must be positive");
  }
  std::map<FactKey, const MaltRecord *> by_pair;
  for (const MaltRecord &record : gold) {
    by_pair.emplace(FactKey{record.subject, record.pid}, &record);
  }
  std::map<std::string, std::vector<const CorroboratedFact *>> novel;
  for (const CorroboratedFact &fact : facts) {
    auto it = by_pair.find(FactKey{fact.subject, fact.pid});
    if (it != by_pair.end() && IsCorrect(fact, *it->second, snapshot)) continue;
    novel[fact.pid].push_back(&fact);
  }

  std::vector<AnnotationRow> rows;
  for (auto &[pid, group] : novel) {
    std::sort(group.begin(), group.end(),
              [](const CorroboratedFact *a, const CorroboratedFact *b) {
                if (a->subject != b->subject) return a->subject < b->subject;
                return a->object < b->object;
              });
    std::vector<const CorroboratedFact *> chosen;
    if (group.size() <= per_relation) {
      if (group.size() < per_relation) {
        Warn(warnings, fmt::format("relation {} has only {} novel fact(s); "
                                   "taking all of them",
                                   pid, group.size()));
      }
      chosen = group;
    } else {
      std::mt19937_64 rng = SeededRng(seed, "annotate/" + pid);
      std::sample(group.begin(), group.end(), std::back_inserter(chosen),
                  per_relation, rng);
    }
    for (const CorroboratedFact *fact : chosen) {
      rows.push_back(AnnotationRow{
          fact->subject.str(), fact->subject_label, fact->pid,
          fact->object.str(), fact->object_label, fact->evidence_text, ""});
    }
  }
  return rows;
}

namespace {

std::string CsvField(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(value);
  }
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

void WriteAnnotationCsv(const std::vector<AnnotationRow> &rows,
                        std::ostream &out) {
  out << "subject_id,subject_label,pid,object_id,object_label,evidence,"
         "verdict\n";
  for (const AnnotationRow &row : rows) {
    out << CsvField(row.subject_id) << ',' << CsvField(row.subject_label) << ','
        << CsvField(row.pid) << ',' << CsvField(row.object_id) << ','
        << CsvField(row.object_label) << ',' << CsvField(row.evidence) << ','
        << CsvField(row.verdict) << '\n';
  }
}

std::string FormatReport(const EvalReport &report,
                         const RelationRegistry *relations) {
  std::string out = fmt::format("{:<16} {:<6} {:>6} {:>6} {:>6}\n", "Relation",
                                "ID", "P", "R", "F1");
  for (const RelationMetrics &row : report.rows) {
    const RelationSpec *spec = relations ? relations->Find(row.pid) : nullptr;
    out +=
        fmt::format("{:<16} {:<6} {:>6.1f} {:>6.1f} {:>6.1f}\n",
                    spec ? spec->name : std::string("-"), row.pid,
                    100.0 * row.precision, 100.0 * row.recall, 100.0 * row.f1);
  }
  auto aggregate = [&out](const char *label, const std::array<double, 3> &v) {
    out += fmt::format("{:<16} {:<6} {:>6.1f} {:>6.1f} {:>6.1f}\n", label, "-",
                       100.0 * v[0], 100.0 * v[1], 100.0 * v[2]);
  };
  aggregate("Unweighted-Avg", report.unweighted);
  aggregate("Weighted-Avg", report.weighted);
  if (report.alpha) out += fmt::format("alpha = {:.6f}\n", *report.alpha);
  return out;
}

}  // namespace kbc
