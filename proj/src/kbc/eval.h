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

#ifndef KBC_EVAL_H_
#define KBC_EVAL_H_

#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "kbc/aggregate.h"
#include "kbc/kb.h"
#include "kbc/malt.h"
#include "kbc/pipeline.h"
#include "kbc/status.h"

namespace kbc {

// Alias-table correctness: a bare surface is correct when its normalized
// form is a (possibly qualifier-stripped) name of some gold object.
bool IsCorrectSurface(std::string_view surface, const MaltRecord &gold);

// Canonicalized prediction: correct when the object id is a gold id, or when
// the surface, the object label or (given a snapshot) any alias of the
// object is a gold object name.
bool IsCorrect(const CorroboratedFact &prediction, const MaltRecord &gold,
               const KbSnapshot *snapshot = nullptr);

// Index of the gold object a prediction is credited to: an id match first,
// otherwise the first gold object (in record order) whose names match.
std::optional<size_t> MatchGoldObject(const CorroboratedFact &prediction,
                                      const MaltRecord &gold,
                                      const KbSnapshot *snapshot = nullptr);

struct RelationMetrics {
  std::string pid;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  size_t tp = 0;
  size_t fp = 0;
  size_t fn = 0;
  size_t n_predictions = 0;
  size_t n_gold = 0;
};

// P = tp/(tp+fp), R = tp/(tp+fn), F1 = 2PR/(P+R); 0 for empty denominators.
RelationMetrics MakeMetrics(std::string pid, size_t tp, size_t fp, size_t fn);
double HarmonicMean(double precision, double recall);

struct EvalReport {
  std::vector<RelationMetrics> rows;   // pid order
  std::array<double, 3> unweighted{};  // mean of per-relation (P, R, F1)
  std::array<double, 3> weighted{};    // gold-triple-weighted mean
  std::optional<double> alpha;
};

// Aggregates per-relation (P, R, F1) rows; weighted mode uses n_gold.
std::array<double, 3> AggregateMetrics(const std::vector<RelationMetrics> &rows,
                                       AggregateMode mode);

// Precomputed prediction-to-gold credit, so that a threshold sweep does not
// re-run name matching.
class MatchTable {
 public:
  MatchTable(const std::vector<CorroboratedFact> &predictions,
             const std::vector<MaltRecord> &gold,
             const KbSnapshot *snapshot = nullptr,
             Warnings *warnings = nullptr);

  // Scores the predictions with fused_score >= min_score (all when unset).
  EvalReport Evaluate(std::optional<double> min_score = std::nullopt) const;

  std::vector<double> DistinctScores() const;
  size_t gold_triples() const { return gold_triples_; }

 private:
  struct Entry {
    std::string pid;
    double score;
    std::optional<size_t> triple;  // global gold triple index
  };
  std::vector<Entry> entries_;
  std::vector<std::string> triple_pid_;
  std::map<std::string, size_t> gold_per_pid_;
  size_t gold_triples_ = 0;
};

// tp counts gold triples credited by at least one prediction; a prediction
// that matches no gold triple (or whose (subject, pid) is not in the gold
// set) is a false positive; fn = gold triples never credited.
EvalReport Evaluate(const std::vector<CorroboratedFact> &predictions,
                    const std::vector<MaltRecord> &gold,
                    const KbSnapshot *snapshot = nullptr,
                    Warnings *warnings = nullptr);

struct CurvePoint {
  double alpha = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct CalibrationResult {
  double alpha = 0.0;
  double best_f1 = 0.0;
  std::vector<CurvePoint> curve;  // ascending alpha
};

// Sweeps alpha over {0} and every distinct fused score, scoring unweighted
// aggregate F1 at each, and returns the best alpha (ties: larger alpha).
CalibrationResult CalibrateAlpha(const std::vector<CorroboratedFact> &facts,
                                 const std::vector<MaltRecord> &validation,
                                 const KbSnapshot *snapshot = nullptr,
                                 Warnings *warnings = nullptr);

struct AnnotationRow {
  std::string subject_id;
  std::string subject_label;
  std::string pid;
  std::string object_id;
  std::string object_label;
  std::string evidence;
  std::string verdict;  // left empty for the annotator
};

// Seeded uniform sample of up to `per_relation` facts per relation, skipping
// facts that the gold records already contain.
std::vector<AnnotationRow> SampleForAnnotation(
    const std::vector<CorroboratedFact> &facts,
    const std::vector<MaltRecord> &gold, size_t per_relation, uint64_t seed,
    const KbSnapshot *snapshot = nullptr, Warnings *warnings = nullptr);

// CSV with header subject_id,subject_label,pid,object_id,object_label,
// evidence,verdict.
void WriteAnnotationCsv(const std::vector<AnnotationRow> &rows,
                        std::ostream &out);

// Aligned plain-text table: relation, id, P, R, F1 in percent, then the
// two aggregate rows.
std::string FormatReport(const EvalReport &report,
                         const RelationRegistry *relations = nullptr);

}  // namespace kbc

#endif  // KBC_EVAL_H_
