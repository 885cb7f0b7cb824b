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

#ifndef KBC_PIPELINE_H_
#define KBC_PIPELINE_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kbc/backend.h"
#include "kbc/corpus.h"
#include "kbc/kb.h"
#include "kbc/malt.h"
#include "kbc/prompts.h"

namespace kbc {

struct Evidence {
  size_t sentence_index = 0;
  std::string text;
  double score = 0.0;  // score of the span found in this sentence

  bool operator==(const Evidence &) const = default;
};

// Stage-1 answer for (subject, pid). Duplicate surfaces (equal after
// normalization) are merged: gen_score is the mean over the merged spans
// and all of their evidence is kept.
struct Candidate {
  EntityId subject;
  std::string pid;
  std::string surface;
  std::vector<Evidence> evidence;  // sentence order
  double gen_score = 0.0;

  // Highest-scoring evidence; ties go to the earlier sentence.
  const Evidence &TopEvidence() const;
};

struct CorroboratedFact {
  EntityId subject;
  std::string subject_label;
  std::string pid;
  EntityId object;
  std::string object_label;
  std::string surface;
  double gen_score = 0.0;
  double ed_score = 0.0;
  double fused_score = 0.0;
  size_t evidence_index = 0;
  std::string evidence_text;

  bool operator==(const CorroboratedFact &) const = default;
};

// Pluggable stage-1 strategy.
class CandidateGenerator {
 public:
  virtual ~CandidateGenerator() = default;
  virtual std::vector<Candidate> Generate(
      const EntityRecord &subject, const RelationSpec &spec,
      std::span<const ContextSentence> contexts, size_t k) = 0;
};

// Asks the relation's question against every context through an extractive
// QA backend.
class QaPromptGenerator : public CandidateGenerator {
 public:
  explicit QaPromptGenerator(QaBackend &qa) : qa_(qa) {}
  std::vector<Candidate> Generate(const EntityRecord &subject,
                                  const RelationSpec &spec,
                                  std::span<const ContextSentence> contexts,
                                  size_t k) override;

 private:
  QaBackend &qa_;
};

// Merges single-span candidates by normalized surface and keeps the top k
// by (gen_score desc, surface asc). The merged surface is the form of the
// best-scoring span (earliest sentence, then smallest string, on ties).
std::vector<Candidate> MergeCandidates(std::vector<Candidate> spans, size_t k);

std::vector<Candidate> GenerateCandidates(
    const EntityRecord &subject, const RelationSpec &spec,
    std::span<const ContextSentence> contexts, QaBackend &qa, size_t k);

// True iff the normalized surface equals a normalized name of the entity,
// with or without its trailing parenthetical qualifier.
bool MatchNames(std::string_view surface, const EntityRecord &entity);

inline double FuseScores(double gen_score, double ed_score) {
  return (gen_score + ed_score) / 2.0;
}

// Stage 2. Queries the disambiguation backend with the corroboration prompt
// and the candidate's top evidence sentence, then walks the guesses in rank
// order. A guess is resolved to entities through the alias table (exact
// label matches first, then id order); the first entity that matches the
// candidate surface wins. Returns nothing when no guess matches.
std::optional<CorroboratedFact> Corroborate(
    const Candidate &candidate, const EntityRecord &subject,
    const RelationSpec &spec, EdBackend &ed, const NameIndex &index,
    const KbSnapshot &snapshot, size_t k);

struct WorkItem {
  EntityId subject;
  std::string pid;

  auto operator<=>(const WorkItem &) const = default;
};

std::vector<WorkItem> WorkItemsFromDataset(
    const std::vector<MaltRecord> &records);
std::vector<WorkItem> WorkItemsFromSubjects(
    const std::vector<EntityId> &subjects, const RelationRegistry &relations);

struct PipelineOptions {
  size_t k = 20;
  size_t window = 1;
  size_t workers = 8;
  double failure_tolerance = 0.10;  // fraction of failed items allowed
};

struct ItemFailure {
  WorkItem item;
  std::string message;
};

struct PipelineResult {
  std::vector<CorroboratedFact> facts;
  std::vector<ItemFailure> failures;
  size_t items = 0;
  bool tolerance_breached = false;
};

// Runs both stages over every work item. Facts are deduplicated on
// (subject, pid, object), keeping the highest fused score, and ordered by
// (pid, subject, fused desc, object). A failing item is recorded and
// skipped; the run is flagged when more than `failure_tolerance` of the
// items fail.
PipelineResult RunPipeline(std::span<const WorkItem> items,
                           const KbSnapshot &snapshot, const NameIndex &index,
                           const ArticleStore &corpus,
                           const RelationRegistry &relations,
                           CandidateGenerator &generator, EdBackend &ed,
                           const PipelineOptions &options);

// Facts with fused_score >= alpha, order preserved. alpha must lie in
// [0, 1].
std::vector<CorroboratedFact> FilterThreshold(
    const std::vector<CorroboratedFact> &facts, double alpha);

// Sort order of pipeline output.
bool FactOrder(const CorroboratedFact &a, const CorroboratedFact &b);

}  // namespace kbc

#endif  // KBC_PIPELINE_H_
