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

#include "kbc/pipeline.h"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <map>
#include <thread>

namespace kbc {

const Evidence &Candidate::TopEvidence() const {
  if (evidence.empty()) {
    Fail(ErrorCode::kInternal,
         fmt::format("candidate \"{}\" has no evidence", surface));
  }
  const Evidence *best = &evidence.front();
  for (const Evidence &e : evidence) {
    if (e.score > best->score ||
        (e.score == best->score && e.sentence_index < best->sentence_index)) {
      best = &e;
    }
  }
  return *best;
}

std::vector<Candidate> MergeCandidates(std::vector<Candidate> spans, size_t k) {
  struct Group {
    Candidate merged;
    double best_score = -1.0;
    size_t best_index = 0;
    size_t count = 0;
  };
  std::map<NormalizedName, Group> groups;
  for (Candidate &span : spans) {
    NormalizedName key = Normalize(span.surface);
    if (key.empty()) continue;
    Group &group = groups[key];
    for (const Evidence &e : span.evidence) {
      ++group.count;
      bool better = e.score > group.best_score ||
                    (e.score == group.best_score &&
                     (e.sentence_index < group.best_index ||
                      (e.sentence_index == group.best_index &&
                       span.surface < group.merged.surface)));
      if (group.count == 1 || better) {
        group.best_score = e.score;
        group.best_index = e.sentence_index;
        group.merged.surface = span.surface;
      }
      group.merged.evidence.push_back(e);
    }
    group.merged.subject = span.subject;
    group.merged.pid = span.pid;
  }

  std::vector<Candidate> out;
  for (auto &[key, group] : groups) {
    if (group.count == 0) continue;
    Candidate c = std::move(group.merged);
    std::sort(c.evidence.begin(), c.evidence.end(),
              [](const Evidence &a, const Evidence &b) {
                if (a.sentence_index != b.sentence_index) {
                  return a.sentence_index < b.sentence_index;
                }
                if (a.score != b.score) return a.score > b.score;
                return a.text < b.text;
              });
    // Summed in evidence order so the mean does not depend on input order.
    double sum = 0.0;
    for (const Evidence &e : c.evidence) sum += e.score;
    c.gen_score = sum / static_cast<double>(c.evidence.size());
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const Candidate &a, const Candidate &b) {
    if (a.gen_score != b.gen_score) return a.gen_score > b.gen_score;
    return a.surface < b.surface;
  });
  if (out.size() > k) out.resize(k);
  return out;
}

std::vector<Candidate> QaPromptGenerator::Generate(
    const EntityRecord &subject, const RelationSpec &spec,
    std::span<const ContextSentence> contexts, size_t k) {
  if (k < 1) Fail(ErrorCode::kUsage, "k must be at least 1");
  RenderedPrompt prompt =
      RenderGenerationPrompt(spec, subject.label, subject.id);
  std::vector<Candidate> spans;
  for (const ContextSentence &sentence : contexts) {
    std::vector<SpanAnswer> answers;
    try {
      answers = QaExtract(qa_, QaRequest{prompt.text, sentence.text, k});
    } catch (const Error &e) {
      throw Error(e.code(),
                  fmt::format("subject {} sentence {}: {}", subject.id.str(),
                              sentence.index, e.what()));
    }
    for (SpanAnswer &answer : answers) {
      if (answer.text.empty()) continue;
      Candidate c;
      c.subject = subject.id;
      c.pid = spec.pid;
      c.surface = answer.text;
      c.evidence.push_back(
          Evidence{sentence.index, sentence.text, answer.score});
      spans.push_back(std::move(c));
    }
  }
  return MergeCandidates(std::move(spans), k);
}

std::vector<Candidate> GenerateCandidates(
    const EntityRecord &subject, const RelationSpec &spec,
    std::span<const ContextSentence> contexts, QaBackend &qa, size_t k) {
  QaPromptGenerator generator(qa);
  return generator.Generate(subject, spec, contexts, k);
}

bool MatchNames(std::string_view surface, const EntityRecord &entity) {
  NormalizedName target = Normalize(surface);
  if (target.empty()) return false;
  for (const std::string &name : entity.Names()) {
    if (Normalize(name) == target) return true;
    if (Normalize(StripQualifier(name)) == target) return true;
  }
  return false;
}

std::optional<CorroboratedFact> Corroborate(
    const Candidate &candidate, const EntityRecord &subject,
    const RelationSpec &spec, EdBackend &ed, const NameIndex &index,
    const KbSnapshot &snapshot, size_t k) {
  const Evidence &evidence = candidate.TopEvidence();
  RenderedPrompt prompt =
      RenderCorroborationPrompt(spec, subject.label, subject.id);
  std::vector<EntityGuess> guesses =
      EdGenerate(ed, EdRequest{prompt.text, evidence.text, k});

  for (const EntityGuess &guess : guesses) {
    std::vector<EntityId> resolved = index.Resolve(guess.name);
    if (resolved.empty()) {
      spdlog::debug("ED guess \"{}\" is not in the alias table", guess.name);
      continue;
    }
    NormalizedName guess_key = Normalize(guess.name);
    std::stable_partition(
        resolved.begin(), resolved.end(), [&](const EntityId &id) {
          return Normalize(snapshot.Get(id).label) == guess_key;
        });
    for (const EntityId &id : resolved) {
      const EntityRecord &object = snapshot.Get(id);
      if (!MatchNames(candidate.surface, object)) continue;
      CorroboratedFact fact;
      fact.subject = subject.id;
      fact.subject_label = subject.label;
      fact.pid = spec.pid;
      fact.object = object.id;
      fact.object_label = object.label;
      fact.surface = candidate.surface;
      fact.gen_score = candidate.gen_score;
      fact.ed_score = guess.score;
      fact.fused_score = FuseScores(candidate.gen_score, guess.score);
      fact.evidence_index = evidence.sentence_index;
      fact.evidence_text = evidence.text;
      return fact;
    }
  }
  return std::nullopt;
}

std::vector<WorkItem> WorkItemsFromDataset(
    const std::vector<MaltRecord> &records) {
  std::vector<WorkItem> items;
  for (const MaltRecord &record : records) {
    items.push_back(WorkItem{record.subject, record.pid});
  }
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  return items;
}

std::vector<WorkItem> WorkItemsFromSubjects(
    const std::vector<EntityId> &subjects, const RelationRegistry &relations) {
  std::vector<WorkItem> items;
  for (const RelationSpec &spec : relations.specs()) {
    for (const EntityId &subject : subjects) {
      items.push_back(WorkItem{subject, spec.pid});
    }
  }
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  return items;
}

bool FactOrder(const CorroboratedFact &a, const CorroboratedFact &b) {
  if (a.pid != b.pid) return a.pid < b.pid;
  if (a.subject != b.subject) return a.subject < b.subject;
  if (a.fused_score != b.fused_score) return a.fused_score > b.fused_score;
  return a.object < b.object;
}

namespace {

// Preference between two facts with the same (subject, pid, object).
bool Preferred(const CorroboratedFact &a, const CorroboratedFact &b) {
  if (a.fused_score != b.fused_score) return a.fused_score > b.fused_score;
  if (a.evidence_index != b.evidence_index) {
    return a.evidence_index < b.evidence_index;
  }
  return a.surface < b.surface;
}

std::vector<CorroboratedFact> ProcessItem(
    const WorkItem &item, const KbSnapshot &snapshot, const NameIndex &index,
    const ArticleStore &corpus, const RelationRegistry &relations,
    CandidateGenerator &generator, EdBackend &ed,
    const PipelineOptions &options) {
  const EntityRecord &subject = snapshot.Get(item.subject);
  const RelationSpec &spec = relations.Get(item.pid);
  std::vector<ContextSentence> contexts =
      ContextWindows(Sentences(corpus, item.subject), options.window);
  std::vector<CorroboratedFact> facts;
  for (const Candidate &candidate :
       generator.Generate(subject, spec, contexts, options.k)) {
    if (auto fact = Corroborate(candidate, subject, spec, ed, index, snapshot,
                                options.k)) {
      facts.push_back(std::move(*fact));
    }
  }
  return facts;
}

}  // namespace

PipelineResult RunPipeline(std::span<const WorkItem> items,
                           const KbSnapshot &snapshot, const NameIndex &index,
                           const ArticleStore &corpus,
                           const RelationRegistry &relations,
                           CandidateGenerator &generator, EdBackend &ed,
                           const PipelineOptions &options) {
  if (options.k < 1) Fail(ErrorCode::kUsage, "k must be at least 1");
  if (!(options.failure_tolerance >= 0.0 && options.failure_tolerance <= 1.0)) {
    Fail(ErrorCode::kUsage, "failure tolerance must lie in [0, 1]");
  }

  struct Slot {
    std::vector<CorroboratedFact> facts;
    std::optional<std::string> error;
  };
  std::vector<Slot> slots(items.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < items.size(); i = next++) {
      try {
        slots[i].facts = ProcessItem(items[i], snapshot, index, corpus,
                                     relations, generator, ed, options);
      } catch (const std::exception &e) {
        slots[i].error = e.what();
      }
    }
  };
  size_t workers = std::clamp<size_t>(options.workers, 1, 64);
  workers = std::min(workers, std::max<size_t>(items.size(), 1));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  PipelineResult result;
  result.items = items.size();
  std::map<GroundFact, CorroboratedFact> best;
  for (size_t i = 0; i < items.size(); ++i) {
    if (slots[i].error) {
      spdlog::warn("item ({}, {}) failed: {}", items[i].subject.str(),
                   items[i].pid, *slots[i].error);
      result.failures.push_back(ItemFailure{items[i], *slots[i].error});
      continue;
    }
    for (CorroboratedFact &fact : slots[i].facts) {
      GroundFact key{fact.subject, fact.pid, fact.object};
      auto it = best.find(key);
      if (it == best.end()) {
        best.emplace(std::move(key), std::move(fact));
      } else if (Preferred(fact, it->second)) {
        it->second = std::move(fact);
      }
    }
  }
  for (auto &[key, fact] : best) result.facts.push_back(std::move(fact));
  std::sort(result.facts.begin(), result.facts.end(), FactOrder);
  result.tolerance_breached =
      static_cast<double>(result.failures.size()) >
      options.failure_tolerance * static_cast<double>(result.items);
  return result;
}

std::vector<CorroboratedFact> FilterThreshold(
    const std::vector<CorroboratedFact> &facts, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    Fail(ErrorCode::kUsage, fmt::format("alpha {} is not in [0, 1]", alpha));
  }
  std::vector<CorroboratedFact> kept;
  for (const CorroboratedFact &fact : facts) {
    if (fact.fused_score >= alpha) kept.push_back(fact);
  }
  return kept;
}

}  // namespace kbc
