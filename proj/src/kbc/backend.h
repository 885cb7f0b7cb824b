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

#ifndef KBC_BACKEND_H_
#define KBC_BACKEND_H_

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "kbc/kb.h"
#include "kbc/model.h"
#include "kbc/prompts.h"

namespace kbc {

// Extracted answer span. Offsets are byte offsets into the request context,
// end exclusive.
struct SpanAnswer {
  std::string text;
  double score = 0.0;
  size_t char_start = 0;
  size_t char_end = 0;

  bool operator==(const SpanAnswer &) const = default;
};

struct EntityGuess {
  std::string name;
  double score = 0.0;

  bool operator==(const EntityGuess &) const = default;
};

struct QaRequest {
  std::string question;
  std::string context;
  size_t k = 20;
};

struct EdRequest {
  std::string prompt;  // carries two [ENT] markers
  std::string context;
  size_t k = 20;
};

// Extractive question answering model.
class QaBackend {
 public:
  virtual ~QaBackend() = default;
  virtual std::vector<SpanAnswer> Extract(const QaRequest &request) = 0;
};

// Generative entity disambiguation model.
class EdBackend {
 public:
  virtual ~EdBackend() = default;
  virtual std::vector<EntityGuess> Generate(const EdRequest &request) = 0;
};

// Protocol boundary around a backend: validates the request, checks every
// returned score and span, orders the answers and keeps the best k.
// Answers: score desc, then (char_start, text). Guesses: score desc, then
// name. Malformed answers raise ErrorCode::kProtocol.
std::vector<SpanAnswer> QaExtract(QaBackend &backend, const QaRequest &request);
std::vector<EntityGuess> EdGenerate(EdBackend &backend,
                                    const EdRequest &request);

void ValidateRequest(const QaRequest &request);
void ValidateRequest(const EdRequest &request);

// Returns each gazetteer surface that occurs in the context as a whole word,
// at its first occurrence, with its configured score.
class MockQaBackend : public QaBackend {
 public:
  explicit MockQaBackend(std::map<std::string, double> gazetteer);
  std::vector<SpanAnswer> Extract(const QaRequest &request) override;

 private:
  std::map<std::string, double> gazetteer_;
};

// Reads the subject and relation back out of the prompt using the relation
// templates, then returns the label of every entity whose (normalized) name
// occurs as a token sequence in the context. Score is 1.0 when
// (subject, pid, entity) is a truth fact, 0.5 otherwise.
class MockEdBackend : public EdBackend {
 public:
  MockEdBackend(std::shared_ptr<const KbSnapshot> snapshot,
                RelationRegistry relations, std::set<GroundFact> truth);
  std::vector<EntityGuess> Generate(const EdRequest &request) override;

 private:
  std::shared_ptr<const KbSnapshot> snapshot_;
  NameIndex index_;
  RelationRegistry relations_;
  std::set<GroundFact> truth_;
  // (padded token key, entity) for every name and qualifier-stripped name.
  std::vector<std::pair<std::string, EntityId>> name_keys_;
};

// " tok1 tok2 ... " where every whitespace token is normalized on its own.
std::string TokenKey(std::string_view text);

// Gazetteer file: JSON object mapping surface -> score.
std::map<std::string, double> LoadGazetteerFile(const std::string &path);
// Truth file: one {"subject", "pid", "object"} object per line.
std::set<GroundFact> LoadTruthFile(const std::string &path);

}  // namespace kbc

#endif  // KBC_BACKEND_H_
