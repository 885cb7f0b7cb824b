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

#include "kbc/backend.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "kbc/status.h"

namespace kbc {

using json = nlohmann::json;

namespace {

bool ValidScore(double score) {
  return std::isfinite(score) && score >= 0.0 && score <= 1.0;
}

bool IsWordByte(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalnum(u) != 0;
}

}  // namespace

void ValidateRequest(const QaRequest &request) {
  if (request.k < 1) Fail(ErrorCode::kUsage, "QA request needs k >= 1");
  if (request.question.empty() || request.question.back() != '?') {
    Fail(ErrorCode::kUsage, fmt::format("QA question must end with '?': \"{}\"",
                                        Excerpt(request.question, 80)));
  }
}

void ValidateRequest(const EdRequest &request) {
  if (request.k < 1) Fail(ErrorCode::kUsage, "ED request needs k >= 1");
  if (CountOccurrences(request.prompt, kEntityMarker) != 2) {
    Fail(ErrorCode::kUsage,
         fmt::format("ED prompt must contain two [ENT] markers: \"{}\"",
                     Excerpt(request.prompt, 80)));
  }
}

std::vector<SpanAnswer> QaExtract(QaBackend &backend,
                                  const QaRequest &request) {
  ValidateRequest(request);
  std::vector<SpanAnswer> answers = backend.Extract(request);
  for (const SpanAnswer &answer : answers) {
    if (!ValidScore(answer.score)) {
      Fail(ErrorCode::kProtocol,
           fmt::format("QA answer \"{}\" has score {} outside [0, 1]",
                       Excerpt(answer.text, 80), answer.score));
    }
    if (answer.char_start > answer.char_end ||
        answer.char_end > request.context.size() ||
        request.context.compare(answer.char_start,
                                answer.char_end - answer.char_start,
                                answer.text) != 0) {
      Fail(ErrorCode::kProtocol,
           fmt::format("QA answer \"{}\" does not match context[{}, {})",
                       Excerpt(answer.text, 80), answer.char_start,
                       answer.char_end));
    }
  }
  std::sort(answers.begin(), answers.end(),
            [](const SpanAnswer &a, const SpanAnswer &b) {
              if (a.score != b.score) return a.score > b.score;
              if (a.char_start != b.char_start) {
                return a.char_start < b.char_start;
              }
              return a.text < b.text;
            });
  if (answers.size() > request.k) answers.resize(request.k);
  return answers;
}

std::vector<EntityGuess> EdGenerate(EdBackend &backend,
                                    const EdRequest &request) {
  ValidateRequest(request);
  std::vector<EntityGuess> guesses = backend.Generate(request);
  for (const EntityGuess &guess : guesses) {
    if (guess.name.empty()) {
      Fail(ErrorCode::kProtocol, "ED guess with an empty name");
    }
    if (!ValidScore(guess.score)) {
      Fail(ErrorCode::kProtocol,
           fmt::format("ED guess \"{}\" has score {} outside [0, 1]",
                       Excerpt(guess.name, 80), guess.score));
    }
  }
  std::stable_sort(guesses.begin(), guesses.end(),
                   [](const EntityGuess &a, const EntityGuess &b) {
                     if (a.score != b.score) return a.score > b.score;
                     return a.name < b.name;
                   });
  if (guesses.size() > request.k) guesses.resize(request.k);
  return guesses;
}

MockQaBackend::MockQaBackend(std::map<std::string, double> gazetteer)
    : gazetteer_(std::move(gazetteer)) {
  for (const auto &[surface, score] : gazetteer_) {
    if (!ValidScore(score)) {
      Fail(ErrorCode::kUsage,
           fmt::format("gazetteer score {} for \"{}\" is outside [0, 1]", score,
                       surface));
    }
  }
}

std::vector<SpanAnswer> MockQaBackend::Extract(const QaRequest &request) {
  const std::string &context = request.context;
  std::vector<SpanAnswer> answers;
  for (const auto &[surface, score] : gazetteer_) {
    if (surface.empty()) continue;
    for (size_t pos = context.find(surface); pos != std::string::npos;
         pos = context.find(surface, pos + 1)) {
      size_t end = pos + surface.size();
      bool left_ok = pos == 0 || !IsWordByte(context[pos - 1]) ||
                     !IsWordByte(surface.front());
      bool right_ok = end == context.size() || !IsWordByte(context[end]) ||
                      !IsWordByte(surface.back());
      if (left_ok && right_ok) {
        answers.push_back(SpanAnswer{surface, score, pos, end});
        break;
      }
    }
  }
  return answers;
}

std::string TokenKey(std::string_view text) {
  std::string key = " ";
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
    size_t start = i;
    while (i < text.size() &&
           !std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
    if (start == i) break;
    NormalizedName token = Normalize(text.substr(start, i - start));
    if (token.empty()) continue;
    key += token.str();
    key += ' ';
  }
  return key;
}

MockEdBackend::MockEdBackend(std::shared_ptr<const KbSnapshot> snapshot,
                             RelationRegistry relations,
                             std::set<GroundFact> truth)
    : snapshot_(std::move(snapshot)),
      index_(BuildNameIndex(*snapshot_)),
      relations_(std::move(relations)),
      truth_(std::move(truth)) {
  for (const auto &[id, entity] : snapshot_->entities) {
    std::set<std::string> keys;
    for (const std::string &name : entity.Names()) {
      for (const std::string &variant : {name, StripQualifier(name)}) {
        std::string key = TokenKey(variant);
        if (key.size() > 1) keys.insert(std::move(key));
      }
    }
    for (const std::string &key : keys) name_keys_.emplace_back(key, id);
  }
}

std::vector<EntityGuess> MockEdBackend::Generate(const EdRequest &request) {
  // Which (pid, subject) does the prompt ask about?
  std::vector<std::pair<std::string, EntityId>> queries;
  for (const RelationSpec &spec : relations_.specs()) {
    size_t hole = spec.ed_template.find(kSubjectPlaceholder);
    if (hole == std::string::npos) continue;
    std::string_view tmpl = spec.ed_template;
    std::string_view prefix = tmpl.substr(0, hole);
    std::string_view suffix = tmpl.substr(hole + kSubjectPlaceholder.size());
    std::string_view prompt = request.prompt;
    if (prompt.size() < prefix.size() + suffix.size() ||
        !prompt.starts_with(prefix) || !prompt.ends_with(suffix)) {
      continue;
    }
    std::string_view label = prompt.substr(
        prefix.size(), prompt.size() - prefix.size() - suffix.size());
    for (const EntityId &subject : index_.Resolve(label)) {
      queries.emplace_back(spec.pid, subject);
    }
  }

  std::string context_key = TokenKey(request.context);
  std::map<EntityId, double> found;
  for (const auto &[key, id] : name_keys_) {
    if (found.count(id) || context_key.find(key) == std::string::npos) {
      continue;
    }
    double score = 0.5;
    for (const auto &[pid, subject] : queries) {
      if (truth_.count(GroundFact{subject, pid, id})) score = 1.0;
    }
    found.emplace(id, score);
  }

  std::vector<EntityGuess> guesses;
  for (const auto &[id, score] : found) {
    guesses.push_back(EntityGuess{snapshot_->Get(id).label, score});
  }
  std::stable_sort(guesses.begin(), guesses.end(),
                   [](const EntityGuess &a, const EntityGuess &b) {
                     if (a.score != b.score) return a.score > b.score;
                     return a.name < b.name;
                   });
  if (guesses.size() > request.k) guesses.resize(request.k);
  return guesses;
}

std::map<std::string, double> LoadGazetteerFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kData, fmt::format("cannot open '{}'", path));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error &e) {
    Fail(ErrorCode::kData, fmt::format("{}: {}", path, e.what()));
  }
  if (!doc.is_object()) {
    Fail(ErrorCode::kData,
         fmt::format("{}: gazetteer must be a JSON object", path));
  }
  std::map<std::string, double> gazetteer;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!it.value().is_number()) {
      Fail(ErrorCode::kData, fmt::format("{}: score for \"{}\" is not a "
                                         "number",
                                         path, it.key()));
    }
    double score = it.value().get<double>();
    if (!(score >= 0.0 && score <= 1.0)) {
      Fail(ErrorCode::kData, fmt::format("{}: score for \"{}\" is outside "
                                         "[0, 1]",
                                         path, it.key()));
    }
    gazetteer[it.key()] = score;
  }
  return gazetteer;
}

std::set<GroundFact> LoadTruthFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kData, fmt::format("cannot open '{}'", path));
  std::set<GroundFact> truth;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json obj = json::parse(line);
      truth.insert(GroundFact{EntityId(obj.at("subject").get<std::string>()),
                              obj.at("pid").get<std::string>(),
                              EntityId(obj.at("object").get<std::string>())});
    } catch (const json::exception &e) {
      Fail(ErrorCode::kData, fmt::format("{}:{}: malformed truth fact: {}",
                                         path, line_number, e.what()));
    }
  }
  return truth;
}

}  // namespace kbc
