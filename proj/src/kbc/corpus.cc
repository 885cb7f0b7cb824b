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

#include "kbc/corpus.h"

#include <fmt/format.h>
#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <array>
#include <fstream>

#include "json.hpp"

namespace kbc {

using json = nlohmann::json;

const std::string *ArticleStore::Find(const EntityId &subject) const {
  auto it = articles_.find(subject);
  return it == articles_.end() ? nullptr : &it->second;
}

ArticleStore LoadCorpus(std::istream &in, Warnings *warnings,
                        std::string_view source) {
  ArticleStore store;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::string where = fmt::format("{}:{}", source, line_number);
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error &e) {
      Fail(ErrorCode::kData,
           fmt::format("{}: malformed line: {}", where, e.what()));
    }
    if (!obj.is_object()) {
      Fail(ErrorCode::kData, fmt::format("{}: malformed line: expected a JSON "
                                         "object",
                                         where));
    }
    for (const char *field : {"id", "text"}) {
      auto it = obj.find(field);
      if (it == obj.end()) {
        Fail(ErrorCode::kData,
             fmt::format("{}: missing required field '{}'", where, field));
      }
      if (!it->is_string()) {
        Fail(ErrorCode::kData,
             fmt::format("{}: field '{}' must be a string", where, field));
      }
    }
    std::string id = obj["id"].get<std::string>();
    if (id.empty()) {
      Fail(ErrorCode::kData, fmt::format("{}: field 'id' is empty", where));
    }
    EntityId subject(std::move(id));
    if (store.Find(subject) != nullptr) {
      Warn(warnings, fmt::format("{}: duplicate article for '{}'; the later "
                                 "line wins",
                                 where, subject.str()));
    }
    store.Put(subject, obj["text"].get<std::string>());
  }
  return store;
}

ArticleStore LoadCorpusFile(const std::string &path, Warnings *warnings) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kData, fmt::format("cannot open '{}'", path));
  return LoadCorpus(in, warnings, path);
}

namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool IsTerminator(char c) { return c == '.' || c == '!' || c == '?'; }

bool IsUpperAt(std::string_view text, size_t pos) {
  int32_t i = static_cast<int32_t>(pos);
  UChar32 c;
  U8_NEXT(reinterpret_cast<const uint8_t *>(text.data()), i,
          static_cast<int32_t>(text.size()), c);
  return c >= 0 && u_isupper(c);
}

size_t CodePoints(std::string_view s) {
  size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::string_view Trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && IsSpace(s[b])) ++b;
  while (e > b && IsSpace(s[e - 1])) --e;
  return s.substr(b, e - b);
}

// The token that ends with the '.' at `dot`, without leading brackets or
// quotes.
bool IsAbbreviation(std::string_view text, size_t dot) {
  static constexpr std::array<std::string_view, 5> kAbbreviations = {
      "Mr.", "Dr.", "St.", "No.", "vs."};
  size_t begin = dot;
  while (begin > 0 && !IsSpace(text[begin - 1])) --begin;
  while (begin < dot && (text[begin] == '(' || text[begin] == '"' ||
                         text[begin] == '\'' || text[begin] == '[')) {
    ++begin;
  }
  std::string_view word = text.substr(begin, dot - begin + 1);
  for (std::string_view abbreviation : kAbbreviations) {
    if (word == abbreviation) return true;
  }
  if (word.size() == 2) {
    unsigned char c = static_cast<unsigned char>(word[0]);
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
  }
  return false;
}

}  // namespace

std::vector<std::string> SplitSentences(std::string_view text) {
  std::vector<std::string> sentences;
  auto emit = [&sentences](std::string_view piece) {
    std::string_view trimmed = Trim(piece);
    if (CodePoints(trimmed) >= 3) sentences.emplace_back(trimmed);
  };

  size_t start = 0;
  for (size_t i = 0; i < text.size(); ++i) {
    if (!IsTerminator(text[i])) continue;
    size_t next = i + 1;
    bool boundary = false;
    if (next == text.size()) {
      boundary = true;
    } else if (IsSpace(text[next])) {
      size_t k = next;
      while (k < text.size() && IsSpace(text[k])) ++k;
      boundary = k == text.size() || IsUpperAt(text, k);
    }
    if (boundary && text[i] == '.' && IsAbbreviation(text, i)) boundary = false;
    if (!boundary) continue;
    emit(text.substr(start, next - start));
    start = next;
  }
  if (start < text.size()) emit(text.substr(start));
  return sentences;
}

std::vector<ContextSentence> Sentences(const ArticleStore &store,
                                       const EntityId &subject) {
  std::vector<ContextSentence> out;
  const std::string *article = store.Find(subject);
  if (article == nullptr) return out;
  std::vector<std::string> pieces = SplitSentences(*article);
  out.reserve(pieces.size());
  for (size_t i = 0; i < pieces.size(); ++i) {
    out.push_back(ContextSentence{subject, i, std::move(pieces[i])});
  }
  return out;
}

std::vector<ContextSentence> ContextWindows(
    const std::vector<ContextSentence> &sentences, size_t window) {
  if (window <= 1 || sentences.size() <= 1) return sentences;
  std::vector<ContextSentence> out;
  size_t last_start = sentences.size() > window ? sentences.size() - window : 0;
  for (size_t i = 0; i <= last_start; ++i) {
    ContextSentence joined = sentences[i];
    for (size_t j = i + 1; j < std::min(sentences.size(), i + window); ++j) {
      joined.text += ' ';
      joined.text += sentences[j].text;
    }
    out.push_back(std::move(joined));
  }
  return out;
}

}  // namespace kbc
