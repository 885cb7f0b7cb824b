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

#ifndef KBC_CORPUS_H_
#define KBC_CORPUS_H_

#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "kbc/model.h"
#include "kbc/status.h"

namespace kbc {

// Article text per subject entity.
class ArticleStore {
 public:
  const std::string *Find(const EntityId &subject) const;
  void Put(const EntityId &subject, std::string text) {
    articles_[subject] = std::move(text);
  }
  size_t size() const { return articles_.size(); }
  const std::map<EntityId, std::string> &articles() const { return articles_; }

 private:
  std::map<EntityId, std::string> articles_;
};

struct ContextSentence {
  EntityId subject;
  size_t index = 0;
  std::string text;

  bool operator==(const ContextSentence &) const = default;
};

// One JSON object per line with `id` and `text`. Duplicate ids: the later
// line wins, with a warning.
ArticleStore LoadCorpus(std::istream &in, Warnings *warnings = nullptr,
                        std::string_view source = "<stream>");
ArticleStore LoadCorpusFile(const std::string &path,
                            Warnings *warnings = nullptr);

// Splits `text` at '.', '!' or '?' followed by whitespace and an uppercase
// letter, or by the end of the text. Boundaries after "Mr.", "Dr.", "St.",
// "No.", "vs." and single-letter initials are suppressed. Sentences shorter
// than three characters after trimming are dropped.
std::vector<std::string> SplitSentences(std::string_view text);

// Sentences of the subject's article; empty when the subject has none.
std::vector<ContextSentence> Sentences(const ArticleStore &store,
                                       const EntityId &subject);

// Joins each run of `window` consecutive sentences into one context. The
// window keeps the index of its first sentence. window == 1 is the identity.
std::vector<ContextSentence> ContextWindows(
    const std::vector<ContextSentence> &sentences, size_t window);

}  // namespace kbc

#endif  // KBC_CORPUS_H_
