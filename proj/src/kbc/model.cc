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

#include "kbc/model.h"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "kbc/status.h"

namespace kbc {

EntityId::EntityId(std::string value) : value_(std::move(value)) {
  if (value_.empty()) Fail(ErrorCode::kData, "empty entity id");
}

std::vector<std::string> EntityRecord::Names() const {
  std::vector<std::string> names;
  names.reserve(aliases.size() + 1);
  names.push_back(label);
  for (const std::string &alias : aliases) names.push_back(alias);
  return names;
}

namespace {

const icu::Normalizer2 &CompatCaseFold() {
  static const icu::Normalizer2 *instance = [] {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2 *n =
        icu::Normalizer2::getNFKCCasefoldInstance(status);
    if (U_FAILURE(status) || n == nullptr) {
      Fail(ErrorCode::kInternal, "ICU NFKC_Casefold normalizer unavailable");
    }
    return n;
  }();
  return *instance;
}

// A bracket that is closed (or opened) elsewhere in the name is part of the
// name, not surrounding punctuation.
bool IsPairedBracket(const std::u32string &s, size_t pos) {
  UChar32 c = static_cast<UChar32>(s[pos]);
  int type = u_getIntPropertyValue(c, UCHAR_BIDI_PAIRED_BRACKET_TYPE);
  if (type == U_BPT_NONE) return false;
  char32_t partner = static_cast<char32_t>(u_getBidiPairedBracket(c));
  if (type == U_BPT_OPEN) {
    return s.find(partner, pos + 1) != std::u32string::npos;
  }
  return pos > 0 && s.rfind(partner, pos - 1) != std::u32string::npos;
}

std::u32string CollapseWhitespace(const std::u32string &in) {
  std::u32string out;
  out.reserve(in.size());
  bool pending_space = false;
  for (char32_t c : in) {
    if (u_isUWhiteSpace(static_cast<UChar32>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(U' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::u32string StripSurroundingPunctuation(std::u32string s) {
  bool changed = true;
  while (changed && !s.empty()) {
    changed = false;
    if (u_ispunct(static_cast<UChar32>(s.front())) && !IsPairedBracket(s, 0)) {
      s.erase(0, 1);
      changed = true;
    }
    if (!s.empty() && u_ispunct(static_cast<UChar32>(s.back())) &&
        !IsPairedBracket(s, s.size() - 1)) {
      s.pop_back();
      changed = true;
    }
    s = CollapseWhitespace(s);
  }
  return s;
}

std::string NormalizeOnce(std::string_view raw) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString text = icu::UnicodeString::fromUTF8(
      icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  icu::UnicodeString folded = CompatCaseFold().normalize(text, status);
  if (U_FAILURE(status)) return std::string();

  std::u32string cps;
  cps.reserve(folded.length());
  for (int32_t i = 0; i < folded.length(); i = folded.moveIndex32(i, 1)) {
    cps.push_back(static_cast<char32_t>(folded.char32At(i)));
  }
  cps = StripSurroundingPunctuation(CollapseWhitespace(cps));

  icu::UnicodeString result;
  for (char32_t c : cps) result.append(static_cast<UChar32>(c));
  std::string utf8;
  result.toUTF8String(utf8);
  return utf8;
}

}  // namespace

NormalizedName Normalize(std::string_view raw) {
  // Removing characters can in principle denormalize a string (a combining
  // mark left next to a new base), so run to a fixpoint.
  std::string current = NormalizeOnce(raw);
  for (int round = 0; round < 4; ++round) {
    std::string next = NormalizeOnce(current);
    if (next == current) break;
    current = std::move(next);
  }
  return NormalizedName(std::move(current));
}

std::string StripQualifier(std::string_view name) {
  size_t end = name.find_last_not_of(" \t\r\n");
  if (end == std::string_view::npos || name[end] != ')') {
    return std::string(name);
  }
  int depth = 0;
  size_t open = std::string_view::npos;
  for (size_t i = end + 1; i-- > 0;) {
    if (name[i] == ')') {
      ++depth;
    } else if (name[i] == '(') {
      if (--depth == 0) {
        open = i;
        break;
      }
    }
  }
  if (open == std::string_view::npos) return std::string(name);
  std::string_view head = name.substr(0, open);
  size_t head_end = head.find_last_not_of(" \t\r\n");
  if (head_end == std::string_view::npos) return std::string(name);
  return std::string(head.substr(0, head_end + 1));
}

size_t CountTokens(std::string_view text) {
  size_t tokens = 0;
  bool in_token = false;
  for (char c : text) {
    bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
                 c == '\v';
    if (!space && !in_token) ++tokens;
    in_token = !space;
  }
  return tokens;
}

size_t CountOccurrences(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return 0;
  size_t count = 0;
  for (size_t pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

}  // namespace kbc
