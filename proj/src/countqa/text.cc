// Copyright 2026 The CountQA Authors.
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

#include "countqa/text.h"

#include <algorithm>
#include <array>
#include <unordered_set>

namespace countqa {

namespace {

bool IsAsciiDigit(unsigned char c) { return c >= '0' && c <= '9'; }
bool IsAsciiAlpha(unsigned char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool IsSpace(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Length of a UTF-8 en dash or em dash at pos, 0 otherwise.
std::size_t DashLength(std::string_view s, std::size_t pos) {
  if (pos + 2 < s.size() && static_cast<unsigned char>(s[pos]) == 0xE2 &&
      static_cast<unsigned char>(s[pos + 1]) == 0x80) {
    unsigned char c = s[pos + 2];
    if (c == 0x93 || c == 0x94) return 3;
  }
  return 0;
}

bool IsLetterAt(std::string_view s, std::size_t pos) {
  unsigned char c = s[pos];
  if (IsAsciiAlpha(c)) return true;
  return c >= 0x80 && DashLength(s, pos) == 0;
}

// The bundled stopword list. "many" is deliberately absent: count queries
// all carry it, and it is scored like any other content token.
const std::unordered_set<std::string_view> &Stopwords() {
  static const std::unordered_set<std::string_view> kWords = {
      "a",      "an",     "the",   "and",     "or",        "but",      "if",     "of",
      "in",     "on",     "at",    "to",      "for",       "by",       "with",   "from",
      "into",   "onto",   "how",   "what",    "which",     "who",      "whom",   "whose",
      "when",   "where",  "why",   "is",      "are",       "was",      "were",   "be",
      "been",   "being",  "am",    "do",      "does",      "did",      "done",   "has",
      "have",   "had",    "having", "there",  "here",      "this",     "that",   "these",
      "those",  "it",     "its",   "they",    "them",      "their",    "he",     "him",
      "his",    "she",    "her",   "we",      "us",        "our",      "you",    "your",
      "i",      "me",     "my",    "as",      "than",      "then",     "so",     "such",
      "not",    "no",     "nor",   "can",     "could",     "will",     "would",  "shall",
      "should", "may",    "might", "must",    "also",      "only",     "just",   "all",
      "any",    "each",   "both",  "about",   "up",        "out",      "off",    "per",
      "via",    "total",  "including", "include", "includes", "s",     "whereas", "while",
      "around", "before", "after", "during", "since",   "until",    "over",   "under",
      "among",  "across", "through", "against", "between", "within",  "without",
  };
  return kWords;
}

// Words that never start or extend a modifier phrase.
const std::unordered_set<std::string_view> &PhraseBreakWords() {
  static const std::unordered_set<std::string_view> kWords = {
      "approximately", "approx", "around", "almost", "nearly", "roughly", "some", "estimated",
      "circa", "over", "under", "above", "below", "more", "fewer", "less", "least", "most",
      "than", "between", "upwards", "excess", "well", "close", "or", "plus", "other",
      "different", "various", "several", "many", "much", "few", "thousand", "million",
      "billion", "hundred", "spoken", "written", "sung", "made", "built", "known", "born",
      "given", "taken", "won", "sold", "drawn", "grown", "shown", "seen", "held", "found",
      "wrote", "sang", "said", "says", "say", "became", "become", "gave", "took", "began",
      "according", "since", "ago", "who", "whom", "which", "that",
  };
  return kWords;
}

bool LooksLikeInflectedVerb(std::string_view lower) {
  auto ends_with = [&](std::string_view suf) {
    return lower.size() > suf.size() + 2 &&
           lower.compare(lower.size() - suf.size(), suf.size(), suf) == 0;
  };
  return ends_with("ed") || ends_with("ing");
}

}  // namespace

bool Token::is_dash() const {
  if (kind != TokenKind::kPunct) return false;
  return text == "-" || text == "\xE2\x80\x93" || text == "\xE2\x80\x94";
}

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    unsigned char c = text[i];
    if (IsSpace(c)) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (IsAsciiDigit(c)) {
      ++i;
      while (i < n) {
        if (IsAsciiDigit(text[i])) {
          ++i;
        } else if (text[i] == ',' && i + 3 < n && IsAsciiDigit(text[i + 1]) &&
                   IsAsciiDigit(text[i + 2]) && IsAsciiDigit(text[i + 3]) &&
                   (i + 4 >= n || !IsAsciiDigit(text[i + 4]))) {
          i += 4;
        } else if (text[i] == '.' && i + 1 < n && IsAsciiDigit(text[i + 1])) {
          i += 2;
          while (i < n && IsAsciiDigit(text[i])) ++i;
          break;
        } else {
          break;
        }
      }
      tokens.push_back({text.substr(start, i - start), start, i, TokenKind::kNumber});
      continue;
    }
    if (IsLetterAt(text, i)) {
      ++i;
      while (i < n) {
        if (IsAsciiDigit(text[i]) || IsLetterAt(text, i)) {
          ++i;
        } else if (text[i] == '\'' && i + 1 < n && IsLetterAt(text, i + 1)) {
          ++i;
        } else {
          break;
        }
      }
      tokens.push_back({text.substr(start, i - start), start, i, TokenKind::kWord});
      continue;
    }
    std::size_t len = DashLength(text, i);
    if (len == 0) len = 1;
    i += len;
    tokens.push_back({text.substr(start, len), start, i, TokenKind::kPunct});
  }
  return tokens;
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char &c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool IsStopword(std::string_view lower_word) { return Stopwords().count(lower_word) > 0; }

bool IsPhraseBreak(std::string_view lower_word, bool first_word) {
  if (IsStopword(lower_word) || PhraseBreakWords().count(lower_word) > 0) return true;
  return !first_word && LooksLikeInflectedVerb(lower_word);
}

std::vector<std::string> WordTokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    if (IsAsciiDigit(c) || IsAsciiAlpha(c) || c >= 0x80) {
      cur.push_back(static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<std::string> ContentTokens(std::string_view text) {
  std::vector<std::string> out;
  for (auto &w : WordTokens(text)) {
    if (IsStopword(w)) continue;
    if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(std::move(w));
  }
  return out;
}

std::vector<Range> SplitSentences(std::string_view text) {
  std::vector<Range> out;
  auto emit = [&](std::size_t b, std::size_t e) {
    while (b < e && IsSpace(text[b])) ++b;
    while (e > b && IsSpace(text[e - 1])) --e;
    if (e > b) out.push_back({b, e});
  };
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '\n') {
      emit(start, i);
      start = i + 1;
    } else if ((c == '.' || c == '!' || c == '?') &&
               (i + 1 == text.size() || IsSpace(text[i + 1]))) {
      emit(start, i + 1);
      start = i + 1;
    }
  }
  emit(start, text.size());
  return out;
}

Range EnclosingSentence(std::string_view text, std::size_t begin, std::size_t end) {
  Range result{begin, end};
  bool found = false;
  for (const Range &s : SplitSentences(text)) {
    bool overlaps = s.begin < end && begin < s.end;
    if (!overlaps) continue;
    if (!found) {
      result = s;
      found = true;
    } else {
      result.begin = std::min(result.begin, s.begin);
      result.end = std::max(result.end, s.end);
    }
  }
  result.begin = std::min(result.begin, begin);
  result.end = std::max(result.end, end);
  return result;
}

std::string CollapseWhitespace(std::string_view s) {
  std::string out;
  bool pending = false;
  for (unsigned char c : s) {
    if (IsSpace(c)) {
      pending = !out.empty();
      continue;
    }
    if (pending) out.push_back(' ');
    pending = false;
    out.push_back(static_cast<char>(c));
  }
  return out;
}

std::string NormalizeMentionKey(std::string_view mention) {
  std::string s = CollapseWhitespace(Lower(mention));
  auto is_trim = [](unsigned char c) {
    return !(IsAsciiDigit(c) || IsAsciiAlpha(c) || c >= 0x80) || IsSpace(c);
  };
  for (;;) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_trim(s[b])) ++b;
    while (e > b && is_trim(s[e - 1])) --e;
    s = s.substr(b, e - b);
    bool stripped = false;
    for (std::string_view article : {"the ", "a ", "an "}) {
      if (s.size() > article.size() && s.compare(0, article.size(), article) == 0) {
        s.erase(0, article.size());
        stripped = true;
        break;
      }
    }
    if (!stripped) break;
  }
  if (s == "the" || s == "a" || s == "an") return "";
  return CollapseWhitespace(s);
}

std::uint64_t Fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace countqa
