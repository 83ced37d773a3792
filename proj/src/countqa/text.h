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

// Byte-oriented text helpers shared by the parser, the offline providers and
// the instance normalizer. All offsets are UTF-8 byte offsets.

#ifndef COUNTQA_TEXT_H_
#define COUNTQA_TEXT_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace countqa {

enum class TokenKind { kWord, kNumber, kPunct };

struct Token {
  std::string_view text;
  std::size_t begin = 0;
  std::size_t end = 0;
  TokenKind kind = TokenKind::kWord;

  bool is_word() const { return kind == TokenKind::kWord; }
  bool is_number() const { return kind == TokenKind::kNumber; }
  bool is_punct() const { return kind == TokenKind::kPunct; }
  // Hyphen, en dash or em dash.
  bool is_dash() const;
};

// Words are runs of letters (any non-ASCII byte counts as a letter, except
// the UTF-8 en/em dash), with inner apostrophes. Numbers are digit runs with
// thousands separators ("1,000") and a decimal point. Everything else is a
// one-character punctuation token. The token views point into `text`.
std::vector<Token> Tokenize(std::string_view text);

std::string Lower(std::string_view s);

bool IsStopword(std::string_view lower_word);

// True for words that cannot be part of a count-modified noun phrase:
// stopwords, hedges, scale words, common verbs and participles. Words
// ending in -ed/-ing only break a phrase after its first word ("skilled
// workers" but not "songs recorded").
bool IsPhraseBreak(std::string_view lower_word, bool first_word);

// Lowercased alphanumeric tokens, in order, duplicates kept.
std::vector<std::string> WordTokens(std::string_view text);

// Distinct lowercased non-stopword tokens, in first-occurrence order.
std::vector<std::string> ContentTokens(std::string_view text);

struct Range {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
  bool contains(std::size_t pos) const { return pos >= begin && pos < end; }
};

// Sentence boundaries are '.', '!' or '?' followed by whitespace or the end
// of text, and line breaks. Returned ranges are trimmed and nonempty.
std::vector<Range> SplitSentences(std::string_view text);

// Smallest union of sentences covering [begin, end); falls back to the span
// itself when the text has no sentence structure around it.
Range EnclosingSentence(std::string_view text, std::size_t begin, std::size_t end);

// Casefold, strip surrounding punctuation and leading articles, collapse
// whitespace. "The Beatles," -> "beatles".
std::string NormalizeMentionKey(std::string_view mention);

std::string CollapseWhitespace(std::string_view s);

std::uint64_t Fnv1a64(std::string_view data);

}  // namespace countqa

#endif  // COUNTQA_TEXT_H_
