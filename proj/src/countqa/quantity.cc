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

#include "countqa/quantity.h"

#include <algorithm>
#include <array>
#include <fstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "countqa/text.h"

namespace countqa {

namespace {

// Seed list for the measurement stoplist. data/measurement_units.txt carries
// the same tokens for editing.
constexpr std::string_view kDefaultUnits[] = {
    // length, area, volume
    "mm", "cm", "m", "km", "kilometer", "kilometers", "kilometre", "kilometres", "meter",
    "meters", "metre", "metres", "centimeter", "centimeters", "millimeter", "millimeters",
    "mile", "miles", "mi", "ft", "feet", "foot", "inch", "inches", "yard", "yards",
    "acre", "acres", "hectare", "hectares", "ha", "sq", "square", "km2", "m2", "l", "liter",
    "liters", "litre", "litres", "ml", "gallon", "gallons",
    // mass
    "mg", "g", "kg", "kilogram", "kilograms", "gram", "grams", "ton", "tons", "tonne",
    "tonnes", "lb", "lbs", "pound", "pounds", "ounce", "ounces", "oz",
    // time
    "ms", "second", "seconds", "sec", "secs", "minute", "minutes", "min", "mins", "hour",
    "hours", "hr", "hrs", "h", "day", "days", "week", "weeks", "month", "months", "year",
    "years", "yr", "yrs", "decade", "decades", "century", "centuries", "bc", "ad", "bce",
    "ce",
    // temperature, speed, energy, data
    "degree", "degrees", "°", "celsius", "fahrenheit", "kelvin", "mph", "kph", "km/h", "knots",
    "watt", "watts", "w", "kw", "mw", "gw", "kwh", "volt", "volts", "v", "hz", "khz", "mhz",
    "ghz", "kb", "mb", "gb", "tb", "byte", "bytes",
    // money, ratios
    "$", "€", "£", "¥", "₹", "usd", "eur", "gbp", "dollar", "dollars", "euro", "euros",
    "cent", "cents", "rupee", "rupees", "yen", "%", "percent", "percentage", "per",
    "trillion", "trillions",
};

enum class WordClass { kNone, kUnit, kTeen, kTens, kHundred, kScale };

struct WordInfo {
  WordClass cls;
  std::int64_t value;
};

const std::unordered_map<std::string_view, WordInfo> &NumberWords() {
  static const std::unordered_map<std::string_view, WordInfo> kWords = {
      {"zero", {WordClass::kUnit, 0}},         {"one", {WordClass::kUnit, 1}},
      {"two", {WordClass::kUnit, 2}},          {"three", {WordClass::kUnit, 3}},
      {"four", {WordClass::kUnit, 4}},         {"five", {WordClass::kUnit, 5}},
      {"six", {WordClass::kUnit, 6}},          {"seven", {WordClass::kUnit, 7}},
      {"eight", {WordClass::kUnit, 8}},        {"nine", {WordClass::kUnit, 9}},
      {"ten", {WordClass::kTeen, 10}},         {"eleven", {WordClass::kTeen, 11}},
      {"twelve", {WordClass::kTeen, 12}},      {"thirteen", {WordClass::kTeen, 13}},
      {"fourteen", {WordClass::kTeen, 14}},    {"fifteen", {WordClass::kTeen, 15}},
      {"sixteen", {WordClass::kTeen, 16}},     {"seventeen", {WordClass::kTeen, 17}},
      {"eighteen", {WordClass::kTeen, 18}},    {"nineteen", {WordClass::kTeen, 19}},
      {"twenty", {WordClass::kTens, 20}},      {"thirty", {WordClass::kTens, 30}},
      {"forty", {WordClass::kTens, 40}},       {"fourty", {WordClass::kTens, 40}},
      {"fifty", {WordClass::kTens, 50}},       {"sixty", {WordClass::kTens, 60}},
      {"seventy", {WordClass::kTens, 70}},     {"eighty", {WordClass::kTens, 80}},
      {"ninety", {WordClass::kTens, 90}},      {"hundred", {WordClass::kHundred, 100}},
      {"thousand", {WordClass::kScale, 1000}}, {"million", {WordClass::kScale, 1000000}},
      {"billion", {WordClass::kScale, 1000000000}},
  };
  return kWords;
}

struct Hedge {
  std::array<std::string_view, 3> words;
  Modifier modifier;
  // "between A and B" / "from A to B" only count when a range follows.
  bool range_only = false;
};

// Longer phrases first so "no more than" wins over "more than".
constexpr Hedge kHedges[] = {
    {{"no", "fewer", "than"}, Modifier::kAtLeast},
    {{"no", "less", "than"}, Modifier::kAtLeast},
    {{"not", "less", "than"}, Modifier::kAtLeast},
    {{"in", "excess", "of"}, Modifier::kAtLeast},
    {{"no", "more", "than"}, Modifier::kAtMost},
    {{"not", "more", "than"}, Modifier::kAtMost},
    {{"more", "than"}, Modifier::kAtLeast},
    {{"greater", "than"}, Modifier::kAtLeast},
    {{"at", "least"}, Modifier::kAtLeast},
    {{"upwards", "of"}, Modifier::kAtLeast},
    {{"well", "over"}, Modifier::kAtLeast},
    {{"fewer", "than"}, Modifier::kAtMost},
    {{"less", "than"}, Modifier::kAtMost},
    {{"up", "to"}, Modifier::kAtMost},
    {{"at", "most"}, Modifier::kAtMost},
    {{"close", "to"}, Modifier::kApproximate},
    {{"approx", "."}, Modifier::kApproximate},
    {{"ca", "."}, Modifier::kApproximate},
    {{"over"}, Modifier::kAtLeast},
    {{"above"}, Modifier::kAtLeast},
    {{"under"}, Modifier::kAtMost},
    {{"below"}, Modifier::kAtMost},
    {{"approximately"}, Modifier::kApproximate},
    {{"approx"}, Modifier::kApproximate},
    {{"about"}, Modifier::kApproximate},
    {{"around"}, Modifier::kApproximate},
    {{"almost"}, Modifier::kApproximate},
    {{"nearly"}, Modifier::kApproximate},
    {{"roughly"}, Modifier::kApproximate},
    {{"some"}, Modifier::kApproximate},
    {{"estimated"}, Modifier::kApproximate},
    {{"circa"}, Modifier::kApproximate},
    {{"between"}, Modifier::kRange, true},
    {{"from"}, Modifier::kRange, true},
};

struct Lexed {
  std::vector<Token> tokens;
  std::vector<std::string> lower;
};

Lexed Lex(std::string_view text) {
  Lexed lx;
  lx.tokens = Tokenize(text);
  lx.lower.reserve(lx.tokens.size());
  for (const Token &t : lx.tokens) lx.lower.push_back(Lower(t.text));
  return lx;
}

struct NumberParse {
  Count value;
  std::size_t next = 0;  // token index after the number
  bool scaled = false;
  Count last_scale{1};
};

class NumberReader {
 public:
  explicit NumberReader(const Lexed &lx) : lx_(lx) {}

  std::optional<NumberParse> Read(std::size_t i) const {
    const std::size_t n = lx_.tokens.size();
    if (i >= n) return std::nullopt;
    NumberParse out;
    Count total{0};
    std::int64_t last_scale = 0;  // 0 = no scale seen
    std::size_t j = i;
    std::optional<Count> group;

    if ((lx_.lower[j] == "a" || lx_.lower[j] == "an") && j + 1 < n) {
      WordClass c = ClassOf(j + 1);
      if (c == WordClass::kScale) {
        group = Count(1);
        ++j;
      } else if (c == WordClass::kHundred) {
        group = Count(100);
        j += 2;
        if (auto tail = ReadHundredTail(j)) group = group->Plus(*tail);
      }
    }
    if (!group) group = ReadGroup(j, /*allow_digits=*/true);
    if (!group) return std::nullopt;

    for (;;) {
      if (j < n && ClassOf(j) == WordClass::kScale) {
        std::int64_t scale = NumberWords().at(lx_.lower[j]).value;
        if (last_scale != 0 && scale >= last_scale) break;
        auto scaled = group->Times(Count(scale));
        if (!scaled) return std::nullopt;
        auto sum = total.Plus(*scaled);
        if (!sum) return std::nullopt;
        total = *sum;
        last_scale = scale;
        ++j;
        group.reset();
        // Optional word continuation: "one million two hundred thousand".
        std::size_t k = j;
        if (k < n && lx_.lower[k] == "and") ++k;
        if (auto next = ReadGroup(k, /*allow_digits=*/false)) {
          group = next;
          j = k;
          continue;
        }
        break;
      }
      break;
    }
    if (group) {
      auto sum = total.Plus(*group);
      if (!sum) return std::nullopt;
      total = *sum;
    }
    out.value = total;
    out.next = j;
    out.scaled = last_scale != 0;
    if (out.scaled) out.last_scale = Count(last_scale);
    return out;
  }

 private:
  WordClass ClassOf(std::size_t j) const {
    if (j >= lx_.tokens.size() || !lx_.tokens[j].is_word()) return WordClass::kNone;
    auto it = NumberWords().find(lx_.lower[j]);
    return it == NumberWords().end() ? WordClass::kNone : it->second.cls;
  }

  std::int64_t ValueOf(std::size_t j) const { return NumberWords().at(lx_.lower[j]).value; }

  // 1..99 in words: "seven", "fifteen", "forty", "forty-two", "forty two".
  std::optional<std::int64_t> ReadSubHundred(std::size_t &j) const {
    WordClass c = ClassOf(j);
    if (c == WordClass::kUnit || c == WordClass::kTeen) {
      return ValueOf(j++);
    }
    if (c != WordClass::kTens) return std::nullopt;
    std::int64_t v = ValueOf(j++);
    std::size_t k = j;
    if (k < lx_.tokens.size() && lx_.tokens[k].text == "-" &&
        lx_.tokens[k].begin == lx_.tokens[k - 1].end) {
      ++k;
    }
    if (ClassOf(k) == WordClass::kUnit && ValueOf(k) != 0) {
      v += ValueOf(k);
      j = k + 1;
    }
    return v;
  }

  // After "hundred": optional "and" plus 1..99.
  std::optional<Count> ReadHundredTail(std::size_t &j) const {
    std::size_t k = j;
    if (k < lx_.tokens.size() && lx_.lower[k] == "and") ++k;
    if (auto sub = ReadSubHundred(k)) {
      j = k;
      return Count(*sub);
    }
    return std::nullopt;
  }

  // A value below one thousand, or a digit number.
  std::optional<Count> ReadGroup(std::size_t &j, bool allow_digits) const {
    const std::size_t n = lx_.tokens.size();
    if (j >= n) return std::nullopt;
    if (lx_.tokens[j].is_number()) {
      if (!allow_digits) return std::nullopt;
      auto v = Count::FromDecimal(lx_.tokens[j].text);
      if (!v) return std::nullopt;
      std::size_t k = j + 1;
      if (v->is_integer() && v->num() > 0 && v->num() < 100 && ClassOf(k) == WordClass::kHundred) {
        Count h = *v->Times(Count(100));
        ++k;
        if (auto tail = ReadHundredTail(k)) h = *h.Plus(*tail);
        j = k;
        return h;
      }
      j = k;
      return v;
    }
    std::size_t k = j;
    auto sub = ReadSubHundred(k);
    if (!sub) return std::nullopt;
    std::int64_t v = *sub;
    if (v > 0 && v < 100 && ClassOf(k) == WordClass::kHundred) {
      v *= 100;
      ++k;
      if (auto tail = ReadHundredTail(k)) v += tail->num();
    }
    j = k;
    return Count(v);
  }

  const Lexed &lx_;
};

class Scanner {
 public:
  Scanner(std::string_view text, const UnitStoplist &units)
      : text_(text), lx_(Lex(text)), units_(units), reader_(lx_) {}

  std::optional<QuantityMatch> FindFrom(std::size_t &i) const {
    const std::size_t n = lx_.tokens.size();
    while (i < n) {
      std::size_t consumed = 0;
      if (auto m = MatchAt(i, consumed)) {
        i += consumed;
        return m;
      }
      i += std::max<std::size_t>(consumed, 1);
    }
    return std::nullopt;
  }

 private:
  // Tries to match a quantity starting at token i. On failure `consumed` is
  // set to how many tokens may be skipped.
  std::optional<QuantityMatch> MatchAt(std::size_t i, std::size_t &consumed) const {
    consumed = 0;
    // Hedged forms first.
    for (const Hedge &h : kHedges) {
      std::size_t len = 0;
      bool ok = true;
      for (std::string_view w : h.words) {
        if (w.empty()) break;
        if (i + len >= lx_.tokens.size() || lx_.lower[i + len] != w) {
          ok = false;
          break;
        }
        ++len;
      }
      if (!ok) continue;
      if (auto m = MatchNumber(i, i + len, h.modifier, h.range_only, consumed)) {
        consumed += len;
        return m;
      }
      consumed = 0;
    }
    return MatchNumber(i, i, Modifier::kExact, false, consumed);
  }

  std::optional<QuantityMatch> MatchNumber(std::size_t surface_start, std::size_t j,
                                           Modifier modifier, bool range_only,
                                           std::size_t &consumed) const {
    const std::size_t n = lx_.tokens.size();
    auto first = reader_.Read(j);
    if (!first) return std::nullopt;
    consumed = first->next - j;
    // Digits glued to letters ("1990s", "3rd", "5km") are not counts.
    if (GluedToWord(first->next)) return std::nullopt;
    if (IsMeasurement(j, first->next)) return std::nullopt;
    if (IsYear(j, first->next) || IsPronounOne(j, first->next)) return std::nullopt;

    std::size_t end = first->next;
    Quantity q;
    q.value = first->value;
    q.modifier = modifier == Modifier::kRange ? Modifier::kExact : modifier;

    // Range: "A to B", "A-B", "between A and B".
    if (end < n && (modifier == Modifier::kExact || range_only)) {
      bool connector = false;
      if (range_only) {
        connector = (surface_start < j && lx_.lower[surface_start] == "between")
                        ? lx_.lower[end] == "and"
                        : lx_.lower[end] == "to";
      } else {
        connector = lx_.lower[end] == "to" || lx_.tokens[end].is_dash();
      }
      if (connector) {
        if (auto second = reader_.Read(end + 1)) {
          if (!GluedToWord(second->next)) {
            Count lo = first->value;
            Count hi = second->value;
            if (!first->scaled && second->scaled) {
              auto aligned = lo.Times(second->last_scale);
              if (aligned && *aligned <= hi) lo = *aligned;
            }
            if (lo <= hi) {
              if (IsMeasurement(end + 1, second->next)) {
                consumed = second->next - j;
                return std::nullopt;
              }
              auto mid = Count::Midpoint(lo, hi);
              if (mid) {
                q.modifier = Modifier::kRange;
                q.range_bounds = std::make_pair(lo, hi);
                q.value = *mid;
                end = second->next;
              }
            }
          }
        }
      }
    }
    if (range_only && q.modifier != Modifier::kRange) {
      // "between 5" / "from 3" without a closing bound: a plain count.
      q.modifier = Modifier::kExact;
      surface_start = j;
    }

    // Trailing bounds: "700+", "20 or more", "5 or fewer", "100 or so".
    if (q.modifier == Modifier::kExact && end < n) {
      if (lx_.tokens[end].text == "+" && lx_.tokens[end].begin == lx_.tokens[end - 1].end) {
        q.modifier = Modifier::kAtLeast;
        ++end;
      } else if (lx_.lower[end] == "or" && end + 1 < n) {
        const std::string &w = lx_.lower[end + 1];
        std::optional<Modifier> m;
        if (w == "more") m = Modifier::kAtLeast;
        if (w == "fewer" || w == "less") m = Modifier::kAtMost;
        if (w == "so") m = Modifier::kApproximate;
        if (m) {
          q.modifier = *m;
          end += 2;
        }
      }
    }

    QuantityMatch match;
    match.begin = lx_.tokens[surface_start].begin;
    match.end = lx_.tokens[end - 1].end;
    q.surface = std::string(text_.substr(match.begin, match.end - match.begin));
    match.quantity = std::move(q);
    consumed = end - surface_start;
    return match;
  }

  bool GluedToWord(std::size_t next) const {
    if (next == 0 || next >= lx_.tokens.size()) return false;
    const Token &prev = lx_.tokens[next - 1];
    const Token &tok = lx_.tokens[next];
    return prev.is_number() && tok.is_word() && tok.begin == prev.end;
  }

  // "in 1965", "before 2023": a bare four-digit number after a temporal
  // preposition is a year.
  bool IsYear(std::size_t begin, std::size_t next) const {
    if (next != begin + 1 || begin == 0 || !lx_.tokens[begin].is_number()) return false;
    std::string_view digits = lx_.tokens[begin].text;
    if (digits.size() != 4 || digits[0] < '1' || digits[0] > '2') return false;
    static const std::set<std::string, std::less<>> kTemporal = {
        "in", "before", "after", "since", "until", "till", "by", "during"};
    return kTemporal.count(lx_.lower[begin - 1]) > 0;
  }

  // "one of the ..." is a pronoun, not a count.
  bool IsPronounOne(std::size_t begin, std::size_t next) const {
    return next == begin + 1 && lx_.lower[begin] == "one" && next < lx_.tokens.size() &&
           lx_.lower[next] == "of";
  }

  // Number tokens [begin, next) directly followed by a unit, or directly
  // preceded by a glued unit symbol ("$5").
  bool IsMeasurement(std::size_t begin, std::size_t next) const {
    if (next < lx_.tokens.size() && units_.Contains(lx_.lower[next])) return true;
    if (begin > 0) {
      const Token &prev = lx_.tokens[begin - 1];
      if (prev.end == lx_.tokens[begin].begin && !prev.is_number() &&
          units_.Contains(lx_.lower[begin - 1])) {
        return true;
      }
    }
    return false;
  }

  std::string_view text_;
  Lexed lx_;
  const UnitStoplist &units_;
  NumberReader reader_;

};

bool IsPhraseWord(const Token &tok, std::string_view lower, bool first) {
  if (!tok.is_word()) return false;
  if (IsPhraseBreak(lower, first)) return false;
  return NumberWords().count(lower) == 0;
}

}  // namespace

std::string_view ModifierName(Modifier m) {
  switch (m) {
    case Modifier::kExact: return "exact";
    case Modifier::kApproximate: return "approximate";
    case Modifier::kAtLeast: return "at_least";
    case Modifier::kAtMost: return "at_most";
    case Modifier::kRange: return "range";
  }
  return "exact";
}

std::optional<Modifier> ParseModifierName(std::string_view name) {
  for (Modifier m : {Modifier::kExact, Modifier::kApproximate, Modifier::kAtLeast,
                     Modifier::kAtMost, Modifier::kRange}) {
    if (ModifierName(m) == name) return m;
  }
  return std::nullopt;
}

const UnitStoplist &UnitStoplist::Default() {
  static const UnitStoplist kDefault = [] {
    std::set<std::string> tokens;
    for (std::string_view u : kDefaultUnits) tokens.insert(std::string(u));
    return UnitStoplist(std::move(tokens));
  }();
  return kDefault;
}

UnitStoplist UnitStoplist::FromStream(std::istream &in) {
  std::set<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::string token = CollapseWhitespace(line);
    if (!token.empty()) tokens.insert(Lower(token));
  }
  return UnitStoplist(std::move(tokens));
}

UnitStoplist UnitStoplist::FromFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open unit stoplist: " + path);
  return FromStream(in);
}

bool UnitStoplist::Contains(std::string_view token) const {
  return tokens_.count(Lower(token)) > 0;
}

bool UnitStoplist::MentionedIn(std::string_view text) const {
  for (const Token &t : Tokenize(text)) {
    if (Contains(t.text)) return true;
  }
  return false;
}

std::optional<QuantityMatch> QuantityParser::Find(std::string_view text) const {
  Scanner scanner(text, *units_);
  std::size_t i = 0;
  return scanner.FindFrom(i);
}

std::vector<QuantityMatch> QuantityParser::FindAll(std::string_view text) const {
  Scanner scanner(text, *units_);
  std::vector<QuantityMatch> out;
  std::size_t i = 0;
  while (auto m = scanner.FindFrom(i)) out.push_back(std::move(*m));
  return out;
}

std::optional<Quantity> ParseQuantity(std::string_view text) {
  return ParseQuantity(text, UnitStoplist::Default());
}

std::optional<Quantity> ParseQuantity(std::string_view text, const UnitStoplist &units) {
  auto m = QuantityParser(units).Find(text);
  if (!m) return std::nullopt;
  return std::move(m->quantity);
}

std::optional<CountSpan> SplitCnp(std::string_view span_text) {
  return SplitCnp(span_text, UnitStoplist::Default());
}

std::optional<CountSpan> SplitCnp(std::string_view span_text, const UnitStoplist &units) {
  auto match = QuantityParser(units).Find(span_text);
  if (!match) return std::nullopt;
  Lexed lx = Lex(span_text);
  const std::size_t n = lx.tokens.size();

  std::size_t after = 0;
  while (after < n && lx.tokens[after].begin < match->end) ++after;
  std::size_t before = 0;
  while (before < n && lx.tokens[before].end <= match->begin) ++before;

  constexpr std::size_t kMaxPhraseWords = 6;
  std::size_t phrase_begin = 0, phrase_end = 0;
  bool found = false;

  // Following phrase, words joined by glued hyphens ("Indo-European").
  std::size_t k = after;
  std::size_t words = 0;
  while (k < n && words < kMaxPhraseWords) {
    // A participle inside the phrase needs a noun after it: "officially
    // recognized moons", but not "songs recorded in 1965".
    bool word = IsPhraseWord(lx.tokens[k], lx.lower[k], words == 0) ||
                (words > 0 && lx.lower[k].ends_with("ed") &&
                 IsPhraseWord(lx.tokens[k], lx.lower[k], true) && k + 1 < n &&
                 IsPhraseWord(lx.tokens[k + 1], lx.lower[k + 1], false));
    if (word) {
      if (!found) phrase_begin = lx.tokens[k].begin;
      found = true;
      phrase_end = lx.tokens[k].end;
      ++words;
      ++k;
      continue;
    }
    if (found && lx.tokens[k].text == "-" && k + 1 < n && lx.tokens[k].begin == lx.tokens[k - 1].end &&
        lx.tokens[k + 1].begin == lx.tokens[k].end && lx.tokens[k + 1].is_word()) {
      ++k;
      continue;
    }
    break;
  }

  // Otherwise the phrase right before the quantity.
  if (!found && before > 0) {
    std::size_t b = before;
    if (lx.tokens[b - 1].text == ":") --b;  // "Beatles albums: 13"
    words = 0;
    while (b > 0 && words < kMaxPhraseWords) {
      const std::size_t t = b - 1;
      if (!IsPhraseWord(lx.tokens[t], lx.lower[t], false)) break;
      if (!found) phrase_end = lx.tokens[t].end;
      found = true;
      phrase_begin = lx.tokens[t].begin;
      ++words;
      --b;
    }
  }

  CountSpan out;
  out.begin = match->begin;
  out.end = match->end;
  if (found) {
    out.modifier_phrase =
        CollapseWhitespace(span_text.substr(phrase_begin, phrase_end - phrase_begin));
    out.begin = std::min(out.begin, phrase_begin);
    out.end = std::max(out.end, phrase_end);
  }
  out.quantity = std::move(match->quantity);
  return out;
}

}  // namespace countqa
