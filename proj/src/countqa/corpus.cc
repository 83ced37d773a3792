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

#include "countqa/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>

#include "countqa/errors.h"

namespace countqa {

using nlohmann::json;

namespace {

const std::set<std::string> &KnownRecordFields() {
  static const std::set<std::string> kFields = {"id",       "query",      "gold_count",
                                                "gold_instances", "passages", "provenance"};
  return kFields;
}

std::string RequireString(const json &obj, const char *key, const char *what) {
  if (!obj.contains(key) || !obj[key].is_string()) {
    throw InputError(std::string(what) + ": missing string field '" + key + "'");
  }
  return obj[key].get<std::string>();
}

}  // namespace

std::string_view ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kKg: return "kg";
    case Provenance::kFeaturedSnippet: return "featured_snippet";
    case Provenance::kManual: return "manual";
    case Provenance::kUnlabeled: return "unlabeled";
  }
  return "unlabeled";
}

std::optional<Provenance> ParseProvenance(std::string_view name) {
  for (auto p : {Provenance::kKg, Provenance::kFeaturedSnippet, Provenance::kManual,
                 Provenance::kUnlabeled}) {
    if (ProvenanceName(p) == name) return p;
  }
  return std::nullopt;
}

json CountToJson(const Count &c) {
  if (c.is_integer()) return c.num();
  return c.ToDouble();
}

std::optional<Count> CountFromJson(const json &v) {
  if (v.is_number_unsigned()) {
    auto u = v.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(INT64_MAX)) return std::nullopt;
    return Count(static_cast<std::int64_t>(u));
  }
  if (v.is_number_integer()) {
    auto i = v.get<std::int64_t>();
    if (i < 0) return std::nullopt;
    return Count(i);
  }
  if (v.is_number_float()) return Count::FromDouble(v.get<double>());
  return std::nullopt;
}

json QuantityToJson(const Quantity &q) {
  json out = {{"value", CountToJson(q.value)},
              {"modifier", std::string(ModifierName(q.modifier))},
              {"surface", q.surface}};
  if (q.range_bounds) {
    out["bounds"] = json::array({CountToJson(q.range_bounds->first),
                                 CountToJson(q.range_bounds->second)});
  }
  return out;
}

Quantity QuantityFromJson(const json &v) {
  if (v.is_number()) {
    auto c = CountFromJson(v);
    if (!c) throw InputError("count must be a nonnegative number");
    Quantity q;
    q.value = *c;
    q.surface = c->ToString();
    return q;
  }
  if (v.is_string()) {
    auto q = ParseQuantity(v.get<std::string>());
    if (!q) throw InputError("no count in '" + v.get<std::string>() + "'");
    return *q;
  }
  if (!v.is_object() || !v.contains("value")) {
    throw InputError("count must be a number, a string or an object with a value");
  }
  Quantity q;
  auto value = CountFromJson(v["value"]);
  if (!value) throw InputError("count value must be a nonnegative number");
  q.value = *value;
  if (v.contains("modifier")) {
    if (!v["modifier"].is_string()) throw InputError("count modifier must be a string");
    auto m = ParseModifierName(v["modifier"].get<std::string>());
    if (!m) throw InputError("unknown count modifier '" + v["modifier"].get<std::string>() + "'");
    q.modifier = *m;
  }
  if (v.contains("bounds")) {
    const json &b = v["bounds"];
    if (!b.is_array() || b.size() != 2) throw InputError("count bounds must be [lo, hi]");
    auto lo = CountFromJson(b[0]);
    auto hi = CountFromJson(b[1]);
    if (!lo || !hi || *hi < *lo) throw InputError("count bounds must satisfy 0 <= lo <= hi");
    q.range_bounds = std::make_pair(*lo, *hi);
  }
  if ((q.modifier == Modifier::kRange) != q.range_bounds.has_value()) {
    throw InputError("count bounds are required exactly for range counts");
  }
  if (q.range_bounds && Count::Midpoint(q.range_bounds->first, q.range_bounds->second) != q.value) {
    throw InputError("range count value must be the midpoint of its bounds");
  }
  q.surface = v.value("surface", q.value.ToString());
  return q;
}

std::vector<Passage> PassagesFromJson(const json &v) {
  if (!v.is_array()) throw InputError("passages must be an array");
  std::vector<Passage> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const json &p = v[i];
    if (!p.is_object()) throw InputError("passage must be an object");
    Passage passage;
    passage.text = RequireString(p, "text", "passage");
    if (p.contains("rank")) {
      if (!p["rank"].is_number_integer() || p["rank"].get<std::int64_t>() < 1) {
        throw InputError("passage rank must be a positive integer");
      }
      passage.rank = static_cast<std::uint32_t>(p["rank"].get<std::int64_t>());
    } else {
      passage.rank = static_cast<std::uint32_t>(i + 1);
    }
    passage.id = p.contains("id") ? RequireString(p, "id", "passage")
                                  : "p" + std::to_string(passage.rank);
    if (p.contains("url")) passage.url = RequireString(p, "url", "passage");
    out.push_back(std::move(passage));
  }
  std::sort(out.begin(), out.end(),
            [](const Passage &a, const Passage &b) { return a.rank < b.rank; });
  std::set<std::string> ids;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].rank != i + 1) {
      throw InputError("passage ranks must be unique and contiguous from 1 (rank " +
                       std::to_string(out[i].rank) + ")");
    }
    if (!ids.insert(out[i].id).second) throw InputError("duplicate passage id '" + out[i].id + "'");
  }
  return out;
}

json PassagesToJson(std::span<const Passage> passages) {
  json out = json::array();
  for (const Passage &p : passages) {
    json item = {{"id", p.id}, {"rank", p.rank}, {"text", p.text}};
    if (!p.url.empty()) item["url"] = p.url;
    out.push_back(std::move(item));
  }
  return out;
}

QueryRecord RecordFromJson(const json &v) {
  if (!v.is_object()) throw InputError("record must be a JSON object");
  QueryRecord r;
  r.id = RequireString(v, "id", "record");
  r.query = RequireString(v, "query", "record");
  if (v.contains("gold_count") && !v["gold_count"].is_null()) {
    r.gold_count = QuantityFromJson(v["gold_count"]);
  }
  if (v.contains("gold_instances") && !v["gold_instances"].is_null()) {
    const json &g = v["gold_instances"];
    if (!g.is_array() || g.empty()) throw InputError("gold_instances must be a nonempty array");
    std::vector<std::string> gold;
    for (const json &s : g) {
      if (!s.is_string()) throw InputError("gold_instances entries must be strings");
      gold.push_back(s.get<std::string>());
    }
    r.gold_instances = std::move(gold);
  }
  r.passages = PassagesFromJson(v.contains("passages") ? v["passages"] : json::array());
  if (v.contains("provenance")) {
    if (!v["provenance"].is_string()) throw InputError("provenance must be a string");
    auto p = ParseProvenance(v["provenance"].get<std::string>());
    if (!p) throw InputError("unknown provenance '" + v["provenance"].get<std::string>() + "'");
    r.provenance = *p;
  }
  for (const auto &[key, value] : v.items()) {
    if (!KnownRecordFields().count(key)) r.extra[key] = value;
  }
  return r;
}

json RecordToJson(const QueryRecord &r) {
  json out = r.extra.is_object() ? r.extra : json::object();
  out["id"] = r.id;
  out["query"] = r.query;
  if (r.gold_count) out["gold_count"] = QuantityToJson(*r.gold_count);
  if (r.gold_instances) out["gold_instances"] = *r.gold_instances;
  out["passages"] = PassagesToJson(r.passages);
  out["provenance"] = std::string(ProvenanceName(r.provenance));
  return out;
}

std::vector<QueryRecord> LoadCorpus(std::istream &in) {
  std::vector<QueryRecord> out;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json v;
    try {
      v = json::parse(line);
    } catch (const json::exception &e) {
      throw InputError("line " + std::to_string(line_no) + ": malformed JSON: " + e.what());
    }
    if (first && v.is_object() && v.contains("format") && !v.contains("query")) {
      first = false;
      if (v["format"] != kCorpusFormat) {
        throw InputError("line " + std::to_string(line_no) + ": unsupported format " +
                         v["format"].dump());
      }
      continue;
    }
    first = false;
    try {
      QueryRecord r = RecordFromJson(v);
      if (!ids.insert(r.id).second) throw InputError("duplicate record id '" + r.id + "'");
      out.push_back(std::move(r));
    } catch (const InputError &e) {
      throw InputError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<QueryRecord> LoadCorpus(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open dataset: " + path);
  try {
    return LoadCorpus(in);
  } catch (const InputError &e) {
    throw InputError(path + ": " + e.what());
  }
}

void StoreCorpus(std::span<const QueryRecord> records, std::ostream &out) {
  out << json{{"format", kCorpusFormat}}.dump() << "\n";
  for (const QueryRecord &r : records) out << RecordToJson(r).dump() << "\n";
}

void StoreCorpus(std::span<const QueryRecord> records, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write dataset: " + path);
  StoreCorpus(records, out);
}

bool WithinTenPercent(const Count &count, const Count &gold) {
  return WithinRelative(count, gold, 100000);
}

std::vector<SpanLabel> LabelSpans(const QueryRecord &record, const UnitStoplist &units) {
  if (!record.gold_count) throw InputError("record '" + record.id + "' has no gold count");
  const Count &gold = record.gold_count->value;
  QuantityParser parser(units);
  std::vector<SpanLabel> out;
  for (const Passage &p : record.passages) {
    for (const QuantityMatch &m : parser.FindAll(p.text)) {
      SpanLabel label;
      label.span = {p.id, m.begin, m.end};
      label.text = m.quantity.surface;
      label.value = m.quantity.value;
      label.positive = WithinTenPercent(m.quantity.value, gold);
      out.push_back(std::move(label));
    }
  }
  return out;
}

json SpanLabelToJson(const SpanLabel &label) {
  return {{"passage_id", label.span.passage_id},
          {"start", label.span.start},
          {"end", label.span.end},
          {"text", label.text},
          {"value", CountToJson(label.value)},
          {"label", label.positive ? "positive" : "negative"}};
}

std::vector<QueryRecord> FilterMeasurementQueries(std::vector<QueryRecord> records,
                                                  const UnitStoplist &units) {
  std::erase_if(records, [&](const QueryRecord &r) { return units.MentionedIn(r.query); });
  return records;
}

std::pair<std::vector<QueryRecord>, std::vector<QueryRecord>> SplitCorpus(
    std::vector<QueryRecord> records, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction >= 0.0 && test_fraction <= 1.0)) {
    throw InputError("test fraction must lie in [0, 1]");
  }
  // Fisher-Yates with an explicit engine so splits agree across standard
  // libraries.
  std::mt19937_64 rng(seed);
  for (std::size_t i = records.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(records[i - 1], records[j]);
  }
  auto n_test = static_cast<std::size_t>(std::llround(test_fraction * records.size()));
  std::vector<QueryRecord> test(std::make_move_iterator(records.begin()),
                                std::make_move_iterator(records.begin() + n_test));
  std::vector<QueryRecord> train(std::make_move_iterator(records.begin() + n_test),
                                 std::make_move_iterator(records.end()));
  return {std::move(train), std::move(test)};
}

}  // namespace countqa
