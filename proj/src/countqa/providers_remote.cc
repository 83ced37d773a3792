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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "httplib.h"

#include "countqa/errors.h"
#include "countqa/providers.h"

namespace countqa {

using nlohmann::json;

// --- HttpTransport ----------------------------------------------------------

HttpTransport::HttpTransport(HttpOptions options)
    : options_(std::move(options)), in_flight_(std::clamp(options_.max_in_flight, 1, 1024)) {
  std::string_view ep = options_.endpoint;
  constexpr std::string_view kScheme = "http://";
  if (ep.substr(0, kScheme.size()) != kScheme) {
    throw InputError("endpoint must start with http://: " + options_.endpoint);
  }
  ep.remove_prefix(kScheme.size());
  while (!ep.empty() && ep.back() == '/') ep.remove_suffix(1);
  if (ep.find('/') != std::string_view::npos) {
    throw InputError("endpoint must not carry a path: " + options_.endpoint);
  }
  auto colon = ep.rfind(':');
  if (colon == std::string_view::npos) {
    host_ = std::string(ep);
  } else {
    host_ = std::string(ep.substr(0, colon));
    try {
      port_ = std::stoi(std::string(ep.substr(colon + 1)));
    } catch (const std::exception &) {
      throw InputError("bad endpoint port: " + options_.endpoint);
    }
  }
  if (host_.empty() || port_ <= 0 || port_ > 65535) {
    throw InputError("bad endpoint: " + options_.endpoint);
  }
}

json HttpTransport::Post(const std::string &path, const json &body) {
  return Call("POST", path, &body);
}

json HttpTransport::Get(const std::string &path) { return Call("GET", path, nullptr); }

json HttpTransport::Call(const std::string &method, const std::string &path, const json *body) {
  in_flight_.acquire();
  struct Release {
    std::counting_semaphore<1024> &s;
    ~Release() { s.release(); }
  } release{in_flight_};

  httplib::Client client(host_, port_);
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
  auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  httplib::Result res = method == "GET"
                            ? client.Get(path)
                            : client.Post(path, body->dump(), "application/json");
  if (!res) {
    throw ProviderError(method + " " + options_.endpoint + path + ": " +
                        httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw ProviderError(method + " " + path + ": HTTP " + std::to_string(res->status) + " " +
                        res->body.substr(0, 200));
  }
  try {
    return json::parse(res->body);
  } catch (const json::exception &e) {
    throw ProviderError(method + " " + path + ": invalid JSON response: " + e.what());
  }
}

// --- CachingTransport -------------------------------------------------------

CachingTransport::CachingTransport(std::unique_ptr<Transport> inner, std::string dir,
                                   std::string endpoint)
    : inner_(std::move(inner)), dir_(std::move(dir)), endpoint_(std::move(endpoint)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw InputError("cannot create cache directory " + dir_ + ": " + ec.message());
}

std::string CachingTransport::CachePath(const std::string &path, const json &body) const {
  std::string op = path;
  for (char &c : op) {
    if (c == '/') c = '_';
  }
  while (!op.empty() && op.front() == '_') op.erase(0, 1);
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(
                    Fnv1a64(endpoint_ + "\n" + path + "\n" + body.dump())));
  return (std::filesystem::path(dir_) / (op + "-" + hex + ".json")).string();
}

json CachingTransport::Post(const std::string &path, const json &body) {
  const std::string file = CachePath(path, body);
  {
    std::lock_guard<std::mutex> lock(mu_);
    std::ifstream in(file);
    if (in) {
      try {
        json entry = json::parse(in);
        if (entry.at("request") == body && entry.at("operation") == path) {
          return entry.at("response");
        }
        spdlog::warn("cache entry {} does not match its request; refetching", file);
      } catch (const json::exception &e) {
        spdlog::warn("unreadable cache entry {}: {}", file, e.what());
      }
    }
  }
  if (!inner_) throw ProviderError("cache miss for " + path + " and no service configured");
  json response = inner_->Post(path, body);
  json entry = {{"endpoint", endpoint_}, {"operation", path}, {"request", body},
                {"response", response}};
  std::lock_guard<std::mutex> lock(mu_);
  std::string tmp = file + ".tmp";
  {
    std::ofstream out(tmp);
    out << entry.dump() << "\n";
  }
  std::error_code ec;
  std::filesystem::rename(tmp, file, ec);
  if (ec) spdlog::warn("cannot write cache entry {}: {}", file, ec.message());
  return response;
}

json CachingTransport::Get(const std::string &path) {
  if (!inner_) return json{{"status", "ok"}, {"models", json::object()}, {"cached", true}};
  return inner_->Get(path);
}

// --- RemoteProvider ---------------------------------------------------------

namespace {

const json &Field(const json &obj, const char *key, const char *op) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ProviderError(std::string(op) + ": response lacks '" + key + "'");
  }
  return obj.at(key);
}

const json &ArrayField(const json &obj, const char *key, const char *op, std::size_t expected) {
  const json &arr = Field(obj, key, op);
  if (!arr.is_array() || arr.size() != expected) {
    throw ProviderError(std::string(op) + ": '" + key + "' must be an array of " +
                        std::to_string(expected));
  }
  return arr;
}

double Number(const json &v, const char *op) {
  if (!v.is_number()) throw ProviderError(std::string(op) + ": expected a number");
  return v.get<double>();
}

}  // namespace

RemoteProvider::RemoteProvider(std::unique_ptr<Transport> transport)
    : transport_(std::move(transport)) {}

json RemoteProvider::Health() {
  json h = transport_->Get("/v1/health");
  if (!h.is_object() || h.value("status", "") != "ok") {
    throw ProviderError("inference service at " + transport_->endpoint() + " is not healthy");
  }
  return h;
}

std::vector<AnswerSpan> RemoteProvider::PredictSpans(std::string_view query,
                                                     std::span<const Passage> passages,
                                                     SpanMode mode) {
  std::vector<AnswerSpan> out;
  for (std::size_t at = 0; at < passages.size(); at += kBatchSize) {
    auto batch = passages.subspan(at, std::min(kBatchSize, passages.size() - at));
    json req = {{"query", std::string(query)}, {"mode", std::string(SpanModeName(mode))}};
    json items = json::array();
    for (const Passage &p : batch) items.push_back({{"id", p.id}, {"text", p.text}});
    req["passages"] = std::move(items);
    json res = transport_->Post("/v1/spans", req);
    const json &spans = Field(res, "spans", "spans");
    if (!spans.is_array()) throw ProviderError("spans: 'spans' must be an array");
    for (const json &s : spans) {
      try {
        AnswerSpan span;
        span.passage_id = s.at("passage_id").get<std::string>();
        auto start = s.at("start").get<std::int64_t>();
        auto end = s.at("end").get<std::int64_t>();
        if (start < 0 || end < 0) throw ProviderError("spans: negative offset");
        span.start = static_cast<std::size_t>(start);
        span.end = static_cast<std::size_t>(end);
        span.text = s.value("text", "");
        span.confidence = Number(s.at("confidence"), "spans");
        out.push_back(std::move(span));
      } catch (const json::exception &e) {
        throw ProviderError(std::string("spans: malformed span: ") + e.what());
      }
    }
  }
  return out;
}

std::vector<double> RemoteProvider::Similarities(std::span<const TextPair> pairs) {
  std::vector<std::string> texts;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto &p : pairs) {
    for (const std::string *t : {&p.first, &p.second}) {
      if (index.emplace(*t, texts.size()).second) texts.push_back(*t);
    }
  }
  std::vector<std::vector<double>> vectors;
  for (std::size_t at = 0; at < texts.size(); at += kBatchSize) {
    std::size_t n = std::min(kBatchSize, texts.size() - at);
    json req = {{"texts", json(std::vector<std::string>(texts.begin() + at,
                                                        texts.begin() + at + n))}};
    json res = transport_->Post("/v1/embed", req);
    const json &vs = ArrayField(res, "vectors", "embed", n);
    for (const json &v : vs) {
      if (!v.is_array()) throw ProviderError("embed: vector must be an array");
      std::vector<double> vec;
      for (const json &x : v) {
        double d = Number(x, "embed");
        if (!std::isfinite(d)) throw ProviderError("embed: non-finite component");
        vec.push_back(d);
      }
      if (!vectors.empty() && vec.size() != vectors.front().size()) {
        throw ProviderError("embed: vectors of unequal length");
      }
      vectors.push_back(std::move(vec));
    }
  }
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto &p : pairs) {
    if (p.first == p.second) {
      out.push_back(1.0);
      continue;
    }
    const auto &a = vectors[index.at(p.first)];
    const auto &b = vectors[index.at(p.second)];
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      dot += a[i] * b[i];
      na += a[i] * a[i];
      nb += b[i] * b[i];
    }
    double cosine = (na == 0 || nb == 0) ? 0.0 : dot / std::sqrt(na * nb);
    out.push_back(ClampReported(cosine, -1.0, 1.0, "similarity"));
  }
  return out;
}

std::vector<std::vector<Mention>> RemoteProvider::Ner(std::span<const std::string> texts) {
  std::vector<std::vector<Mention>> out;
  for (std::size_t at = 0; at < texts.size(); at += kBatchSize) {
    std::size_t n = std::min(kBatchSize, texts.size() - at);
    json req = {{"texts", json(std::vector<std::string>(texts.begin() + at,
                                                        texts.begin() + at + n))}};
    json res = transport_->Post("/v1/ner", req);
    const json &all = ArrayField(res, "mentions", "ner", n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::string &text = texts[at + i];
      if (!all[i].is_array()) throw ProviderError("ner: mentions entry must be an array");
      std::vector<Mention> ms;
      for (const json &m : all[i]) {
        try {
          Mention mention;
          auto start = m.at("start").get<std::int64_t>();
          auto end = m.at("end").get<std::int64_t>();
          mention.type = m.value("type", "");
          if (start < 0 || end <= start || static_cast<std::size_t>(end) > text.size()) {
            spdlog::warn("ner: mention [{}, {}) outside text dropped", start, end);
            continue;
          }
          mention.start = static_cast<std::size_t>(start);
          mention.end = static_cast<std::size_t>(end);
          mention.text = text.substr(mention.start, mention.end - mention.start);
          ms.push_back(std::move(mention));
        } catch (const json::exception &e) {
          throw ProviderError(std::string("ner: malformed mention: ") + e.what());
        }
      }
      out.push_back(std::move(ms));
    }
  }
  return out;
}

std::vector<double> RemoteProvider::Entail(std::span<const TextPair> pairs) {
  std::vector<double> out;
  for (const auto &p : pairs) {
    if (WordTokens(p.second).empty()) throw InputError("entailment hypothesis has no tokens");
  }
  for (std::size_t at = 0; at < pairs.size(); at += kBatchSize) {
    std::size_t n = std::min(kBatchSize, pairs.size() - at);
    json items = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      items.push_back({{"premise", pairs[at + i].first}, {"hypothesis", pairs[at + i].second}});
    }
    json res = transport_->Post("/v1/entail", json{{"pairs", items}});
    const json &probs = ArrayField(res, "probabilities", "entail", n);
    for (const json &p : probs) {
      out.push_back(ClampReported(Number(p, "entail"), 0.0, 1.0, "entailment"));
    }
  }
  return out;
}

}  // namespace countqa
