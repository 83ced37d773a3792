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

#include "countqa/json_io.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "countqa/errors.h"

namespace countqa {

double RoundSignificant(double value, int digits) {
  if (!std::isfinite(value) || value == 0.0) return value == 0.0 ? 0.0 : value;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*e", digits - 1, value);
  double out = std::strtod(buf, nullptr);
  return out == 0.0 ? 0.0 : out;
}

void Canonicalize(nlohmann::json &doc) {
  if (doc.is_number_float()) {
    double v = doc.get<double>();
    if (!std::isfinite(v)) {
      doc = nullptr;
      return;
    }
    doc = RoundSignificant(v);
  } else if (doc.is_structured()) {
    for (auto &item : doc) Canonicalize(item);
  }
}

std::string CanonicalDump(nlohmann::json doc, int indent) {
  Canonicalize(doc);
  return doc.dump(indent, ' ', false, nlohmann::json::error_handler_t::replace);
}

nlohmann::json ParseJson(const std::string &text, const std::string &what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw InputError(what + ": malformed JSON: " + e.what());
  }
}

std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json ReadJsonFile(const std::string &path) { return ParseJson(ReadFile(path), path); }

}  // namespace countqa
