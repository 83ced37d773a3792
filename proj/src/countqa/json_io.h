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

// Canonical JSON output: keys in lexicographic order, floating-point values
// rounded to six significant digits.

#ifndef COUNTQA_JSON_IO_H_
#define COUNTQA_JSON_IO_H_

#include <string>

#include "json.hpp"

namespace countqa {

double RoundSignificant(double value, int digits = 6);

// Rounds every floating-point value in place, recursively.
void Canonicalize(nlohmann::json &doc);

// Canonicalized dump; indent < 0 gives a single line.
std::string CanonicalDump(nlohmann::json doc, int indent = 2);

// Throws InputError with `what` as context.
nlohmann::json ParseJson(const std::string &text, const std::string &what);
nlohmann::json ReadJsonFile(const std::string &path);
std::string ReadFile(const std::string &path);

}  // namespace countqa

#endif  // COUNTQA_JSON_IO_H_
