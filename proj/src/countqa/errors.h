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

#ifndef COUNTQA_ERRORS_H_
#define COUNTQA_ERRORS_H_

#include <stdexcept>
#include <string>

namespace countqa {

// Values double as process exit codes.
enum class ErrorKind { kInput = 2, kProvider = 3, kInternal = 4 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Bad files, malformed requests, unusable settings for a query.
class InputError : public Error {
 public:
  explicit InputError(const std::string &what) : Error(ErrorKind::kInput, what) {}
};

// Transport failures, timeouts and protocol violations of a provider.
class ProviderError : public Error {
 public:
  explicit ProviderError(const std::string &what) : Error(ErrorKind::kProvider, what) {}
};

}  // namespace countqa

#endif  // COUNTQA_ERRORS_H_
