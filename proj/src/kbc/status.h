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

#ifndef KBC_STATUS_H_
#define KBC_STATUS_H_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kbc {

// Error categories. Numeric values line up with the CLI exit codes.
enum class ErrorCode {
  kUsage = 1,
  kData = 2,
  kBackend = 3,  // transport failure, retryable
  kTolerance = 4,
  kProtocol = 5,  // backend answered, but the payload is malformed
  kInternal = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }
  bool retryable() const { return code_ == ErrorCode::kBackend; }

 private:
  ErrorCode code_;
};

[[noreturn]] void Fail(ErrorCode code, const std::string &message);

// Collects non-fatal diagnostics. Every message is also logged.
class Warnings {
 public:
  void Add(std::string message);
  const std::vector<std::string> &messages() const { return messages_; }
  bool empty() const { return messages_.empty(); }

 private:
  std::vector<std::string> messages_;
};

// Logs a warning and records it in `sink` when one is supplied.
void Warn(Warnings *sink, std::string message);

// First `limit` bytes of a payload, for error messages.
std::string Excerpt(std::string_view payload, size_t limit = 200);

}  // namespace kbc

#endif  // KBC_STATUS_H_
