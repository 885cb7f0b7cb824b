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

#include "kbc/status.h"

#include <spdlog/spdlog.h>

namespace kbc {

void Fail(ErrorCode code, const std::string &message) {
  throw Error(code, message);
}

void Warnings::Add(std::string message) {
  spdlog::warn("{}", message);
  messages_.push_back(std::move(message));
}

void Warn(Warnings *sink, std::string message) {
  if (sink != nullptr) {
    sink->Add(std::move(message));
  } else {
    spdlog::warn("{}", message);
  }
}

std::string Excerpt(std::string_view payload, size_t limit) {
  if (payload.size() <= limit) return std::string(payload);
  return std::string(payload.substr(0, limit)) + "...";
}

}  // namespace kbc
