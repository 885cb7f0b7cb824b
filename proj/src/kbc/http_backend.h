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

#ifndef KBC_HTTP_BACKEND_H_
#define KBC_HTTP_BACKEND_H_

#include <atomic>
#include <chrono>
#include <memory>
#include <semaphore>
#include <string>
#include <string_view>

#include "json.hpp"
#include "kbc/backend.h"

namespace httplib {
class Server;
}

namespace kbc {

// Wire format (JSON over HTTP):
//   POST /v1/qa  {"question", "context", "k"}
//             -> {"answers": [{"text", "score", "start", "end"}]}
//   POST /v1/ed  {"prompt", "context", "k"} -> {"entities": [{"name",
//   "score"}]} GET  /v1/health -> {"status": "ok", "models": {...}}
// Span offsets on the wire count Unicode code points.

struct HttpBackendOptions {
  std::string base_url;  // e.g. "http://127.0.0.1:8080"
  size_t max_in_flight = 8;
  int retries = 3;
  std::chrono::milliseconds initial_backoff{100};
  std::chrono::seconds timeout{120};
};

class HttpBackend : public QaBackend, public EdBackend {
 public:
  explicit HttpBackend(HttpBackendOptions options);
  ~HttpBackend() override;

  std::vector<SpanAnswer> Extract(const QaRequest &request) override;
  std::vector<EntityGuess> Generate(const EdRequest &request) override;

  // GET /v1/health. Throws a backend error unless the status is "ok".
  nlohmann::json Health();

  const HttpBackendOptions &options() const { return options_; }

 private:
  // POSTs `body`, retrying transport failures and 5xx responses with
  // exponential backoff. Returns the parsed response object.
  nlohmann::json Call(const std::string &path, const nlohmann::json &body);

  HttpBackendOptions options_;
  std::counting_semaphore<1024> in_flight_;
  std::atomic<uint64_t> next_request_id_{1};
};

// Registers /v1/qa, /v1/ed and /v1/health on `server`, answering through
// the given backends. The backends must outlive the server.
void RegisterBackendRoutes(httplib::Server &server, QaBackend &qa,
                           EdBackend &ed, nlohmann::json models);

// UTF-8 offset conversions used at the wire boundary.
size_t CodePointToByteOffset(std::string_view text, size_t code_points);
size_t ByteToCodePointOffset(std::string_view text, size_t bytes);

}  // namespace kbc

#endif  // KBC_HTTP_BACKEND_H_
