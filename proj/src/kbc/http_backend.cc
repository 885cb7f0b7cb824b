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

#include "kbc/http_backend.h"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <thread>

#include "httplib.h"
#include "kbc/status.h"

namespace kbc {

using json = nlohmann::json;

size_t CodePointToByteOffset(std::string_view text, size_t code_points) {
  size_t seen = 0;
  for (size_t i = 0; i < text.size(); ++i) {
    if ((static_cast<unsigned char>(text[i]) & 0xC0) == 0x80) continue;
    if (seen == code_points) return i;
    ++seen;
  }
  if (seen == code_points) return text.size();
  return std::string_view::npos;
}

size_t ByteToCodePointOffset(std::string_view text, size_t bytes) {
  size_t count = 0;
  for (size_t i = 0; i < std::min(bytes, text.size()); ++i) {
    if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) ++count;
  }
  return count;
}

namespace {

// RAII slot in the in-flight limiter.
class Slot {
 public:
  explicit Slot(std::counting_semaphore<1024> &sem) : sem_(sem) {
    sem_.acquire();
  }
  ~Slot() { sem_.release(); }
  Slot(const Slot &) = delete;
  Slot &operator=(const Slot &) = delete;

 private:
  std::counting_semaphore<1024> &sem_;
};

[[noreturn]] void ProtocolError(std::string_view what, std::string_view body) {
  Fail(ErrorCode::kProtocol,
       fmt::format("{}; payload: {}", what, Excerpt(body, 200)));
}

}  // namespace

HttpBackend::HttpBackend(HttpBackendOptions options)
    : options_(std::move(options)),
      in_flight_(static_cast<ptrdiff_t>(
          std::clamp<size_t>(options_.max_in_flight, 1, 1024))) {
  if (options_.base_url.empty()) {
    Fail(ErrorCode::kUsage, "backend URL is empty");
  }
  while (!options_.base_url.empty() && options_.base_url.back() == '/') {
    options_.base_url.pop_back();
  }
}

HttpBackend::~HttpBackend() = default;

json HttpBackend::Call(const std::string &path, const json &body) {
  Slot slot(in_flight_);
  const std::string payload = body.dump();
  const std::string request_id = std::to_string(next_request_id_++);
  std::string last_error;
  auto backoff = options_.initial_backoff;
  for (int attempt = 0; attempt <= options_.retries; ++attempt) {
    if (attempt > 0) {
      spdlog::debug("retrying {} (attempt {}): {}", path, attempt, last_error);
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Client client(options_.base_url);
    client.set_connection_timeout(options_.timeout);
    client.set_read_timeout(options_.timeout);
    client.set_write_timeout(options_.timeout);
    httplib::Headers headers{{"X-Request-Id", request_id}};
    httplib::Result result =
        client.Post(path, headers, payload, "application/json");
    if (!result) {
      last_error = httplib::to_string(result.error());
      continue;
    }
    if (result->status >= 500) {
      last_error = fmt::format("HTTP {}", result->status);
      continue;
    }
    if (result->status != 200) {
      ProtocolError(fmt::format("{} returned HTTP {}", path, result->status),
                    result->body);
    }
    if (result->has_header("X-Request-Id") &&
        result->get_header_value("X-Request-Id") != request_id) {
      ProtocolError(
          fmt::format("{}: response for request {} carries id {}", path,
                      request_id, result->get_header_value("X-Request-Id")),
          result->body);
    }
    json response;
    try {
      response = json::parse(result->body);
    } catch (const json::parse_error &) {
      ProtocolError(fmt::format("{}: response is not JSON", path),
                    result->body);
    }
    if (!response.is_object()) {
      ProtocolError(fmt::format("{}: response is not an object", path),
                    result->body);
    }
    return response;
  }
  Fail(ErrorCode::kBackend,
       fmt::format("{}{} failed after {} retries: {}", options_.base_url, path,
                   options_.retries, last_error));
}

std::vector<SpanAnswer> HttpBackend::Extract(const QaRequest &request) {
  json response = Call("/v1/qa", json{{"question", request.question},
                                      {"context", request.context},
                                      {"k", request.k}});
  const std::string body = response.dump();
  auto answers = response.find("answers");
  if (answers == response.end() || !answers->is_array()) {
    ProtocolError("/v1/qa: missing 'answers' array", body);
  }
  std::vector<SpanAnswer> out;
  for (const json &item : *answers) {
    if (!item.is_object() || !item.contains("text") ||
        !item["text"].is_string() || !item.contains("score") ||
        !item["score"].is_number() || !item.contains("start") ||
        !item["start"].is_number_unsigned() || !item.contains("end") ||
        !item["end"].is_number_unsigned()) {
      ProtocolError("/v1/qa: malformed answer", item.dump());
    }
    size_t start =
        CodePointToByteOffset(request.context, item["start"].get<size_t>());
    size_t end =
        CodePointToByteOffset(request.context, item["end"].get<size_t>());
    if (start == std::string_view::npos || end == std::string_view::npos) {
      ProtocolError("/v1/qa: span offsets outside the context", item.dump());
    }
    out.push_back(SpanAnswer{item["text"].get<std::string>(),
                             item["score"].get<double>(), start, end});
  }
  return out;
}

std::vector<EntityGuess> HttpBackend::Generate(const EdRequest &request) {
  json response = Call("/v1/ed", json{{"prompt", request.prompt},
                                      {"context", request.context},
                                      {"k", request.k}});
  auto entities = response.find("entities");
  if (entities == response.end() || !entities->is_array()) {
    ProtocolError("/v1/ed: missing 'entities' array", response.dump());
  }
  std::vector<EntityGuess> out;
  for (const json &item : *entities) {
    if (!item.is_object() || !item.contains("name") ||
        !item["name"].is_string() || !item.contains("score") ||
        !item["score"].is_number()) {
      ProtocolError("/v1/ed: malformed entity", item.dump());
    }
    out.push_back(EntityGuess{item["name"].get<std::string>(),
                              item["score"].get<double>()});
  }
  return out;
}

json HttpBackend::Health() {
  std::string last_error;
  auto backoff = options_.initial_backoff;
  for (int attempt = 0; attempt <= options_.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Client client(options_.base_url);
    client.set_connection_timeout(options_.timeout);
    client.set_read_timeout(options_.timeout);
    httplib::Result result = client.Get("/v1/health");
    if (!result) {
      last_error = httplib::to_string(result.error());
      continue;
    }
    json health;
    try {
      health = json::parse(result->body);
    } catch (const json::parse_error &) {
      ProtocolError("/v1/health: response is not JSON", result->body);
    }
    if (result->status != 200 || !health.is_object() ||
        health.value("status", "") != "ok") {
      Fail(ErrorCode::kBackend,
           fmt::format("backend at {} is not healthy: {}", options_.base_url,
                       Excerpt(result->body, 200)));
    }
    return health;
  }
  Fail(ErrorCode::kBackend, fmt::format("backend at {} unreachable: {}",
                                        options_.base_url, last_error));
}

void RegisterBackendRoutes(httplib::Server &server, QaBackend &qa,
                           EdBackend &ed, json models) {
  auto reply = [](httplib::Response &res, int status, const json &body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  };
  auto echo_id = [](const httplib::Request &req, httplib::Response &res) {
    if (req.has_header("X-Request-Id")) {
      res.set_header("X-Request-Id", req.get_header_value("X-Request-Id"));
    }
  };
  // Maps a failure inside a handler to an HTTP status.
  auto guarded = [reply](httplib::Response &res, auto &&handler) {
    try {
      handler();
    } catch (const json::exception &e) {
      reply(res, 400, json{{"error", e.what()}});
    } catch (const Error &e) {
      reply(res, e.code() == ErrorCode::kUsage ? 400 : 500,
            json{{"error", e.what()}});
    }
  };

  server.Post(
      "/v1/qa", [&qa, reply, echo_id, guarded](const httplib::Request &req,
                                               httplib::Response &res) {
        echo_id(req, res);
        guarded(res, [&] {
          json body = json::parse(req.body);
          QaRequest request{body.at("question").get<std::string>(),
                            body.at("context").get<std::string>(),
                            body.at("k").get<size_t>()};
          json answers = json::array();
          for (const SpanAnswer &a : QaExtract(qa, request)) {
            answers.push_back(json{
                {"text", a.text},
                {"score", a.score},
                {"start", ByteToCodePointOffset(request.context, a.char_start)},
                {"end", ByteToCodePointOffset(request.context, a.char_end)}});
          }
          reply(res, 200, json{{"answers", answers}});
        });
      });

  server.Post(
      "/v1/ed", [&ed, reply, echo_id, guarded](const httplib::Request &req,
                                               httplib::Response &res) {
        echo_id(req, res);
        guarded(res, [&] {
          json body = json::parse(req.body);
          EdRequest request{body.at("prompt").get<std::string>(),
                            body.at("context").get<std::string>(),
                            body.at("k").get<size_t>()};
          json entities = json::array();
          for (const EntityGuess &g : EdGenerate(ed, request)) {
            entities.push_back(json{{"name", g.name}, {"score", g.score}});
          }
          reply(res, 200, json{{"entities", entities}});
        });
      });

  server.Get("/v1/health",
             [reply, models](const httplib::Request &, httplib::Response &res) {
               reply(res, 200, json{{"status", "ok"}, {"models", models}});
             });
}

}  // namespace kbc
