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

// Helpers shared by the command-line tools. Everything here sits on top of
// the C API in kbc/kbc.h.

#ifndef KBC_TOOLS_CLI_UTIL_H_
#define KBC_TOOLS_CLI_UTIL_H_

#include <cstdio>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "kbc/kbc.h"

namespace kbc_cli {

enum ExitCode {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitBackend = 3,
  kExitTolerance = 4,
};

inline int ExitCodeFor(kbc_status status) {
  switch (status) {
    case KBC_OK:
      return kExitOk;
    case KBC_ERROR_USAGE:
      return kExitUsage;
    case KBC_ERROR_BACKEND:
    case KBC_ERROR_PROTOCOL:
      return kExitBackend;
    case KBC_ERROR_TOLERANCE:
      return kExitTolerance;
    default:
      return kExitData;
  }
}

// Thrown by Check() so that a command unwinds (freeing its handles) before
// the process exits with the mapped code.
struct CommandFailed {
  int exit_code;
};

inline void Check(kbc_status status, const char *what) {
  if (status == KBC_OK) return;
  std::fprintf(stderr, "error: %s: %s\n", what, kbc_last_error());
  throw CommandFailed{ExitCodeFor(status)};
}

[[noreturn]] inline void UsageError(const std::string &message) {
  std::fprintf(stderr, "error: %s\n", message.c_str());
  throw CommandFailed{kExitUsage};
}

// Owning wrapper for a C handle.
template <typename T, void (*Free)(T)>
class Handle {
 public:
  Handle() = default;
  explicit Handle(T raw) : raw_(raw) {}
  Handle(const Handle &) = delete;
  Handle &operator=(const Handle &) = delete;
  Handle(Handle &&other) noexcept : raw_(std::exchange(other.raw_, nullptr)) {}
  Handle &operator=(Handle &&other) noexcept {
    if (this != &other) {
      reset();
      raw_ = std::exchange(other.raw_, nullptr);
    }
    return *this;
  }
  ~Handle() { reset(); }

  T get() const { return raw_; }
  T *out() {
    reset();
    return &raw_;
  }
  explicit operator bool() const { return raw_ != nullptr; }

  void reset() {
    if (raw_ != nullptr) Free(raw_);
    raw_ = nullptr;
  }

 private:
  T raw_ = nullptr;
};

using Snapshot = Handle<kbc_snapshot, kbc_snapshot_free>;
using Registry = Handle<kbc_registry, kbc_registry_free>;
using Dataset = Handle<kbc_dataset, kbc_dataset_free>;
using Corpus = Handle<kbc_corpus, kbc_corpus_free>;
using Backend = Handle<kbc_backend, kbc_backend_free>;
using Run = Handle<kbc_run, kbc_run_free>;
using Facts = Handle<kbc_facts, kbc_facts_free>;
using Report = Handle<kbc_report, kbc_report_free>;
using Calibration = Handle<kbc_calibration, kbc_calibration_free>;

inline std::string OutPath(const std::string &dir, const char *name) {
  return (std::filesystem::path(dir) / name).string();
}

inline void MakeOutDir(const std::string &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    std::fprintf(stderr, "error: cannot create %s: %s\n", dir.c_str(),
                 ec.message().c_str());
    throw CommandFailed{kExitData};
  }
}

inline void WriteText(const std::string &path, const std::string &text) {
  std::FILE *f = std::fopen(path.c_str(), "wb");
  bool ok = f != nullptr &&
            std::fwrite(text.data(), 1, text.size(), f) == text.size();
  if (f != nullptr) ok = std::fclose(f) == 0 && ok;
  if (!ok) {
    std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
    throw CommandFailed{kExitData};
  }
}

// Loads the registry file when given, otherwise the shipped relations.
inline Registry LoadRegistry(const std::string &path) {
  Registry registry;
  if (path.empty()) {
    Check(kbc_registry_default(registry.out()), "relations");
  } else {
    Check(kbc_registry_load(path.c_str(), registry.out()), path.c_str());
  }
  return registry;
}

inline Snapshot LoadSnapshot(const std::vector<std::string> &paths) {
  Snapshot snapshot;
  if (paths.size() == 1) {
    Check(kbc_snapshot_load(paths[0].c_str(), snapshot.out()),
          paths[0].c_str());
  } else {
    std::vector<const char *> raw;
    for (const auto &p : paths) raw.push_back(p.c_str());
    Check(kbc_snapshot_load_shards(raw.data(), raw.size(), snapshot.out()),
          "snapshot");
  }
  return snapshot;
}

}  // namespace kbc_cli

#endif  // KBC_TOOLS_CLI_UTIL_H_
