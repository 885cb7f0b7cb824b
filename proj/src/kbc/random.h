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

#ifndef KBC_RANDOM_H_
#define KBC_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace kbc {

// Generator for one named stream under a command seed, so that sampling in
// one relation does not shift the draws of another.
inline std::mt19937_64 SeededRng(uint64_t seed, std::string_view stream) {
  uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : stream) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::seed_seq seq{static_cast<uint32_t>(seed),
                    static_cast<uint32_t>(seed >> 32), static_cast<uint32_t>(h),
                    static_cast<uint32_t>(h >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace kbc

#endif  // KBC_RANDOM_H_
