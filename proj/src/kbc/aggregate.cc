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

#include "kbc/aggregate.h"

namespace kbc {

std::array<double, 3> Aggregate(std::span<const AggregateRow> rows,
                                AggregateMode mode) {
  std::array<double, 3> sums{};
  double total_weight = 0.0;
  for (const AggregateRow &row : rows) {
    double w = mode == AggregateMode::kWeighted ? row.weight : 1.0;
    total_weight += w;
    for (size_t c = 0; c < sums.size(); ++c) sums[c] += w * row.values[c];
  }
  if (total_weight <= 0.0) return {};
  for (double &s : sums) s /= total_weight;
  return sums;
}

}  // namespace kbc
