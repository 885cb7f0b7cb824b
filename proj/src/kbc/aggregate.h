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

#ifndef KBC_AGGREGATE_H_
#define KBC_AGGREGATE_H_

#include <array>
#include <span>

namespace kbc {

enum class AggregateMode { kUnweighted, kWeighted };

// One table row for aggregation: a weight (gold triples, dataset triples)
// and three metric columns.
struct AggregateRow {
  double weight = 0.0;
  std::array<double, 3> values{};
};

// Unweighted: arithmetic mean of each column. Weighted: weight-proportional
// mean. Empty input, or zero total weight, yields zeros.
std::array<double, 3> Aggregate(std::span<const AggregateRow> rows,
                                AggregateMode mode);

}  // namespace kbc

#endif  // KBC_AGGREGATE_H_
