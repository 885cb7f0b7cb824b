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

#ifndef KBC_IO_H_
#define KBC_IO_H_

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "kbc/eval.h"
#include "kbc/malt.h"
#include "kbc/pipeline.h"

namespace kbc {

// Line-delimited JSON files. Readers report the line number on error.

nlohmann::json ToJson(const MaltRecord &record);
MaltRecord MaltRecordFromJson(const nlohmann::json &obj);
void WriteDataset(const std::vector<MaltRecord> &records, std::ostream &out);
std::vector<MaltRecord> ReadDataset(std::istream &in,
                                    std::string_view source = "<stream>");
void WriteDatasetFile(const std::vector<MaltRecord> &records,
                      const std::string &path);
std::vector<MaltRecord> ReadDatasetFile(const std::string &path);

nlohmann::json ToJson(const CorroboratedFact &fact);
CorroboratedFact FactFromJson(const nlohmann::json &obj);
void WriteFacts(const std::vector<CorroboratedFact> &facts, std::ostream &out);
std::vector<CorroboratedFact> ReadFacts(std::istream &in,
                                        std::string_view source = "<stream>");
void WriteFactsFile(const std::vector<CorroboratedFact> &facts,
                    const std::string &path);
std::vector<CorroboratedFact> ReadFactsFile(const std::string &path);

nlohmann::json ToJson(const StatsTable &table);
nlohmann::json ToJson(const EvalReport &report);
nlohmann::json ToJson(const CalibrationResult &result);
CalibrationResult CalibrationFromJson(const nlohmann::json &obj);

// Replay rows: JSON array of {"pid", "precision", "recall", "f1",
// optional "n_gold"} with fractional metrics.
std::vector<RelationMetrics> ReadMetricRowsFile(const std::string &path);

// Writes `text` to `path`, replacing the file.
void WriteTextFile(const std::string &path, const std::string &text);
nlohmann::json ReadJsonFile(const std::string &path);

}  // namespace kbc

#endif  // KBC_IO_H_
