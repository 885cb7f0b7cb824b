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

#include "kbc/io.h"

#include <fmt/format.h>

#include <fstream>

namespace kbc {

using json = nlohmann::json;

namespace {

std::ifstream OpenIn(const std::string &path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kData, fmt::format("cannot open '{}'", path));
  return in;
}

std::ofstream OpenOut(const std::string &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kData, fmt::format("cannot write '{}'", path));
  return out;
}

template <typename T, typename Parse>
std::vector<T> ReadLines(std::istream &in, std::string_view source,
                         Parse parse) {
  std::vector<T> out;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse(json::parse(line)));
    } catch (const json::exception &e) {
      Fail(ErrorCode::kData, fmt::format("{}:{}: malformed record: {}", source,
                                         line_number, e.what()));
    } catch (const Error &e) {
      Fail(e.code(), fmt::format("{}:{}: {}", source, line_number, e.what()));
    }
  }
  return out;
}

}  // namespace

json ToJson(const MaltRecord &record) {
  json objects = json::array();
  for (const GoldObject &gold : record.gold_objects) {
    objects.push_back(json{{"id", gold.id.str()},
                           {"label", gold.label},
                           {"aliases", gold.aliases}});
  }
  return json{{"subject", record.subject.str()},
              {"subject_label", record.subject_label},
              {"pid", record.pid},
              {"gold_objects", objects},
              {"flags",
               {{"multi_token", record.flags.multi_token},
                {"ambiguous", record.flags.ambiguous},
                {"long_tail", record.flags.long_tail}}}};
}

MaltRecord MaltRecordFromJson(const json &obj) {
  MaltRecord record;
  record.subject = EntityId(obj.at("subject").get<std::string>());
  record.subject_label = obj.value("subject_label", "");
  record.pid = obj.at("pid").get<std::string>();
  for (const json &gold : obj.at("gold_objects")) {
    GoldObject g;
    g.id = EntityId(gold.at("id").get<std::string>());
    g.label = gold.at("label").get<std::string>();
    if (gold.contains("aliases")) {
      g.aliases = gold["aliases"].get<std::set<std::string>>();
    }
    record.gold_objects.push_back(std::move(g));
  }
  if (record.gold_objects.empty()) {
    Fail(ErrorCode::kData, fmt::format("record ({}, {}) has no gold objects",
                                       record.subject.str(), record.pid));
  }
  if (obj.contains("flags")) {
    const json &flags = obj["flags"];
    record.flags.multi_token = flags.value("multi_token", false);
    record.flags.ambiguous = flags.value("ambiguous", false);
    record.flags.long_tail = flags.value("long_tail", false);
  }
  return record;
}

void WriteDataset(const std::vector<MaltRecord> &records, std::ostream &out) {
  for (const MaltRecord &record : records) out << ToJson(record).dump() << '\n';
}

std::vector<MaltRecord> ReadDataset(std::istream &in, std::string_view source) {
  return ReadLines<MaltRecord>(in, source, MaltRecordFromJson);
}

void WriteDatasetFile(const std::vector<MaltRecord> &records,
                      const std::string &path) {
  std::ofstream out = OpenOut(path);
  WriteDataset(records, out);
}

std::vector<MaltRecord> ReadDatasetFile(const std::string &path) {
  std::ifstream in = OpenIn(path);
  return ReadDataset(in, path);
}

json ToJson(const CorroboratedFact &fact) {
  return json{{"subject", fact.subject.str()},
              {"subject_label", fact.subject_label},
              {"pid", fact.pid},
              {"object", fact.object.str()},
              {"object_label", fact.object_label},
              {"surface", fact.surface},
              {"gen_score", fact.gen_score},
              {"ed_score", fact.ed_score},
              {"fused_score", fact.fused_score},
              {"evidence",
               {{"index", fact.evidence_index}, {"text", fact.evidence_text}}}};
}

CorroboratedFact FactFromJson(const json &obj) {
  CorroboratedFact fact;
  fact.subject = EntityId(obj.at("subject").get<std::string>());
  fact.subject_label = obj.value("subject_label", "");
  fact.pid = obj.at("pid").get<std::string>();
  fact.object = EntityId(obj.at("object").get<std::string>());
  fact.object_label = obj.value("object_label", "");
  fact.surface = obj.at("surface").get<std::string>();
  fact.gen_score = obj.at("gen_score").get<double>();
  fact.ed_score = obj.at("ed_score").get<double>();
  fact.fused_score = obj.at("fused_score").get<double>();
  if (obj.contains("evidence")) {
    fact.evidence_index = obj["evidence"].value("index", size_t{0});
    fact.evidence_text = obj["evidence"].value("text", "");
  }
  return fact;
}

void WriteFacts(const std::vector<CorroboratedFact> &facts, std::ostream &out) {
  for (const CorroboratedFact &fact : facts) out << ToJson(fact).dump() << '\n';
}

std::vector<CorroboratedFact> ReadFacts(std::istream &in,
                                        std::string_view source) {
  return ReadLines<CorroboratedFact>(in, source, FactFromJson);
}

void WriteFactsFile(const std::vector<CorroboratedFact> &facts,
                    const std::string &path) {
  std::ofstream out = OpenOut(path);
  WriteFacts(facts, out);
}

std::vector<CorroboratedFact> ReadFactsFile(const std::string &path) {
  std::ifstream in = OpenIn(path);
  return ReadFacts(in, path);
}

json ToJson(const StatsTable &table) {
  auto row_json = [](const StatsRow &row) {
    return json{{"pid", row.pid},
                {"relation", row.relation},
                {"subject_type", row.subject_type},
                {"triples", row.triples},
                {"multi_token_pct", row.multi_token_pct},
                {"ambiguous_pct", row.ambiguous_pct},
                {"long_tail_pct", row.long_tail_pct}};
  };
  json rows = json::array();
  for (const StatsRow &row : table.rows) rows.push_back(row_json(row));
  return json{{"relations", rows},
              {"aggregate_triple_weighted", row_json(table.aggregate)}};
}

json ToJson(const EvalReport &report) {
  json rows = json::array();
  for (const RelationMetrics &m : report.rows) {
    rows.push_back(json{{"pid", m.pid},
                        {"precision", m.precision},
                        {"recall", m.recall},
                        {"f1", m.f1},
                        {"tp", m.tp},
                        {"fp", m.fp},
                        {"fn", m.fn},
                        {"n_predictions", m.n_predictions},
                        {"n_gold", m.n_gold}});
  }
  auto triple = [](const std::array<double, 3> &v) {
    return json{{"precision", v[0]}, {"recall", v[1]}, {"f1", v[2]}};
  };
  json out{{"relations", rows},
           {"aggregate_unweighted", triple(report.unweighted)},
           {"aggregate_weighted", triple(report.weighted)}};
  out["alpha"] = report.alpha ? json(*report.alpha) : json(nullptr);
  return out;
}

json ToJson(const CalibrationResult &result) {
  json curve = json::array();
  for (const CurvePoint &p : result.curve) {
    curve.push_back(json{{"alpha", p.alpha},
                         {"precision", p.precision},
                         {"recall", p.recall},
                         {"f1", p.f1}});
  }
  return json{
      {"alpha", result.alpha}, {"best_f1", result.best_f1}, {"curve", curve}};
}

CalibrationResult CalibrationFromJson(const json &obj) {
  CalibrationResult result;
  try {
    result.alpha = obj.at("alpha").get<double>();
    result.best_f1 = obj.value("best_f1", 0.0);
    if (obj.contains("curve")) {
      for (const json &p : obj["curve"]) {
        result.curve.push_back(CurvePoint{
            p.at("alpha").get<double>(), p.at("precision").get<double>(),
            p.at("recall").get<double>(), p.at("f1").get<double>()});
      }
    }
  } catch (const json::exception &e) {
    Fail(ErrorCode::kData, fmt::format("malformed calibration: {}", e.what()));
  }
  return result;
}

std::vector<RelationMetrics> ReadMetricRowsFile(const std::string &path) {
  json doc = ReadJsonFile(path);
  if (!doc.is_array() || doc.empty()) {
    Fail(ErrorCode::kData,
         fmt::format("{}: expected a non-empty JSON array of rows", path));
  }
  std::vector<RelationMetrics> rows;
  try {
    for (const json &item : doc) {
      RelationMetrics m;
      m.pid = item.at("pid").get<std::string>();
      m.precision = item.at("precision").get<double>();
      m.recall = item.at("recall").get<double>();
      m.f1 = item.at("f1").get<double>();
      m.n_gold = item.value("n_gold", size_t{0});
      rows.push_back(std::move(m));
    }
  } catch (const json::exception &e) {
    Fail(ErrorCode::kData, fmt::format("{}: {}", path, e.what()));
  }
  return rows;
}

void WriteTextFile(const std::string &path, const std::string &text) {
  std::ofstream out = OpenOut(path);
  out << text;
}

json ReadJsonFile(const std::string &path) {
  std::ifstream in = OpenIn(path);
  try {
    return json::parse(in);
  } catch (const json::parse_error &e) {
    Fail(ErrorCode::kData, fmt::format("{}: {}", path, e.what()));
  }
}

}  // namespace kbc
