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

// malt: builds the benchmark dataset from a knowledge-base snapshot.
//
//   malt build --snapshot kb.jsonl --relations all --sample 200 --seed 7
//       --out data/

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli_util.h"
#include "json.hpp"

namespace {

using namespace kbc_cli;

struct BuildConfig {
  std::vector<std::string> snapshots;
  std::string relations = "all";
  std::string registry;
  std::string sample = "all";
  uint64_t seed = 0;
  double validation_fraction = 0.2;
  std::string out;
};

size_t ParseSample(const std::string &text) {
  if (text == "all") return 0;
  size_t pos = 0;
  unsigned long long n = 0;
  try {
    n = std::stoull(text, &pos);
  } catch (const std::exception &) {
    pos = 0;
  }
  if (pos != text.size() || n == 0 || text[0] == '-') {
    UsageError("--sample must be a positive integer or \"all\"");
  }
  return static_cast<size_t>(n);
}

int Build(const BuildConfig &config) {
  size_t sample = ParseSample(config.sample);
  if (!(config.validation_fraction > 0.0 && config.validation_fraction < 1.0)) {
    UsageError("--validation-fraction must be in (0, 1)");
  }
  Registry registry = LoadRegistry(config.registry);
  if (config.relations != "all") {
    Registry selected;
    Check(kbc_registry_select(registry.get(), config.relations.c_str(),
                              selected.out()),
          "--relations");
    registry = std::move(selected);
  }
  Snapshot snapshot = LoadSnapshot(config.snapshots);

  Dataset dataset;
  Check(kbc_dataset_build(snapshot.get(), registry.get(), sample, config.seed,
                          dataset.out()),
        "build");
  Dataset evaluation, validation;
  Check(kbc_dataset_split(dataset.get(), config.validation_fraction,
                          config.seed, evaluation.out(), validation.out()),
        "split");

  MakeOutDir(config.out);
  Check(kbc_dataset_save(dataset.get(),
                         OutPath(config.out, "dataset.jsonl").c_str()),
        "dataset.jsonl");
  Check(kbc_dataset_save(evaluation.get(),
                         OutPath(config.out, "evaluation.jsonl").c_str()),
        "evaluation.jsonl");
  Check(kbc_dataset_save(validation.get(),
                         OutPath(config.out, "validation.jsonl").c_str()),
        "validation.jsonl");
  Check(kbc_dataset_write_stats(dataset.get(), registry.get(),
                                OutPath(config.out, "stats.json").c_str(),
                                OutPath(config.out, "stats.txt").c_str()),
        "stats");

  nlohmann::json relations = nlohmann::json::array();
  for (size_t i = 0; i < kbc_registry_size(registry.get()); ++i) {
    relations.push_back(kbc_registry_pid(registry.get(), i));
  }
  nlohmann::json manifest = {
      {"command", "malt build"},
      {"version", kbc_version()},
      {"snapshots", config.snapshots},
      {"registry", config.registry},
      {"relations", relations},
      {"sample", config.sample},
      {"seed", config.seed},
      {"validation_fraction", config.validation_fraction},
      {"records", kbc_dataset_size(dataset.get())},
      {"triples", kbc_dataset_triple_count(dataset.get())},
      {"evaluation_records", kbc_dataset_size(evaluation.get())},
      {"validation_records", kbc_dataset_size(validation.get())},
  };
  WriteText(OutPath(config.out, "build.json"), manifest.dump(2) + "\n");

  std::printf(
      "%zu records, %zu triples (%zu evaluation, %zu validation)\n",
      kbc_dataset_size(dataset.get()), kbc_dataset_triple_count(dataset.get()),
      kbc_dataset_size(evaluation.get()), kbc_dataset_size(validation.get()));
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Builds benchmark datasets from a knowledge-base snapshot."};
  app.require_subcommand(1);

  BuildConfig config;
  CLI::App *build = app.add_subcommand("build", "Sample, flag and split facts");
  build
      ->add_option("--snapshot", config.snapshots,
                   "Snapshot file (JSON lines); repeat for shards")
      ->required();
  build
      ->add_option("--relations", config.relations,
                   "Comma-separated pids, or \"all\"")
      ->capture_default_str();
  build->add_option("--registry", config.registry,
                    "Relation registry (JSON); defaults to the shipped one");
  build
      ->add_option("--sample", config.sample,
                   "Subjects per relation, or \"all\"")
      ->capture_default_str();
  build->add_option("--seed", config.seed, "Sampling seed")
      ->capture_default_str();
  build
      ->add_option("--validation-fraction", config.validation_fraction,
                   "Hold-out fraction per relation")
      ->capture_default_str();
  build->add_option("--out", config.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    return Build(config);
  } catch (const CommandFailed &e) {
    return e.exit_code;
  }
}
