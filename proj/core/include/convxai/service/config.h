// Copyright 2026 The ConvXAI Authors.
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

#ifndef CONVXAI_SERVICE_CONFIG_H_
#define CONVXAI_SERVICE_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "convxai/io.h"
#include "convxai/model/model_card.h"
#include "convxai/model/random_forest.h"
#include "convxai/nlu/matcher.h"
#include "convxai/policy/policy.h"

namespace convxai::service {

struct DatasetEntry {
  std::string id;
  std::filesystem::path csv;
  std::filesystem::path schema;
  std::filesystem::path datasheet;
  model::ModelCardNotes notes;
};

// Datasets the service may load, from {"datasets": [{id, csv, schema,
// datasheet[, limitations, usage]}]}. Paths are relative to the file.
class DatasetRegistry {
 public:
  DatasetRegistry() = default;
  // Throws ValidationError("E_REGISTRY") for duplicate or empty ids.
  explicit DatasetRegistry(std::vector<DatasetEntry> entries);

  // Throws NotFoundError for an unknown id.
  const DatasetEntry& Get(const std::string& id) const;
  bool Has(const std::string& id) const;
  const std::vector<DatasetEntry>& entries() const { return entries_; }
  std::vector<std::string> Ids() const;

 private:
  std::vector<DatasetEntry> entries_;
};

DatasetRegistry LoadRegistry(const std::filesystem::path& path);

// Shared by `serve` and the other CLI commands. Relative paths resolve
// against the config file's directory.
struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path registry;
  std::filesystem::path phrase_bank;
  std::filesystem::path merge_spec;
  // Trained matcher; loaded when the file exists, else trained and written.
  std::filesystem::path matcher_artifact;
  std::filesystem::path routing;
  std::filesystem::path glossary;
  std::filesystem::path templates;
  std::filesystem::path unmatched_log;
  // Trained forests and model cards keyed by dataset and config. Empty
  // disables the disk cache.
  std::filesystem::path artifact_dir;
  std::string admin_token;
  std::uint64_t seed = 1;
  int cv_folds = 3;
  std::size_t background_size = 100;
  std::size_t chart_top_n = 10;
  nlu::MatcherConfig matcher;
  model::ForestConfig forest;
  policy::ExplainerConfig explainers;

  Json ToJson() const;
  // Throws ValidationError("E_CONFIG") listing every bad field.
  static ServiceConfig FromJson(const Json& json,
                                const std::filesystem::path& base_dir);
};

ServiceConfig LoadServiceConfig(const std::filesystem::path& path);

}  // namespace convxai::service

#endif  // CONVXAI_SERVICE_CONFIG_H_
