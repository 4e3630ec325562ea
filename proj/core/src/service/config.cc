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

#include "convxai/service/config.h"

#include <set>

#include "convxai/error.h"

namespace convxai::service {

DatasetRegistry::DatasetRegistry(std::vector<DatasetEntry> entries)
    : entries_(std::move(entries)) {
  std::vector<std::string> problems;
  std::set<std::string> seen;
  for (const auto& e : entries_) {
    if (e.id.empty()) problems.push_back("dataset with an empty id");
    if (!seen.insert(e.id).second) problems.push_back("duplicate dataset " + e.id);
  }
  if (!problems.empty()) throw ValidationError("E_REGISTRY", problems);
}

const DatasetEntry& DatasetRegistry::Get(const std::string& id) const {
  for (const auto& e : entries_) {
    if (e.id == id) return e;
  }
  throw NotFoundError("unknown dataset '" + id + "'");
}

bool DatasetRegistry::Has(const std::string& id) const {
  for (const auto& e : entries_) {
    if (e.id == id) return true;
  }
  return false;
}

std::vector<std::string> DatasetRegistry::Ids() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) out.push_back(e.id);
  return out;
}

DatasetRegistry LoadRegistry(const std::filesystem::path& path) {
  const Json j = ReadJsonFile(path);
  std::vector<DatasetEntry> entries;
  try {
    for (const auto& d : j.at("datasets")) {
      DatasetEntry e;
      e.id = d.at("id").get<std::string>();
      e.csv = ResolveRelative(path, d.at("csv").get<std::string>());
      e.schema = ResolveRelative(path, d.at("schema").get<std::string>());
      e.datasheet = ResolveRelative(path, d.at("datasheet").get<std::string>());
      e.notes.limitations = d.value("limitations", std::string());
      e.notes.usage = d.value("usage", std::string());
      entries.push_back(std::move(e));
    }
  } catch (const Json::exception& ex) {
    throw ParseError(path.string() + ": " + ex.what());
  }
  return DatasetRegistry(std::move(entries));
}

Json ServiceConfig::ToJson() const {
  return Json{{"host", host},
              {"port", port},
              {"registry", registry.string()},
              {"phrase_bank", phrase_bank.string()},
              {"merge_spec", merge_spec.string()},
              {"matcher_artifact", matcher_artifact.string()},
              {"routing", routing.string()},
              {"glossary", glossary.string()},
              {"templates", templates.string()},
              {"unmatched_log", unmatched_log.string()},
              {"artifact_dir", artifact_dir.string()},
              {"admin_token", admin_token.empty() ? "" : "***"},
              {"seed", seed},
              {"cv_folds", cv_folds},
              {"background_size", background_size},
              {"chart_top_n", chart_top_n},
              {"matcher", matcher.ToJson()},
              {"forest", forest.ToJson()},
              {"explainers", explainers.ToJson()}};
}

ServiceConfig ServiceConfig::FromJson(const Json& json,
                                      const std::filesystem::path& base_dir) {
  ServiceConfig c;
  std::vector<std::string> problems;
  auto path = [&](const char* key, std::filesystem::path& out, bool required) {
    if (!json.contains(key) || json[key].get<std::string>().empty()) {
      if (required) problems.push_back(std::string("missing ") + key);
      return;
    }
    std::filesystem::path p = json[key].get<std::string>();
    out = p.is_absolute() ? p : base_dir / p;
  };
  try {
    c.host = json.value("host", c.host);
    c.port = json.value("port", c.port);
    path("registry", c.registry, true);
    path("phrase_bank", c.phrase_bank, true);
    path("merge_spec", c.merge_spec, false);
    path("matcher_artifact", c.matcher_artifact, false);
    path("routing", c.routing, true);
    path("glossary", c.glossary, false);
    path("templates", c.templates, true);
    path("unmatched_log", c.unmatched_log, true);
    path("artifact_dir", c.artifact_dir, false);
    c.admin_token = json.value("admin_token", std::string());
    c.seed = json.value("seed", c.seed);
    c.cv_folds = json.value("cv_folds", c.cv_folds);
    c.background_size = json.value("background_size", c.background_size);
    c.chart_top_n = json.value("chart_top_n", c.chart_top_n);
    if (json.contains("matcher")) c.matcher = nlu::MatcherConfig::FromJson(json["matcher"]);
    if (json.contains("forest")) c.forest = model::ForestConfig::FromJson(json["forest"]);
    if (json.contains("explainers")) {
      c.explainers = policy::ExplainerConfig::FromJson(json["explainers"]);
    }
  } catch (const Json::exception& e) {
    problems.push_back(e.what());
  }
  if (c.port < 0 || c.port > 65535) problems.push_back("port outside 0..65535");
  if (c.cv_folds < 2) problems.push_back("cv_folds < 2");
  if (c.background_size == 0) problems.push_back("background_size is 0");
  if (c.chart_top_n == 0) problems.push_back("chart_top_n is 0");
  if (!problems.empty()) throw ValidationError("E_CONFIG", problems);
  return c;
}

ServiceConfig LoadServiceConfig(const std::filesystem::path& path) {
  return ServiceConfig::FromJson(ReadJsonFile(path), path.parent_path());
}

}  // namespace convxai::service
