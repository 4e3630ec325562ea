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

#ifndef CONVXAI_SERVICE_ENGINE_H_
#define CONVXAI_SERVICE_ENGINE_H_

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "convxai/corpus/phrase_bank.h"
#include "convxai/io.h"
#include "convxai/model/evaluation.h"
#include "convxai/model/model_card.h"
#include "convxai/model/random_forest.h"
#include "convxai/nlg/render.h"
#include "convxai/nlg/templates.h"
#include "convxai/nlu/matcher.h"
#include "convxai/nlu/unmatched_log.h"
#include "convxai/policy/glossary.h"
#include "convxai/policy/policy.h"
#include "convxai/policy/routing.h"
#include "convxai/service/config.h"
#include "convxai/tabular/dataset.h"
#include "convxai/tabular/datasheet.h"
#include "convxai/tabular/sampler.h"

namespace convxai::service {

// Everything trained for one dataset and forest config. Immutable once
// built and shared by all sessions using it.
struct ModelBundle {
  std::string dataset_id;
  std::string key;
  tabular::Dataset dataset;
  tabular::DataSheet datasheet;
  model::RandomForest forest;
  model::CvMetrics cv;
  model::ModelCard card;
  std::unique_ptr<tabular::PerturbationSampler> sampler;
  bool from_cache = false;

  const tabular::Schema& schema() const { return dataset.schema; }
};

enum class Role { kUser, kAgent };

struct Turn {
  Role role = Role::kUser;
  std::string text;
  // User turns that matched.
  std::optional<int> label;
  std::optional<double> confidence;
  // Agent turns: {question_id, route, confidence} or {kind: ...}.
  Json provenance;
  // Agent turns: the rendered answer (text, chart, diff table).
  Json answer;
  std::string timestamp;

  Json ToJson() const;
};

class Session {
 public:
  Session(std::string id, std::shared_ptr<const ModelBundle> bundle);

  const std::string& id() const { return id_; }
  const ModelBundle& bundle() const { return *bundle_; }
  const std::string& created_at() const { return created_at_; }

 private:
  friend class Engine;
  std::string id_;
  std::shared_ptr<const ModelBundle> bundle_;
  std::string created_at_;
  // Guards everything below; one in-flight operation per session.
  mutable std::mutex mu_;
  policy::SessionState state_;
  std::vector<Turn> history_;
};

struct AskResult {
  Turn user;
  Turn agent;
  // The structured answer, null for unmatched questions and failures.
  Json payload;
};

// The conversation pipeline behind the HTTP API and the CLI. Thread-safe:
// sessions are isolated, shared state is read-only or internally locked.
class Engine {
 public:
  // Loads phrase bank, matcher, routing table, glossary, templates and the
  // dataset registry. Throws on any inconsistency.
  explicit Engine(ServiceConfig config);
  ~Engine();

  // Trains (or loads from cache) the forest for `dataset_id`. Throws
  // NotFoundError for an unknown dataset; training failures surface as
  // Error("E_TRAINING").
  std::string CreateSession(const std::string& dataset_id,
                            const Json& forest_overrides = Json::object());

  // Validates and stores a profile, announces the prediction and returns
  // the agent turn. ValidationError leaves the history untouched.
  Turn SetProfile(const std::string& session_id,
                  const tabular::NamedValues& values, bool second = false);

  // Match, route, execute, render. Always appends exactly two turns; NoMatch
  // also writes the UnmatchedLog.
  AskResult Ask(const std::string& session_id, const std::string& text);

  std::vector<Turn> History(const std::string& session_id) const;
  Json SessionInfo(const std::string& session_id) const;
  Json ListDatasets() const;
  // Throws NotFoundError.
  Json DatasetSchema(const std::string& dataset_id) const;
  // Throws Error("E_AUTH") unless `token` equals the configured admin token.
  std::vector<Json> Unmatched(const std::string& token) const;

  std::shared_ptr<const ModelBundle> Bundle(const std::string& dataset_id,
                                            const Json& forest_overrides = Json::object());

  const ServiceConfig& config() const { return config_; }
  const nlu::Matcher& matcher() const { return matcher_; }
  const corpus::PhraseBank& bank() const { return bank_; }
  const policy::RoutingTable& routing() const { return routing_; }
  const DatasetRegistry& registry() const { return registry_; }
  std::shared_ptr<const nlg::TemplateSet> templates() const;

 private:
  std::shared_ptr<Session> Find(const std::string& session_id) const;
  std::shared_ptr<ModelBundle> BuildBundle(const std::string& dataset_id,
                                           const model::ForestConfig& forest,
                                           const std::string& key) const;

  ServiceConfig config_;
  DatasetRegistry registry_;
  corpus::PhraseBank bank_;
  nlu::Matcher matcher_;
  policy::RoutingTable routing_;
  policy::Glossary glossary_;
  mutable nlg::TemplateStore templates_;
  mutable nlu::UnmatchedLog unmatched_;

  mutable std::mutex bundles_mu_;
  std::map<std::string, std::shared_ptr<const ModelBundle>> bundles_;
  mutable std::mutex sessions_mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

// Answer pipeline on explicit parts; the engine and tests share it.
struct PipelineParts {
  const nlu::Matcher* matcher = nullptr;
  const policy::RoutingTable* routing = nullptr;
  const policy::Glossary* glossary = nullptr;
  const nlg::TemplateSet* templates = nullptr;
  const ModelBundle* bundle = nullptr;
  const policy::ExplainerConfig* explainers = nullptr;
  std::size_t chart_top_n = 10;
};

struct PipelineOutput {
  nlu::MatchResult match;
  std::optional<policy::AnswerPayload> payload;
  nlg::RenderedAnswer rendered;
};

// Runs one question against a session state. Never throws for explainer
// failures; template errors propagate.
PipelineOutput AnswerQuestion(const PipelineParts& parts,
                              const policy::SessionState& state,
                              const std::string& text);

}  // namespace convxai::service

#endif  // CONVXAI_SERVICE_ENGINE_H_
