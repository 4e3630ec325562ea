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

#ifndef CONVXAI_POLICY_POLICY_H_
#define CONVXAI_POLICY_POLICY_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "convxai/explain/anchor.h"
#include "convxai/explain/attribution.h"
#include "convxai/explain/counterfactual.h"
#include "convxai/io.h"
#include "convxai/model/classifier.h"
#include "convxai/model/model_card.h"
#include "convxai/nlu/preprocess.h"
#include "convxai/policy/glossary.h"
#include "convxai/policy/routing.h"
#include "convxai/tabular/datasheet.h"
#include "convxai/tabular/sampler.h"

namespace convxai::policy {

// What routing may look at besides the label and slots.
struct SessionState {
  std::optional<tabular::Instance> current;
  std::optional<int> current_prediction;
  std::optional<tabular::Instance> second;
  std::optional<int> second_prediction;
};

struct ExplanationTask {
  RouteKind route = RouteKind::kUnsupported;
  int question_id = 0;
  RoutingEntry entry;
  nlu::Slots slots;
  std::string question_text;
  std::optional<tabular::Instance> current;
  std::optional<tabular::Instance> second;
  std::optional<int> target_class;
  // Constrained counterfactual feature, or the feature a question is about.
  std::optional<std::size_t> feature;
  // What-if changes as typed: (feature name, value text).
  std::vector<std::pair<std::string, std::string>> overrides;
  // Clarification only.
  std::string clarification;
  std::vector<std::string> details;
};

struct AttributionBody {
  explain::Attribution attribution;
  int predicted_class = 0;
  std::optional<std::size_t> focus;
  bool caveat = false;
};

struct TwoAttributionBody {
  explain::Attribution first;
  explain::Attribution second;
  int first_class = 0;
  int second_class = 0;
};

struct CounterfactualBody {
  tabular::Instance original;
  int predicted_class = 0;
  int target_class = 0;
  explain::CfResult result;
  // Set for the single-feature search.
  std::optional<std::size_t> feature;
  // Target taken from the second profile's prediction.
  bool versus_second = false;
};

struct AnchorBody {
  explain::AnchorRule rule;
  std::optional<std::size_t> focus;
};

struct PredictionBody {
  tabular::Instance instance;
  int predicted_class = 0;
  std::vector<double> probabilities;
  // What-if only: the applied changes.
  std::vector<explain::FeatureChange> changes;
  std::vector<std::string> warnings;
  bool what_if = false;
  bool second = false;
};

struct MetadataBody {
  // "model_card", "datasheet" or "glossary".
  std::string source;
  std::string field;
  // "value" holds the answer phrase; lookups may add related phrases.
  std::map<std::string, std::string> values;
};

struct ClarificationBody {
  std::string reason;
  std::vector<std::string> details;
};

struct NoticeBody {
  // "unsupported.<key>", "external_knowledge.<key>", "external_validation.<key>",
  // "system_context.<key>" or "error".
  std::string key;
  std::string code;
  std::string detail;
};

using PayloadBody =
    std::variant<AttributionBody, TwoAttributionBody, CounterfactualBody,
                 AnchorBody, PredictionBody, MetadataBody, ClarificationBody,
                 NoticeBody>;

struct AnswerPayload {
  RouteKind route = RouteKind::kUnsupported;
  int question_id = 0;
  PayloadBody body;

  Json ToJson(const tabular::Schema& schema) const;
};

struct ExplainerConfig {
  explain::ShapConfig shap;
  explain::AnchorConfig anchor;
  explain::CfConfig counterfactual;
  int counterfactual_k = 3;

  Json ToJson() const;
  static ExplainerConfig FromJson(const Json& json);
};

struct ExecutionContext {
  const model::Classifier* model = nullptr;
  const tabular::Schema* schema = nullptr;
  const tabular::PerturbationSampler* sampler = nullptr;
  const model::ModelCard* model_card = nullptr;
  const tabular::DataSheet* datasheet = nullptr;
  const Glossary* glossary = nullptr;
  ExplainerConfig config;
};

// Routes a matched label. Missing inputs (no profile, no feature, ...) give
// a Clarification task rather than an error. Pure in its arguments.
ExplanationTask RouteQuestion(const RoutingTable& table, int label,
                              const nlu::Slots& slots,
                              const SessionState& state,
                              const tabular::Schema& schema,
                              std::string_view question_text = {});

// Runs the task. Explainer failures come back as an "error" notice with the
// diagnostic code; nothing is thrown for them.
AnswerPayload Execute(const ExplanationTask& task, const ExecutionContext& ctx);

// Prediction for `instance` with `overrides` applied. Invalid values give a
// Clarification payload listing the problems; out-of-range numerics are
// accepted with a warning.
AnswerPayload AnswerWhatIf(
    const model::Classifier& model, const tabular::Schema& schema,
    const tabular::Instance& instance,
    const std::vector<std::pair<std::string, std::string>>& overrides);

// Class attributions are computed for: the second class in binary tasks (so
// positive values push towards it), otherwise the predicted class.
int AttributionTarget(const tabular::Schema& schema, int predicted_class);

}  // namespace convxai::policy

#endif  // CONVXAI_POLICY_POLICY_H_
