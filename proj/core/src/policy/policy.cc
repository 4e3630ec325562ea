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

#include "convxai/policy/policy.h"

#include <algorithm>
#include <cmath>

#include "convxai/error.h"
#include "convxai/tabular/dataset.h"

namespace convxai::policy {
namespace {

bool InstanceScoped(RouteKind r) {
  switch (r) {
    case RouteKind::kFeatureImportance:
    case RouteKind::kTwoInstanceImportance:
    case RouteKind::kCounterfactual:
    case RouteKind::kConstrainedCounterfactual:
    case RouteKind::kAnchor:
    case RouteKind::kWhatIfPrediction:
      return true;
    default:
      return false;
  }
}

bool Needs(const RoutingEntry& e, std::string_view slot) {
  return std::find(e.required_slots.begin(), e.required_slots.end(), slot) !=
         e.required_slots.end();
}

ExplanationTask Clarify(ExplanationTask task, std::string reason,
                        std::vector<std::string> details = {}) {
  task.route = RouteKind::kClarification;
  task.clarification = std::move(reason);
  task.details = std::move(details);
  return task;
}

std::vector<std::size_t> ResolveFeatures(const nlu::Slots& slots,
                                         const tabular::Schema& schema) {
  std::vector<std::size_t> out;
  for (const auto& name : slots.features) {
    if (auto f = schema.FeatureIndex(name)) {
      if (std::find(out.begin(), out.end(), *f) == out.end()) out.push_back(*f);
    }
  }
  return out;
}

bool LooksNumeric(const std::string& s) {
  try {
    std::size_t used = 0;
    std::stod(s, &used);
    return used == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

// Pairs value slots with features: a category of a mentioned feature, a
// number with the next numeric mentioned feature, or a category that only
// one schema feature has.
std::vector<std::pair<std::string, std::string>> PairOverrides(
    const nlu::Slots& slots, const tabular::Schema& schema) {
  const auto mentioned = ResolveFeatures(slots, schema);
  std::vector<bool> used(mentioned.size(), false);
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& v : slots.values) {
    std::optional<std::size_t> feature;
    for (std::size_t i = 0; i < mentioned.size() && !feature; ++i) {
      const auto& spec = schema.feature(mentioned[i]);
      if (!used[i] && !spec.numeric() && spec.CategoryIndex(v) >= 0) {
        feature = mentioned[i];
        used[i] = true;
      }
    }
    if (!feature && LooksNumeric(v)) {
      for (std::size_t i = 0; i < mentioned.size() && !feature; ++i) {
        if (!used[i] && schema.feature(mentioned[i]).numeric()) {
          feature = mentioned[i];
          used[i] = true;
        }
      }
    }
    if (!feature) {
      std::vector<std::size_t> owners;
      for (std::size_t f = 0; f < schema.num_features(); ++f) {
        const auto& spec = schema.feature(f);
        if (!spec.numeric() && spec.CategoryIndex(v) >= 0) owners.push_back(f);
      }
      if (owners.size() == 1) feature = owners[0];
    }
    if (feature) out.emplace_back(schema.feature(*feature).name, v);
  }
  return out;
}

AnswerPayload ErrorPayload(const ExplanationTask& task, const std::string& code,
                           const std::string& detail) {
  return AnswerPayload{task.route, task.question_id,
                       NoticeBody{"error", code, detail}};
}

Json InstanceJson(const tabular::Schema& schema, const tabular::Instance& x) {
  Json j = Json::object();
  for (std::size_t f = 0; f < x.size(); ++f) {
    j[schema.feature(f).name] = schema.FormatValue(f, x[f]);
  }
  return j;
}

}  // namespace

int AttributionTarget(const tabular::Schema& schema, int predicted_class) {
  return schema.num_classes() == 2 ? 1 : predicted_class;
}

ExplanationTask RouteQuestion(const RoutingTable& table, int label,
                              const nlu::Slots& slots,
                              const SessionState& state,
                              const tabular::Schema& schema,
                              std::string_view question_text) {
  const RoutingEntry& entry = table.Entry(label);
  ExplanationTask task;
  task.route = entry.route;
  task.question_id = label;
  task.entry = entry;
  task.slots = slots;
  task.question_text = std::string(question_text);
  task.current = state.current;
  task.second = state.second;

  if ((InstanceScoped(entry.route) || Needs(entry, "second_instance")) &&
      !state.current) {
    return Clarify(std::move(task), "need_profile");
  }
  if (Needs(entry, "second_instance") && !state.second) {
    return Clarify(std::move(task), "need_second_profile");
  }
  const auto features = ResolveFeatures(slots, schema);
  if (!features.empty()) task.feature = features.front();

  switch (entry.route) {
    case RouteKind::kConstrainedCounterfactual: {
      if (!task.feature) return Clarify(std::move(task), "need_feature");
      if (!schema.feature(*task.feature).is_mutable) {
        return Clarify(std::move(task), "immutable_feature",
                       {schema.feature(*task.feature).name});
      }
      break;
    }
    case RouteKind::kWhatIfPrediction: {
      task.overrides = PairOverrides(slots, schema);
      if (task.overrides.empty()) {
        return Clarify(std::move(task), "need_feature_value");
      }
      break;
    }
    default:
      break;
  }

  if (entry.route == RouteKind::kCounterfactual ||
      entry.route == RouteKind::kConstrainedCounterfactual) {
    const int predicted = state.current_prediction.value_or(0);
    if (Needs(entry, "second_instance")) {
      const int other = state.second_prediction.value_or(predicted);
      if (other == predicted) {
        return Clarify(std::move(task), "same_prediction",
                       {schema.class_name(predicted)});
      }
      task.target_class = other;
    } else {
      // The last class mentioned is the wanted one ("P instead of Q").
      std::optional<int> named;
      for (const auto& c : slots.classes) {
        if (auto idx = schema.ClassIndex(c)) named = *idx;
      }
      if (named) {
        if (*named == predicted) {
          return Clarify(std::move(task), "already_target",
                         {schema.class_name(predicted)});
        }
        task.target_class = named;
      } else if (schema.num_classes() == 2) {
        task.target_class = 1 - predicted;
      } else {
        return Clarify(std::move(task), "need_target");
      }
    }
  }
  return task;
}

AnswerPayload AnswerWhatIf(
    const model::Classifier& model, const tabular::Schema& schema,
    const tabular::Instance& instance,
    const std::vector<std::pair<std::string, std::string>>& overrides) {
  AnswerPayload out;
  out.route = RouteKind::kWhatIfPrediction;
  auto named = tabular::Describe(schema, instance);
  std::vector<std::string> problems;
  for (const auto& [name, value] : overrides) {
    auto f = schema.FeatureIndex(name);
    if (!f) {
      problems.push_back("unknown: " + name);
      continue;
    }
    named[*f].second = value;
  }
  if (!problems.empty()) {
    out.body = ClarificationBody{"invalid_value", problems};
    return out;
  }
  tabular::ValidatedInstance v;
  try {
    v = tabular::ValidateInstance(schema, named);
  } catch (const ValidationError& e) {
    out.body = ClarificationBody{"invalid_value", e.problems()};
    return out;
  }
  PredictionBody body;
  body.instance = v.instance;
  body.probabilities = model.PredictProba(v.instance);
  body.predicted_class = model.Predict(v.instance);
  body.warnings = v.warnings;
  body.what_if = true;
  for (std::size_t f = 0; f < instance.size(); ++f) {
    if (v.instance[f] != instance[f]) {
      body.changes.push_back({f, instance[f], v.instance[f]});
    }
  }
  out.body = std::move(body);
  return out;
}

AnswerPayload Execute(const ExplanationTask& task, const ExecutionContext& ctx) {
  AnswerPayload out;
  out.route = task.route;
  out.question_id = task.question_id;
  const auto& entry = task.entry;
  try {
    switch (task.route) {
      case RouteKind::kClarification:
        out.body = ClarificationBody{task.clarification, task.details};
        return out;
      case RouteKind::kUnsupported:
        out.body = NoticeBody{"unsupported." + entry.notice, "", ""};
        return out;
      case RouteKind::kExternalValidation:
        out.body = NoticeBody{"external_validation." + entry.notice, "", ""};
        return out;
      case RouteKind::kSystemContext:
        out.body = NoticeBody{"system_context." + entry.notice, "", ""};
        return out;
      case RouteKind::kExternalKnowledge: {
        if (entry.notice == "glossary" && ctx.glossary != nullptr) {
          if (auto hit = ctx.glossary->Find(task.question_text)) {
            out.body = MetadataBody{"glossary", hit->term,
                                    {{"value", hit->definition},
                                     {"term", hit->term}}};
            return out;
          }
          std::string some;
          const auto& entries = ctx.glossary->entries();
          for (std::size_t i = 0; i < entries.size() && i < 5; ++i) {
            some += (i > 0 ? ", " : "") + entries[i].term;
          }
          out.body = NoticeBody{"external_knowledge.glossary_miss", "", some};
          return out;
        }
        out.body = NoticeBody{"external_knowledge." + entry.notice, "", ""};
        return out;
      }
      case RouteKind::kModelCardLookup: {
        if (ctx.model_card == nullptr) {
          return ErrorPayload(task, "E_NO_MODEL_CARD", "no model card loaded");
        }
        MetadataBody body{"model_card", entry.field, {}};
        body.values["value"] = ctx.model_card->Field(entry.field).value_or("");
        if (entry.field == "accuracy") {
          body.values["class_metrics"] =
              ctx.model_card->Field("class_metrics").value_or("");
        }
        out.body = std::move(body);
        return out;
      }
      case RouteKind::kDataSheetLookup: {
        if (ctx.datasheet == nullptr) {
          return ErrorPayload(task, "E_NO_DATASHEET", "no datasheet loaded");
        }
        auto v = ctx.datasheet->Field(entry.field);
        if (!v) return ErrorPayload(task, "E_DATASHEET", "unknown field " + entry.field);
        out.body = MetadataBody{"datasheet", entry.field, {{"value", *v}}};
        return out;
      }
      default:
        break;
    }

    const auto& model = *ctx.model;
    const auto& schema = *ctx.schema;
    const auto& x = *task.current;
    const int predicted = model.Predict(x);
    switch (task.route) {
      case RouteKind::kFeatureImportance: {
        AttributionBody body;
        body.attribution =
            explain::KernelShap(model, x, ctx.sampler->background(),
                                AttributionTarget(schema, predicted),
                                ctx.config.shap);
        body.predicted_class = predicted;
        body.focus = task.feature;
        body.caveat = entry.caveat;
        out.body = std::move(body);
        return out;
      }
      case RouteKind::kTwoInstanceImportance: {
        const auto& y = *task.second;
        const int second = model.Predict(y);
        TwoAttributionBody body;
        body.first = explain::KernelShap(model, x, ctx.sampler->background(),
                                         AttributionTarget(schema, predicted),
                                         ctx.config.shap);
        body.second = explain::KernelShap(model, y, ctx.sampler->background(),
                                          AttributionTarget(schema, second),
                                          ctx.config.shap);
        body.first_class = predicted;
        body.second_class = second;
        out.body = std::move(body);
        return out;
      }
      case RouteKind::kCounterfactual:
      case RouteKind::kConstrainedCounterfactual: {
        CounterfactualBody body;
        body.original = x;
        body.predicted_class = predicted;
        body.target_class = task.target_class.value();
        body.versus_second = Needs(entry, "second_instance");
        if (task.route == RouteKind::kConstrainedCounterfactual) {
          body.feature = task.feature;
          body.result = explain::ConstrainedCounterfactual(
              model, x, body.target_class, *task.feature, *ctx.sampler,
              ctx.config.counterfactual);
        } else {
          explain::CfConstraints cons;
          cons.k = ctx.config.counterfactual_k;
          body.result =
              explain::Counterfactuals(model, x, body.target_class, *ctx.sampler,
                                       cons, ctx.config.counterfactual);
        }
        out.body = std::move(body);
        return out;
      }
      case RouteKind::kAnchor: {
        AnchorBody body;
        body.rule = explain::FindAnchor(model, x, *ctx.sampler, ctx.config.anchor);
        body.focus = task.feature;
        out.body = std::move(body);
        return out;
      }
      case RouteKind::kPrediction: {
        const auto& y = *task.second;
        PredictionBody body;
        body.instance = y;
        body.probabilities = model.PredictProba(y);
        body.predicted_class = model.Predict(y);
        body.second = true;
        out.body = std::move(body);
        return out;
      }
      case RouteKind::kWhatIfPrediction: {
        AnswerPayload p = AnswerWhatIf(model, schema, x, task.overrides);
        p.question_id = task.question_id;
        return p;
      }
      default:
        break;
    }
    return ErrorPayload(task, "E_ROUTING", "route has no executor");
  } catch (const Error& e) {
    return ErrorPayload(task, e.code(), e.what());
  } catch (const std::exception& e) {
    return ErrorPayload(task, "E_INTERNAL", e.what());
  }
}

Json ExplainerConfig::ToJson() const {
  return Json{{"shap", shap.ToJson()},
              {"anchor", anchor.ToJson()},
              {"counterfactual", counterfactual.ToJson()},
              {"counterfactual_k", counterfactual_k}};
}

ExplainerConfig ExplainerConfig::FromJson(const Json& json) {
  ExplainerConfig c;
  if (json.contains("shap")) c.shap = explain::ShapConfig::FromJson(json["shap"]);
  if (json.contains("anchor")) {
    c.anchor = explain::AnchorConfig::FromJson(json["anchor"]);
  }
  if (json.contains("counterfactual")) {
    c.counterfactual = explain::CfConfig::FromJson(json["counterfactual"]);
  }
  c.counterfactual_k = json.value("counterfactual_k", c.counterfactual_k);
  if (c.counterfactual_k < 1) {
    throw ValidationError("E_CONFIG", {"counterfactual_k < 1"});
  }
  return c;
}

Json AnswerPayload::ToJson(const tabular::Schema& schema) const {
  Json j{{"route", RouteName(route)}, {"question_id", question_id}};
  std::visit(
      [&](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, AttributionBody>) {
          j["kind"] = "attribution";
          j["attribution"] = b.attribution.ToJson();
          j["target_class"] = schema.class_name(b.attribution.target_class);
          j["predicted_class"] = schema.class_name(b.predicted_class);
          j["caveat"] = b.caveat;
        } else if constexpr (std::is_same_v<T, TwoAttributionBody>) {
          j["kind"] = "two_attributions";
          j["first"] = b.first.ToJson();
          j["second"] = b.second.ToJson();
          j["first_class"] = schema.class_name(b.first_class);
          j["second_class"] = schema.class_name(b.second_class);
        } else if constexpr (std::is_same_v<T, CounterfactualBody>) {
          j["kind"] = "counterfactual";
          j["original"] = InstanceJson(schema, b.original);
          j["predicted_class"] = schema.class_name(b.predicted_class);
          j["target_class"] = schema.class_name(b.target_class);
          j["result"] = b.result.ToJson(schema);
          if (b.feature) j["feature"] = schema.feature(*b.feature).name;
        } else if constexpr (std::is_same_v<T, AnchorBody>) {
          j["kind"] = "anchor";
          j["anchor"] = b.rule.ToJson(schema);
        } else if constexpr (std::is_same_v<T, PredictionBody>) {
          j["kind"] = "prediction";
          j["instance"] = InstanceJson(schema, b.instance);
          j["predicted_class"] = schema.class_name(b.predicted_class);
          j["probabilities"] = b.probabilities;
          j["warnings"] = b.warnings;
          j["what_if"] = b.what_if;
        } else if constexpr (std::is_same_v<T, MetadataBody>) {
          j["kind"] = "metadata";
          j["source"] = b.source;
          j["field"] = b.field;
          j["values"] = b.values;
        } else if constexpr (std::is_same_v<T, ClarificationBody>) {
          j["kind"] = "clarification";
          j["reason"] = b.reason;
          j["details"] = b.details;
        } else {
          j["kind"] = "notice";
          j["key"] = b.key;
          if (!b.code.empty()) j["code"] = b.code;
          if (!b.detail.empty()) j["detail"] = b.detail;
        }
      },
      body);
  return j;
}

}  // namespace convxai::policy
