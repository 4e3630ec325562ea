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

// One-shot explanation of a single profile.

#include <iostream>

#include "common.h"
#include "convxai/error.h"
#include "convxai/nlg/render.h"
#include "convxai/policy/policy.h"
#include "convxai/service/engine.h"

namespace convxai::cli {
namespace {

struct ExplainOptions {
  CommonOptions common;
  std::string profile;
  std::vector<std::string> set;
  std::string method = "shap";
  std::string feature;
  std::string target;
  bool json = false;
};

int RunExplain(const ExplainOptions& o) {
  auto config = LoadConfig(o.common);
  service::Engine engine(config);
  const auto bundle = engine.Bundle(o.common.dataset);
  const auto& schema = bundle->schema();

  tabular::NamedValues values;
  if (!o.profile.empty()) {
    for (const auto& [k, v] : ReadJsonFile(o.profile).items()) {
      values.emplace_back(k, v.is_string() ? v.get<std::string>() : v.dump());
    }
  }
  for (const auto& s : o.set) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects Feature=value, got '" + s + "'");
    std::erase_if(values, [&](const auto& p) { return p.first == s.substr(0, eq); });
    values.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  if (values.empty()) throw UsageError("give a profile with --profile or --set");
  const auto instance = tabular::ValidateInstance(schema, values).instance;
  const int predicted = bundle->forest.Predict(instance);

  using policy::RouteKind;
  policy::ExplanationTask task;
  task.current = instance;
  if (o.method == "shap") {
    task.route = RouteKind::kFeatureImportance;
  } else if (o.method == "anchor") {
    task.route = RouteKind::kAnchor;
  } else if (o.method == "counterfactual" || o.method == "constrained") {
    task.route = o.method == "constrained" ? RouteKind::kConstrainedCounterfactual
                                           : RouteKind::kCounterfactual;
    if (!o.target.empty()) {
      auto c = schema.ClassIndex(o.target);
      if (!c) throw UsageError("unknown class '" + o.target + "'");
      task.target_class = *c;
    } else if (schema.num_classes() == 2) {
      task.target_class = 1 - predicted;
    } else {
      throw UsageError("--target is required for more than two classes");
    }
  } else if (o.method == "predict") {
    const auto templates = engine.templates();
    const auto proba = bundle->forest.PredictProba(instance);
    if (o.json) {
      std::cout << Json{{"predicted_class", schema.class_name(predicted)},
                        {"probabilities", proba}}.dump(2) << "\n";
    } else {
      std::cout << nlg::Renderer(*templates, schema).ProfileAnnouncement(instance, predicted)
                << "\n";
    }
    return kOk;
  } else {
    throw UsageError("unknown method '" + o.method +
                     "' (shap, anchor, counterfactual, constrained, predict)");
  }
  if (!o.feature.empty()) {
    task.feature = schema.FeatureIndex(o.feature);
    if (!task.feature) throw UsageError("unknown feature '" + o.feature + "'");
  } else if (task.route == RouteKind::kConstrainedCounterfactual) {
    throw UsageError("--feature is required for constrained counterfactuals");
  }
  task.entry.route = task.route;

  policy::ExecutionContext ctx;
  ctx.model = &bundle->forest;
  ctx.schema = &schema;
  ctx.sampler = bundle->sampler.get();
  ctx.model_card = &bundle->card;
  ctx.datasheet = &bundle->datasheet;
  ctx.config = config.explainers;
  const auto payload = policy::Execute(task, ctx);
  const auto templates = engine.templates();
  const auto rendered =
      nlg::Renderer(*templates, schema, config.chart_top_n).Render(payload);
  if (o.json) {
    std::cout << Json{{"payload", payload.ToJson(schema)}, {"answer", rendered.ToJson()}}
                     .dump(2)
              << "\n";
  } else {
    PrintAnswer(std::cout, rendered.ToJson());
  }
  if (const auto* n = std::get_if<policy::NoticeBody>(&payload.body)) {
    if (n->key == "error") return kInternalError;
  }
  return kOk;
}

}  // namespace

void RegisterExplain(CLI::App& app, int& code) {
  auto o = std::make_shared<ExplainOptions>();
  auto* cmd = app.add_subcommand("explain", "Explain one profile");
  AddCommonOptions(cmd, o->common);
  cmd->add_option("--profile", o->profile, "JSON file {feature: value}");
  cmd->add_option("--set", o->set, "Feature=value (repeatable, overrides --profile)");
  cmd->add_option("--method", o->method,
                  "shap, anchor, counterfactual, constrained or predict")
      ->capture_default_str();
  cmd->add_option("--feature", o->feature, "Feature for constrained counterfactuals");
  cmd->add_option("--target", o->target, "Wanted class for counterfactuals");
  cmd->add_flag("--json", o->json, "Print payload and answer as JSON");
  cmd->callback([o, &code] { code = RunExplain(*o); });
}

}  // namespace convxai::cli
