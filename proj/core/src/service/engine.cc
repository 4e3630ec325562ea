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

#include "convxai/service/engine.h"

#include <cstdio>
#include <fstream>
#include <random>

#include "convxai/error.h"

namespace convxai::service {
namespace {

std::uint64_t Fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string Hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string NewSessionId() {
  static std::mutex mu;
  static std::random_device rd;
  std::lock_guard<std::mutex> lock(mu);
  std::uint64_t a = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  std::uint64_t b = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  return Hex(a) + Hex(b);
}

void WriteAtomically(const std::filesystem::path& path, const std::string& text) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp);
    out << text;
    if (!out.flush()) throw IoError("cannot write " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string_view RoleName(Role r) { return r == Role::kUser ? "user" : "agent"; }

Turn AgentTurn(std::string text, Json provenance, Json answer) {
  Turn t;
  t.role = Role::kAgent;
  t.text = std::move(text);
  t.provenance = std::move(provenance);
  t.answer = std::move(answer);
  t.timestamp = nlu::UtcTimestamp();
  return t;
}

}  // namespace

Json Turn::ToJson() const {
  Json j{{"role", RoleName(role)}, {"text", text}, {"timestamp", timestamp}};
  if (label) j["label"] = *label;
  if (confidence) j["confidence"] = *confidence;
  if (!provenance.is_null()) j["provenance"] = provenance;
  if (!answer.is_null()) j["answer"] = answer;
  return j;
}

Session::Session(std::string id, std::shared_ptr<const ModelBundle> bundle)
    : id_(std::move(id)), bundle_(std::move(bundle)),
      created_at_(nlu::UtcTimestamp()) {}

PipelineOutput AnswerQuestion(const PipelineParts& parts,
                              const policy::SessionState& state,
                              const std::string& text) {
  const auto& bundle = *parts.bundle;
  const auto& schema = bundle.schema();
  nlg::Renderer renderer(*parts.templates, schema, parts.chart_top_n);
  PipelineOutput out;
  out.match = parts.matcher->Match(text, schema);
  if (out.match.IsNoMatch()) {
    out.rendered.text = renderer.NoMatch();
    return out;
  }
  const auto task = policy::RouteQuestion(*parts.routing, out.match.label,
                                          out.match.question.slots, state,
                                          schema, text);
  policy::ExecutionContext ctx;
  ctx.model = &bundle.forest;
  ctx.schema = &schema;
  ctx.sampler = bundle.sampler.get();
  ctx.model_card = &bundle.card;
  ctx.datasheet = &bundle.datasheet;
  ctx.glossary = parts.glossary;
  ctx.config = *parts.explainers;
  out.payload = policy::Execute(task, ctx);
  out.rendered = renderer.Render(*out.payload);
  return out;
}

Engine::Engine(ServiceConfig config)
    : config_(std::move(config)),
      templates_(config_.templates),
      unmatched_(config_.unmatched_log) {
  registry_ = LoadRegistry(config_.registry);
  bank_ = corpus::LoadPhraseBank(config_.phrase_bank);
  if (!config_.merge_spec.empty()) {
    bank_ = corpus::MergeLabels(bank_, corpus::LoadMergeSpec(config_.merge_spec));
  }
  routing_ = policy::LoadRoutingTable(config_.routing);
  auto problems = routing_.CheckAgainst(bank_);
  if (!problems.empty()) throw ValidationError("E_ROUTING", problems);
  if (!config_.glossary.empty()) glossary_ = policy::LoadGlossary(config_.glossary);
  const auto& artifact = config_.matcher_artifact;
  if (!artifact.empty() && std::filesystem::exists(artifact)) {
    matcher_ = nlu::Matcher::Load(artifact);
  } else {
    matcher_ = nlu::Matcher::Train(bank_, config_.matcher);
    if (!artifact.empty()) {
      if (artifact.has_parent_path()) {
        std::filesystem::create_directories(artifact.parent_path());
      }
      matcher_.Save(artifact);
    }
  }
}

Engine::~Engine() = default;

std::shared_ptr<const nlg::TemplateSet> Engine::templates() const {
  return templates_.Current();
}

std::shared_ptr<ModelBundle> Engine::BuildBundle(
    const std::string& dataset_id, const model::ForestConfig& forest,
    const std::string& key) const {
  const auto& entry = registry_.Get(dataset_id);
  auto b = std::make_shared<ModelBundle>();
  b->dataset_id = dataset_id;
  b->key = key;
  const auto schema = tabular::LoadSchema(entry.schema);
  b->dataset = tabular::LoadCsv(entry.csv, schema);
  b->datasheet = tabular::LoadDataSheet(entry.datasheet);
  tabular::CheckDataSheet(b->datasheet, b->dataset);

  std::filesystem::path forest_file, card_file;
  if (!config_.artifact_dir.empty()) {
    forest_file = config_.artifact_dir / (dataset_id + "-" + key + ".forest");
    card_file = config_.artifact_dir / (dataset_id + "-" + key + ".card.json");
  }
  bool loaded = false;
  if (!forest_file.empty() && std::filesystem::exists(forest_file) &&
      std::filesystem::exists(card_file)) {
    try {
      b->forest = model::RandomForest::Load(forest_file, b->schema());
      b->card = model::ModelCard::FromJson(ReadJsonFile(card_file));
      b->cv = b->card.cv;
      loaded = true;
    } catch (const Error&) {
      loaded = false;  // stale or damaged cache entry; retrain
    }
  }
  if (!loaded) {
    try {
      b->cv = model::EvaluateCv(b->dataset, forest, config_.cv_folds);
      b->forest = model::RandomForest::Train(b->dataset, forest);
      b->card = model::BuildModelCard(b->forest, b->cv, b->datasheet, dataset_id,
                                      b->dataset.size(), entry.notes);
    } catch (const ValidationError&) {
      throw;
    } catch (const Error& e) {
      throw Error("E_TRAINING", "training on " + dataset_id + " failed: " + e.what());
    }
    if (!forest_file.empty()) {
      std::filesystem::create_directories(config_.artifact_dir);
      b->forest.Save(forest_file);
      WriteAtomically(card_file, b->card.ToJson().dump(2));
    }
  }
  b->from_cache = loaded;
  b->sampler = std::make_unique<tabular::PerturbationSampler>(
      b->dataset, config_.seed, config_.background_size);
  return b;
}

std::shared_ptr<const ModelBundle> Engine::Bundle(const std::string& dataset_id,
                                                  const Json& forest_overrides) {
  if (!registry_.Has(dataset_id)) {
    throw NotFoundError("unknown dataset '" + dataset_id + "'");
  }
  Json merged = config_.forest.ToJson();
  if (!forest_overrides.is_object()) {
    throw ValidationError("E_CONFIG", {"model config must be an object"});
  }
  merged.update(forest_overrides);
  const auto forest = model::ForestConfig::FromJson(merged);
  const std::string key = Hex(Fnv1a(dataset_id + "|" + forest.ToJson().dump() +
                                    "|" + std::to_string(config_.cv_folds) + "|" +
                                    std::to_string(config_.seed)));
  std::lock_guard<std::mutex> lock(bundles_mu_);
  auto it = bundles_.find(key);
  if (it != bundles_.end()) return it->second;
  auto bundle = BuildBundle(dataset_id, forest, key);
  bundles_.emplace(key, bundle);
  return bundle;
}

std::string Engine::CreateSession(const std::string& dataset_id,
                                  const Json& forest_overrides) {
  auto bundle = Bundle(dataset_id, forest_overrides);
  auto session = std::make_shared<Session>(NewSessionId(), std::move(bundle));
  std::lock_guard<std::mutex> lock(sessions_mu_);
  sessions_.emplace(session->id(), session);
  return session->id();
}

std::shared_ptr<Session> Engine::Find(const std::string& session_id) const {
  std::lock_guard<std::mutex> lock(sessions_mu_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) {
    throw NotFoundError("unknown session '" + session_id + "'");
  }
  return it->second;
}

Turn Engine::SetProfile(const std::string& session_id,
                        const tabular::NamedValues& values, bool second) {
  auto s = Find(session_id);
  const auto& bundle = s->bundle();
  auto v = tabular::ValidateInstance(bundle.schema(), values);
  const int predicted = bundle.forest.Predict(v.instance);
  auto templates = templates_.Current();
  nlg::Renderer renderer(*templates, bundle.schema(), config_.chart_top_n);

  policy::PredictionBody body;
  body.instance = v.instance;
  body.predicted_class = predicted;
  body.probabilities = bundle.forest.PredictProba(v.instance);
  body.warnings = v.warnings;
  body.second = second;
  policy::AnswerPayload payload{policy::RouteKind::kPrediction, 0, body};
  auto rendered = renderer.Render(payload);

  Json provenance{{"kind", second ? "second_profile" : "profile"},
                  {"predicted_class", bundle.schema().class_name(predicted)}};
  if (!v.warnings.empty()) provenance["warnings"] = v.warnings;
  std::lock_guard<std::mutex> lock(s->mu_);
  if (second) {
    s->state_.second = v.instance;
    s->state_.second_prediction = predicted;
  } else {
    s->state_.current = v.instance;
    s->state_.current_prediction = predicted;
  }
  Turn turn = AgentTurn(rendered.text, provenance, rendered.ToJson());
  s->history_.push_back(turn);
  return turn;
}

AskResult Engine::Ask(const std::string& session_id, const std::string& text) {
  auto s = Find(session_id);
  std::lock_guard<std::mutex> lock(s->mu_);
  AskResult result;
  result.user.role = Role::kUser;
  result.user.text = text;
  result.user.timestamp = nlu::UtcTimestamp();
  auto templates = templates_.Current();
  try {
    PipelineParts parts;
    parts.matcher = &matcher_;
    parts.routing = &routing_;
    parts.glossary = config_.glossary.empty() ? nullptr : &glossary_;
    parts.templates = templates.get();
    parts.bundle = &s->bundle();
    parts.explainers = &config_.explainers;
    parts.chart_top_n = config_.chart_top_n;
    auto out = AnswerQuestion(parts, s->state_, text);
    result.user.confidence = out.match.confidence;
    Json provenance;
    if (out.match.IsNoMatch()) {
      unmatched_.Append(out.match);
      provenance = {{"kind", "no_match"}, {"confidence", out.match.confidence}};
    } else {
      result.user.label = out.match.label;
      provenance = {{"question_id", out.match.label},
                    {"route", policy::RouteName(out.payload->route)},
                    {"confidence", out.match.confidence}};
      if (const auto* n = std::get_if<policy::NoticeBody>(&out.payload->body)) {
        if (!n->code.empty()) provenance["code"] = n->code;
      }
      result.payload = out.payload->ToJson(s->bundle().schema());
    }
    result.agent = AgentTurn(out.rendered.text, provenance, out.rendered.ToJson());
  } catch (const std::exception& e) {
    const auto* err = dynamic_cast<const Error*>(&e);
    const std::string code = err ? err->code() : "E_INTERNAL";
    std::string text_out;
    try {
      nlg::Renderer renderer(*templates, s->bundle().schema());
      text_out = renderer.InternalError(code);
    } catch (const std::exception&) {
      text_out = "Sorry, something went wrong on my side (" + code + ").";
    }
    result.agent = AgentTurn(text_out, {{"kind", "error"}, {"code", code}},
                             Json{{"text", text_out}});
  }
  s->history_.push_back(result.user);
  s->history_.push_back(result.agent);
  return result;
}

std::vector<Turn> Engine::History(const std::string& session_id) const {
  auto s = Find(session_id);
  std::lock_guard<std::mutex> lock(s->mu_);
  return s->history_;
}

Json Engine::SessionInfo(const std::string& session_id) const {
  auto s = Find(session_id);
  std::lock_guard<std::mutex> lock(s->mu_);
  const auto& b = s->bundle();
  return Json{{"id", s->id()},
              {"dataset", b.dataset_id},
              {"model_key", b.key},
              {"model_fingerprint", Hex(b.forest.Fingerprint())},
              {"cv_accuracy", b.cv.accuracy.mean},
              {"created_at", s->created_at()},
              {"has_profile", s->state_.current.has_value()},
              {"has_second_profile", s->state_.second.has_value()},
              {"turns", s->history_.size()}};
}

Json Engine::ListDatasets() const {
  Json out = Json::array();
  for (const auto& e : registry_.entries()) {
    out.push_back({{"id", e.id}});
  }
  return out;
}

Json Engine::DatasetSchema(const std::string& dataset_id) const {
  return tabular::LoadSchema(registry_.Get(dataset_id).schema).ToJson();
}

std::vector<Json> Engine::Unmatched(const std::string& token) const {
  if (config_.admin_token.empty() || token != config_.admin_token) {
    throw Error("E_AUTH", "admin token required");
  }
  return unmatched_.ReadAll();
}

}  // namespace convxai::service
