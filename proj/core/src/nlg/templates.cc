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

#include "convxai/nlg/templates.h"

#include <algorithm>

#include "convxai/error.h"
#include "convxai/io.h"

namespace convxai::nlg {
namespace {

bool NameChar(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

}  // namespace

const std::vector<std::string>& KnownPlaceholders() {
  static const std::vector<std::string> names = {
      // standard slots
      "feature", "value", "class", "first_class", "second_class", "changes",
      "relations", "profile", "details", "code", "term", "definition",
      "conditions", "precision", "coverage", "count", "mass", "rank", "n",
      "probability", "warnings", "features", "top", "first_top", "second_top",
      "class_metrics", "terms", "direction",
      // dataset vocabulary
      "target_noun", "subject", "class_to_get", "outcome"};
  return names;
}

std::vector<std::string> Placeholders(std::string_view text) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '{') continue;
    std::size_t j = i + 1;
    while (j < text.size() && NameChar(text[j])) ++j;
    if (j < text.size() && text[j] == '}' && j > i + 1) {
      out.emplace_back(text.substr(i + 1, j - i - 1));
      i = j;
    }
  }
  return out;
}

std::string Fill(std::string_view text, const Fields& fields) {
  std::string out;
  out.reserve(text.size() + 64);
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '{') {
      std::size_t j = i + 1;
      while (j < text.size() && NameChar(text[j])) ++j;
      if (j < text.size() && text[j] == '}' && j > i + 1) {
        const std::string name(text.substr(i + 1, j - i - 1));
        auto it = fields.find(name);
        if (it == fields.end()) {
          throw Error("E_TEMPLATE", "no value for placeholder {" + name + "}");
        }
        out += it->second;
        i = j;
        continue;
      }
      throw Error("E_TEMPLATE", "stray '{' in template text");
    }
    out += text[i];
  }
  return out;
}

bool ContainsPlaceholder(std::string_view text) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char open = text[i];
    if (open != '{' && open != '<') continue;
    const char close = open == '{' ? '}' : '>';
    std::size_t j = i + 1;
    while (j < text.size() && NameChar(text[j])) ++j;
    if (j > i + 1 && j < text.size() && text[j] == close) return true;
  }
  return false;
}

TemplateSet::TemplateSet(std::vector<Template> templates) {
  std::vector<std::string> problems;
  const auto& known = KnownPlaceholders();
  for (auto& t : templates) {
    if (by_id_.count(t.id)) {
      problems.push_back(t.id + ": duplicate id");
      continue;
    }
    if (t.text.empty()) problems.push_back(t.id + ": empty text");
    for (const auto& p : Placeholders(t.text)) {
      if (std::find(known.begin(), known.end(), p) == known.end()) {
        problems.push_back(t.id + ": unknown placeholder {" + p + "}");
      }
    }
    const auto open = std::count(t.text.begin(), t.text.end(), '{');
    const auto close = std::count(t.text.begin(), t.text.end(), '}');
    if (open != close || open != static_cast<long>(Placeholders(t.text).size())) {
      problems.push_back(t.id + ": unbalanced braces");
    }
    by_id_.emplace(t.id, std::move(t));
  }
  if (!problems.empty()) throw ValidationError("E_TEMPLATE", problems);
}

bool TemplateSet::Has(std::string_view id) const {
  return by_id_.find(id) != by_id_.end();
}

const Template& TemplateSet::Get(std::string_view id,
                                 std::string_view route) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) {
    throw Error("E_TEMPLATE", "no template '" + std::string(id) +
                                  "' for route " + std::string(route));
  }
  return it->second;
}

std::string TemplateSet::Render(std::string_view id, const Fields& fields,
                                std::string_view route) const {
  return Fill(Get(id, route).text, fields);
}

const std::vector<std::string>& TemplateSet::RequiredIds() {
  static const std::vector<std::string> ids = {
      "attribution.graph", "attribution.graph_multiclass",
      "attribution.empty", "attribution.dropped", "attribution.focus_up",
      "attribution.focus_down",
      "attribution.focus_zero", "attribution.caveat",
      "two_attributions.summary",
      "relation.too_low", "relation.too_high", "relation.not_suitable",
      "counterfactual.reasons_one", "counterfactual.reasons_many",
      "change.increase", "change.decrease", "change.categorical",
      "counterfactual.if", "counterfactual.alternative",
      "counterfactual.not_found", "counterfactual.versus_second",
      "constrained.found", "constrained.not_found",
      "anchor.success", "anchor.success_empty", "anchor.partial",
      "anchor.focus_in", "anchor.focus_out",
      "prediction.profile", "prediction.second", "prediction.what_if",
      "prediction.warnings", "prediction.unchanged", "profile.item",
      "datasheet.source", "datasheet.label_provenance",
      "datasheet.biases_limitations", "datasheet.sample_size",
      "datasheet.excluded_data", "model_card.default", "model_card.accuracy",
      "glossary.entry",
      "notice.error", "notice.internal", "clarification.no_match",
      "clarification.default"};
  return ids;
}

std::vector<std::string> TemplateSet::Missing() const {
  std::vector<std::string> out;
  for (const auto& id : RequiredIds()) {
    if (!Has(id)) out.push_back(id);
  }
  return out;
}

TemplateSet LoadTemplates(const std::filesystem::path& path) {
  std::vector<Template> list;
  ForEachJsonLine(path, [&](const Json& j, int line) {
    try {
      list.push_back({j.at("id").get<std::string>(),
                      j.value("route", std::string("any")),
                      j.at("text").get<std::string>()});
    } catch (const Json::exception& e) {
      throw ParseError(path.string() + ":" + std::to_string(line) + ": " +
                       e.what());
    }
  });
  TemplateSet set(std::move(list));
  auto missing = set.Missing();
  if (!missing.empty()) {
    for (auto& m : missing) m = "missing template " + m;
    throw ValidationError("E_TEMPLATE", missing);
  }
  return set;
}

TemplateStore::TemplateStore(std::filesystem::path path)
    : path_(std::move(path)) {
  stamp_ = std::filesystem::last_write_time(path_);
  set_ = std::make_shared<const TemplateSet>(LoadTemplates(path_));
}

std::shared_ptr<const TemplateSet> TemplateStore::Current() {
  std::lock_guard<std::mutex> lock(mu_);
  std::error_code ec;
  const auto stamp = std::filesystem::last_write_time(path_, ec);
  if (!ec && stamp != stamp_) {
    stamp_ = stamp;
    try {
      set_ = std::make_shared<const TemplateSet>(LoadTemplates(path_));
      last_error_.clear();
    } catch (const Error& e) {
      last_error_ = e.what();
    }
  }
  return set_;
}

std::string TemplateStore::last_error() {
  std::lock_guard<std::mutex> lock(mu_);
  return last_error_;
}

}  // namespace convxai::nlg
