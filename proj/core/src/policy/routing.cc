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

#include "convxai/policy/routing.h"

#include <algorithm>
#include <array>
#include <utility>

#include "convxai/error.h"
#include "convxai/io.h"
#include "convxai/model/model_card.h"

namespace convxai::policy {
namespace {

constexpr std::array<std::pair<RouteKind, std::string_view>, 14> kNames = {{
    {RouteKind::kFeatureImportance, "FeatureImportance"},
    {RouteKind::kTwoInstanceImportance, "TwoInstanceImportance"},
    {RouteKind::kCounterfactual, "Counterfactual"},
    {RouteKind::kConstrainedCounterfactual, "ConstrainedCounterfactual"},
    {RouteKind::kAnchor, "Anchor"},
    {RouteKind::kPrediction, "Prediction"},
    {RouteKind::kWhatIfPrediction, "WhatIfPrediction"},
    {RouteKind::kModelCardLookup, "ModelCardLookup"},
    {RouteKind::kDataSheetLookup, "DataSheetLookup"},
    {RouteKind::kExternalKnowledge, "ExternalKnowledge"},
    {RouteKind::kExternalValidation, "ExternalValidation"},
    {RouteKind::kSystemContext, "SystemContext"},
    {RouteKind::kUnsupported, "Unsupported"},
    {RouteKind::kClarification, "Clarification"},
}};

const std::vector<std::string> kDataSheetFields = {
    "source", "label_provenance", "biases_limitations", "sample_size",
    "excluded_data"};

const std::vector<std::string> kSlotNames = {"feature", "value", "class",
                                             "second_instance"};

bool Contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

std::string_view RouteName(RouteKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "Unknown";
}

RouteKind ParseRoute(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name && k != RouteKind::kClarification) return k;
  }
  throw ValidationError("E_ROUTING", {"unknown route: " + std::string(name)});
}

RoutingTable::RoutingTable(std::vector<RoutingEntry> entries) {
  std::vector<std::string> problems;
  for (auto& e : entries) {
    const std::string where = "question " + std::to_string(e.id);
    if (entries_.count(e.id)) {
      problems.push_back(where + ": duplicate row");
      continue;
    }
    if (e.route == RouteKind::kModelCardLookup &&
        !Contains(model::ModelCard::FieldNames(), e.field)) {
      problems.push_back(where + ": unknown model card field '" + e.field + "'");
    }
    if (e.route == RouteKind::kDataSheetLookup &&
        !Contains(kDataSheetFields, e.field)) {
      problems.push_back(where + ": unknown datasheet field '" + e.field + "'");
    }
    const bool needs_notice = e.route == RouteKind::kUnsupported ||
                              e.route == RouteKind::kExternalKnowledge ||
                              e.route == RouteKind::kExternalValidation ||
                              e.route == RouteKind::kSystemContext;
    if (needs_notice && e.notice.empty()) {
      problems.push_back(where + ": route needs a notice key");
    }
    for (const auto* list : {&e.required_slots, &e.optional_slots}) {
      for (const auto& s : *list) {
        if (!Contains(kSlotNames, s)) {
          problems.push_back(where + ": unknown slot '" + s + "'");
        }
      }
    }
    entries_.emplace(e.id, std::move(e));
  }
  if (!problems.empty()) throw ValidationError("E_ROUTING", problems);
}

const RoutingEntry& RoutingTable::Entry(int question_id) const {
  auto it = entries_.find(question_id);
  if (it == entries_.end()) {
    // The table must be total; a gap is a deployment bug.
    throw Error("E_ROUTING",
                "no routing row for question " + std::to_string(question_id));
  }
  return it->second;
}

std::vector<std::string> RoutingTable::CheckAgainst(
    const corpus::PhraseBank& bank) const {
  std::vector<std::string> problems;
  for (const auto& [id, ref] : bank.references()) {
    if (!Has(id)) problems.push_back("question " + std::to_string(id) + " has no row");
  }
  for (const auto& [label, ids] : bank.label_map()) {
    const RoutingEntry* first = nullptr;
    for (int id : ids) {
      if (!Has(id)) continue;
      const auto& e = Entry(id);
      if (first == nullptr) {
        first = &e;
      } else if (e.route != first->route || e.field != first->field) {
        problems.push_back("label " + std::to_string(label) +
                           ": questions " + std::to_string(first->id) +
                           " and " + std::to_string(id) + " route differently");
      }
    }
  }
  return problems;
}

RoutingTable LoadRoutingTable(const std::filesystem::path& path) {
  std::vector<RoutingEntry> entries;
  ForEachJsonLine(path, [&](const Json& j, int line) {
    RoutingEntry e;
    try {
      e.id = j.at("id").get<int>();
      e.route = ParseRoute(j.at("route").get<std::string>());
      e.field = j.value("field", std::string());
      e.required_slots =
          j.value("required_slots", std::vector<std::string>{});
      e.optional_slots =
          j.value("optional_slots", std::vector<std::string>{});
      e.notice = j.value("notice", std::string());
      e.caveat = j.value("caveat", false);
      e.citation = j.value("citation", std::string());
    } catch (const Json::exception& ex) {
      throw ParseError(path.string() + ":" + std::to_string(line) + ": " +
                       ex.what());
    }
    entries.push_back(std::move(e));
  });
  return RoutingTable(std::move(entries));
}

}  // namespace convxai::policy
