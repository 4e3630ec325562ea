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

#ifndef CONVXAI_POLICY_ROUTING_H_
#define CONVXAI_POLICY_ROUTING_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "convxai/corpus/phrase_bank.h"

namespace convxai::policy {

enum class RouteKind {
  kFeatureImportance,
  kTwoInstanceImportance,
  kCounterfactual,
  kConstrainedCounterfactual,
  kAnchor,
  kPrediction,
  kWhatIfPrediction,
  kModelCardLookup,
  kDataSheetLookup,
  kExternalKnowledge,
  kExternalValidation,
  kSystemContext,
  kUnsupported,
  // Not in the table: asks the user for something before answering.
  kClarification,
};

std::string_view RouteName(RouteKind kind);
RouteKind ParseRoute(std::string_view name);

struct RoutingEntry {
  int id = 0;
  RouteKind route = RouteKind::kUnsupported;
  // Card or datasheet field for lookups.
  std::string field;
  std::vector<std::string> required_slots;
  std::vector<std::string> optional_slots;
  // Key of the fixed notice text for routes without a method.
  std::string notice;
  // Attribution offered for a question it does not fully answer.
  bool caveat = false;
  std::string citation;
};

class RoutingTable {
 public:
  RoutingTable() = default;
  // Throws ValidationError (E_ROUTING) for duplicate ids, lookups without a
  // known field and notice routes without a notice key.
  explicit RoutingTable(std::vector<RoutingEntry> entries);

  const RoutingEntry& Entry(int question_id) const;
  bool Has(int question_id) const { return entries_.count(question_id) > 0; }
  const std::map<int, RoutingEntry>& entries() const { return entries_; }

  // Problems that make the table unusable with `bank`: a reference question
  // without a row, or two questions of one merged label routed differently.
  std::vector<std::string> CheckAgainst(const corpus::PhraseBank& bank) const;

 private:
  std::map<int, RoutingEntry> entries_;
};

RoutingTable LoadRoutingTable(const std::filesystem::path& path);

}  // namespace convxai::policy

#endif  // CONVXAI_POLICY_ROUTING_H_
