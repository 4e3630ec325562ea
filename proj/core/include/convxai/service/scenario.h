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

#ifndef CONVXAI_SERVICE_SCENARIO_H_
#define CONVXAI_SERVICE_SCENARIO_H_

#include <filesystem>
#include <string>
#include <vector>

#include "convxai/service/engine.h"
#include "convxai/tabular/dataset.h"

namespace convxai::service {

struct ScenarioTurn {
  int expected_question_id = 0;
  std::string text;
};

// Scripted conversation: {name, dataset, profile: {feature: value},
// turns: [[expected_question_id, user_text], ...]}.
struct Scenario {
  std::string name;
  std::string dataset;
  tabular::NamedValues profile;
  std::vector<ScenarioTurn> turns;
};

Scenario LoadScenario(const std::filesystem::path& path);

// Names of the *.json scripts in `dir`, sorted.
std::vector<std::string> ListScenarios(const std::filesystem::path& dir);

struct ScenarioTurnResult {
  ScenarioTurn turn;
  // 0 when the question found no match.
  int actual_question_id = 0;
  std::string answer;
  bool routed_ok = false;
  bool leaked_placeholder = false;
};

struct ScenarioResult {
  std::string profile_announcement;
  std::vector<ScenarioTurnResult> turns;

  bool ok() const;
  // 1-based index of the first failing turn, 0 when all passed.
  std::size_t first_failure() const;
  std::string Transcript() const;
};

// Replays the script in a fresh session of `engine`.
ScenarioResult RunScenario(Engine& engine, const Scenario& scenario);

}  // namespace convxai::service

#endif  // CONVXAI_SERVICE_SCENARIO_H_
