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

#include "convxai/service/scenario.h"

#include <algorithm>

#include "convxai/error.h"
#include "convxai/nlg/templates.h"

namespace convxai::service {

Scenario LoadScenario(const std::filesystem::path& path) {
  const Json j = ReadJsonFile(path);
  Scenario s;
  try {
    s.name = j.value("name", path.stem().string());
    s.dataset = j.at("dataset").get<std::string>();
    if (j.contains("profile")) {
      for (const auto& [k, v] : j["profile"].items()) {
        s.profile.emplace_back(k, v.is_string() ? v.get<std::string>() : v.dump());
      }
    }
    for (const auto& t : j.at("turns")) {
      s.turns.push_back({t.at(0).get<int>(), t.at(1).get<std::string>()});
    }
  } catch (const Json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return s;
}

std::vector<std::string> ListScenarios(const std::filesystem::path& dir) {
  std::vector<std::string> out;
  std::error_code ec;
  for (const auto& e : std::filesystem::directory_iterator(dir, ec)) {
    if (e.path().extension() == ".json") out.push_back(e.path().stem().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool ScenarioResult::ok() const { return first_failure() == 0; }

std::size_t ScenarioResult::first_failure() const {
  for (std::size_t i = 0; i < turns.size(); ++i) {
    if (!turns[i].routed_ok || turns[i].leaked_placeholder) return i + 1;
  }
  return 0;
}

std::string ScenarioResult::Transcript() const {
  std::string out;
  if (!profile_announcement.empty()) out += "Agent: " + profile_announcement + "\n";
  for (const auto& t : turns) {
    out += "User: " + t.turn.text + "\n";
    out += "  [question " + std::to_string(t.actual_question_id) + ", expected " +
           std::to_string(t.turn.expected_question_id) +
           (t.routed_ok ? "" : ", MISMATCH") +
           (t.leaked_placeholder ? ", PLACEHOLDER LEAK" : "") + "]\n";
    out += "Agent: " + t.answer + "\n";
  }
  return out;
}

ScenarioResult RunScenario(Engine& engine, const Scenario& scenario) {
  ScenarioResult result;
  if (scenario.turns.empty() && scenario.profile.empty()) return result;
  const std::string id = engine.CreateSession(scenario.dataset);
  if (!scenario.profile.empty()) {
    result.profile_announcement = engine.SetProfile(id, scenario.profile).text;
  }
  for (const auto& turn : scenario.turns) {
    auto r = engine.Ask(id, turn.text);
    ScenarioTurnResult tr;
    tr.turn = turn;
    tr.actual_question_id = r.user.label.value_or(0);
    tr.answer = r.agent.text;
    tr.routed_ok = tr.actual_question_id == turn.expected_question_id;
    tr.leaked_placeholder = nlg::ContainsPlaceholder(r.agent.text);
    result.turns.push_back(std::move(tr));
  }
  return result;
}

}  // namespace convxai::service
