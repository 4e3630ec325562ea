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

#include <iostream>

#include "common.h"
#include "convxai/service/engine.h"
#include "convxai/service/scenario.h"

namespace convxai::cli {
namespace {

struct ScenarioOptions {
  CommonOptions common;
  std::string name;
  std::string dir = CONVXAI_SCENARIO_DIR;
};

int RunScenarioCommand(const ScenarioOptions& o) {
  const auto available = service::ListScenarios(o.dir);
  const std::filesystem::path file = std::filesystem::path(o.dir) / (o.name + ".json");
  if (!std::filesystem::exists(file)) {
    std::string list;
    for (const auto& n : available) list += (list.empty() ? "" : ", ") + n;
    throw UsageError("unknown scenario '" + o.name + "'; available: " +
                     (list.empty() ? "none" : list));
  }
  const auto scenario = service::LoadScenario(file);
  service::Engine engine(LoadConfig(o.common));
  const auto result = service::RunScenario(engine, scenario);
  std::cout << result.Transcript();
  if (const std::size_t bad = result.first_failure(); bad > 0) {
    const auto& t = result.turns[bad - 1];
    std::cerr << "turn " << bad << " (\"" << t.turn.text << "\") "
              << (t.routed_ok ? "leaked a placeholder"
                              : "routed to question " +
                                    std::to_string(t.actual_question_id) +
                                    ", expected " +
                                    std::to_string(t.turn.expected_question_id))
              << "\n";
    return kUserError;
  }
  return kOk;
}

}  // namespace

void RegisterScenario(CLI::App& app, int& code) {
  auto o = std::make_shared<ScenarioOptions>();
  auto* cmd = app.add_subcommand("scenario", "Replay a scripted conversation");
  AddCommonOptions(cmd, o->common);
  cmd->add_option("name", o->name, "Scenario name")->required();
  cmd->add_option("--dir", o->dir, "Scenario directory")->capture_default_str();
  cmd->callback([o, &code] { code = RunScenarioCommand(*o); });
}

}  // namespace convxai::cli
