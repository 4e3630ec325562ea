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
#include <sstream>

#include "common.h"
#include "convxai/error.h"
#include "convxai/service/engine.h"

namespace convxai::cli {
namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

// "Age=39, Workclass=State-gov". Empty optional when a part has no '='.
std::optional<tabular::NamedValues> ParseAssignments(const std::string& text) {
  tabular::NamedValues out;
  std::string part;
  std::stringstream ss(text);
  while (std::getline(ss, part, text.find(';') != std::string::npos ? ';' : ',')) {
    part = Trim(part);
    if (part.empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string::npos) return std::nullopt;
    out.emplace_back(Trim(part.substr(0, eq)), Trim(part.substr(eq + 1)));
  }
  return out;
}

bool ValueFits(const tabular::FeatureSpec& f, const std::string& v) {
  if (!f.numeric()) return f.CategoryIndex(v) >= 0;
  try {
    std::size_t used = 0;
    std::stod(v, &used);
    return used == v.size();
  } catch (const std::exception&) {
    return false;
  }
}

// Asks for every feature; re-prompts until the value parses. Empty on EOF.
std::optional<tabular::NamedValues> PromptProfile(const tabular::Schema& schema,
                                                  std::istream& in,
                                                  std::ostream& out) {
  tabular::NamedValues values;
  for (const auto& f : schema.features()) {
    while (true) {
      out << f.name << " (";
      if (f.numeric()) {
        out << f.min << " to " << f.max;
      } else {
        for (std::size_t i = 0; i < f.categories.size(); ++i) {
          out << (i > 0 ? ", " : "") << f.categories[i];
        }
      }
      out << "): " << std::flush;
      std::string line;
      if (!std::getline(in, line)) return std::nullopt;
      line = Trim(line);
      if (ValueFits(f, line)) {
        values.emplace_back(f.name, line);
        break;
      }
      out << "  '" << line << "' is not a valid " << f.name << ", try again.\n";
    }
  }
  return values;
}

int RunChat(const CommonOptions& opts, std::istream& in, std::ostream& out) {
  service::Engine engine(LoadConfig(opts));
  const std::string id = engine.CreateSession(opts.dataset);
  const auto& schema = engine.Bundle(opts.dataset)->schema();
  out << "Enter a profile with :profile (or :profile Feature=value, ...), a second "
         "one with :second, then ask questions. :quit leaves.\n";
  std::string line;
  while (true) {
    out << "> " << std::flush;
    if (!std::getline(in, line)) break;
    line = Trim(line);
    if (line.empty()) continue;
    if (line == ":quit" || line == ":exit") break;
    if (line == ":help") {
      out << "Features: ";
      for (std::size_t i = 0; i < schema.num_features(); ++i) {
        out << (i > 0 ? ", " : "") << schema.feature(i).name;
      }
      out << "\n";
      continue;
    }
    if (line.rfind(":profile", 0) == 0 || line.rfind(":second", 0) == 0) {
      const bool second = line.rfind(":second", 0) == 0;
      const std::string rest = Trim(line.substr(second ? 7 : 8));
      std::optional<tabular::NamedValues> values;
      if (rest.empty()) {
        values = PromptProfile(schema, in, out);
        if (!values) break;
      } else {
        values = ParseAssignments(rest);
        if (!values) {
          out << "Could not read the profile; use Feature=value pairs separated by "
                 "commas.\n";
          continue;
        }
      }
      try {
        out << engine.SetProfile(id, *values, second).text << "\n";
      } catch (const ValidationError& e) {
        for (const auto& p : e.problems()) out << "  " << p << "\n";
        out << "The profile was not recorded; please enter it again.\n";
      }
      continue;
    }
    const auto r = engine.Ask(id, line);
    PrintAnswer(out, r.agent.answer);
  }
  return kOk;
}

}  // namespace

void RegisterChat(CLI::App& app, int& code) {
  auto o = std::make_shared<CommonOptions>();
  auto* cmd = app.add_subcommand("chat", "Interactive conversation in the terminal");
  AddCommonOptions(cmd, *o);
  cmd->callback([o, &code] { code = RunChat(*o, std::cin, std::cout); });
}

}  // namespace convxai::cli
