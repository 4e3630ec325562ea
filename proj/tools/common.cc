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

#include "common.h"

#include <cstdlib>
#include <iomanip>
#include <ostream>

namespace convxai::cli {

void AddCommonOptions(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config, "Service config file");
  cmd->add_option("--seed", opts.seed, "Master seed (overrides the config)");
  cmd->add_option("--dataset", opts.dataset, "Dataset id from the registry")
      ->capture_default_str();
}

service::ServiceConfig LoadConfig(const CommonOptions& opts) {
  std::string path = opts.config;
  if (path.empty()) {
    const char* env = std::getenv("CONVXAI_CONFIG");
    path = env != nullptr ? env : CONVXAI_DEFAULT_CONFIG;
  }
  auto config = service::LoadServiceConfig(path);
  if (opts.seed) config.seed = *opts.seed;
  return config;
}

void PrintAnswer(std::ostream& out, const Json& answer) {
  out << answer.value("text", std::string()) << "\n";
  for (const char* key : {"chart", "second_chart"}) {
    if (!answer.contains(key)) continue;
    const auto& chart = answer[key];
    if (std::string(key) == "second_chart") out << "  second profile:\n";
    for (const auto& item : chart["items"]) {
      const double v = item["value"].get<double>();
      out << "  " << (v > 0 ? "+" : "-") << " " << std::left << std::setw(16)
          << item["feature"].get<std::string>() << " "
          << std::setw(16) << item["display"].get<std::string>() << std::right
          << std::showpos << std::fixed << std::setprecision(4) << v
          << std::noshowpos << std::defaultfloat << "\n";
    }
  }
  if (answer.contains("diff_table")) {
    for (const auto& row : answer["diff_table"]) {
      bool any = false;
      for (bool c : row["changed"]) any = any || c;
      if (!any) continue;
      out << "  " << row["feature"].get<std::string>() << ": "
          << row["original"].get<std::string>() << " ->";
      for (std::size_t i = 0; i < row["proposed"].size(); ++i) {
        out << " " << (row["changed"][i].get<bool>()
                           ? row["proposed"][i].get<std::string>()
                           : std::string("."));
      }
      out << "\n";
    }
  }
}

}  // namespace convxai::cli
