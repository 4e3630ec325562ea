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

#ifndef CONVXAI_TOOLS_COMMON_H_
#define CONVXAI_TOOLS_COMMON_H_

#include <iosfwd>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "convxai/nlg/render.h"
#include "convxai/service/config.h"

namespace convxai::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUserError = 1;
inline constexpr int kInternalError = 2;

// A problem with the invocation or its inputs; exits with kUserError.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string dataset = "adult";
};

void AddCommonOptions(CLI::App* cmd, CommonOptions& opts);

// Config from --config (or CONVXAI_CONFIG, or the built-in path) with --seed
// applied.
service::ServiceConfig LoadConfig(const CommonOptions& opts);

// Answer text plus a textual chart: one "+/-" line per bar.
void PrintAnswer(std::ostream& out, const Json& answer);

// Registration of the subcommands; each returns its exit code via `code`.
void RegisterChat(CLI::App& app, int& code);
void RegisterEval(CLI::App& app, int& code);
void RegisterExplain(CLI::App& app, int& code);
void RegisterScenario(CLI::App& app, int& code);
void RegisterServe(CLI::App& app, int& code);

}  // namespace convxai::cli

#endif  // CONVXAI_TOOLS_COMMON_H_
