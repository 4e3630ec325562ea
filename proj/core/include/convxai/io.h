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

#ifndef CONVXAI_IO_H_
#define CONVXAI_IO_H_

#include <filesystem>
#include <functional>
#include <string>

#include "json.hpp"

namespace convxai {

using Json = nlohmann::json;

// Reads a whole file. Throws IoError when it cannot be opened.
std::string ReadFile(const std::filesystem::path& path);

// Parses a JSON document, reporting the file name on failure.
Json ReadJsonFile(const std::filesystem::path& path);

// Visits every non-blank line of a JSON-lines file. The callback receives
// the parsed object and its 1-based line number. Parse failures raise
// ParseError with "<file>:<line>" context.
void ForEachJsonLine(const std::filesystem::path& path,
                     const std::function<void(const Json&, int)>& visit);

// Resolves `relative` against the directory containing `anchor` unless it is
// already absolute.
std::filesystem::path ResolveRelative(const std::filesystem::path& anchor,
                                      const std::string& relative);

}  // namespace convxai

#endif  // CONVXAI_IO_H_
