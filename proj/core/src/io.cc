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

#include "convxai/io.h"

#include <fstream>
#include <sstream>

#include "convxai/error.h"

namespace convxai {

ValidationError::ValidationError(std::vector<std::string> problems)
    : ValidationError("E_VALIDATION", std::move(problems)) {}

namespace {

std::string JoinProblems(const std::vector<std::string>& problems) {
  std::string out = "validation failed";
  for (std::size_t i = 0; i < problems.size(); ++i) {
    out += i == 0 ? ": " : "; ";
    out += problems[i];
  }
  return out;
}

}  // namespace

ValidationError::ValidationError(std::string code,
                                 std::vector<std::string> problems)
    : Error(std::move(code), JoinProblems(problems)),
      problems_(std::move(problems)) {}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json ReadJsonFile(const std::filesystem::path& path) {
  const std::string text = ReadFile(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void ForEachJsonLine(const std::filesystem::path& path,
                     const std::function<void(const Json&, int)>& visit) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json record;
    try {
      record = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " +
                       e.what());
    }
    if (!record.is_object()) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": expected a JSON object");
    }
    try {
      visit(record, line_no);
    } catch (const Json::exception& e) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " +
                       e.what());
    }
  }
}

std::filesystem::path ResolveRelative(const std::filesystem::path& anchor,
                                      const std::string& relative) {
  std::filesystem::path p(relative);
  if (p.is_absolute()) return p;
  return anchor.parent_path() / p;
}

}  // namespace convxai
