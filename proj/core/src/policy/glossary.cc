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

#include "convxai/policy/glossary.h"

#include <algorithm>
#include <cctype>

#include "convxai/error.h"
#include "convxai/io.h"

namespace convxai::policy {
namespace {

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool IsWordChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

}  // namespace

Glossary::Glossary(std::vector<GlossaryEntry> entries)
    : entries_(std::move(entries)) {
  std::vector<std::string> problems;
  for (const auto& e : entries_) {
    if (e.term.empty() || e.definition.empty()) {
      problems.push_back("glossary entry with empty term or definition");
    }
  }
  if (!problems.empty()) throw ValidationError("E_GLOSSARY", problems);
  std::stable_sort(entries_.begin(), entries_.end(),
                   [](const auto& a, const auto& b) {
                     return a.term.size() > b.term.size();
                   });
}

std::optional<GlossaryEntry> Glossary::Find(std::string_view text) const {
  const std::string hay = Lower(text);
  for (const auto& e : entries_) {
    const std::string needle = Lower(e.term);
    for (std::size_t pos = hay.find(needle); pos != std::string::npos;
         pos = hay.find(needle, pos + 1)) {
      const std::size_t end = pos + needle.size();
      const bool left = pos == 0 || !IsWordChar(hay[pos - 1]);
      // Allow a plural "s".
      std::size_t stop = end;
      if (stop < hay.size() && hay[stop] == 's') ++stop;
      const bool right = end == hay.size() || !IsWordChar(hay[end]) ||
                         stop == hay.size() || !IsWordChar(hay[stop]);
      if (left && right) return e;
    }
  }
  return std::nullopt;
}

Glossary LoadGlossary(const std::filesystem::path& path) {
  std::vector<GlossaryEntry> entries;
  ForEachJsonLine(path, [&](const Json& j, int line) {
    try {
      entries.push_back({j.at("term").get<std::string>(),
                         j.at("definition").get<std::string>()});
    } catch (const Json::exception& e) {
      throw ParseError(path.string() + ":" + std::to_string(line) + ": " +
                       e.what());
    }
  });
  return Glossary(std::move(entries));
}

}  // namespace convxai::policy
