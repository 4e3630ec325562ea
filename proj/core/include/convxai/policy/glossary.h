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

#ifndef CONVXAI_POLICY_GLOSSARY_H_
#define CONVXAI_POLICY_GLOSSARY_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace convxai::policy {

struct GlossaryEntry {
  std::string term;
  std::string definition;
};

class Glossary {
 public:
  Glossary() = default;
  explicit Glossary(std::vector<GlossaryEntry> entries);

  // Longest term occurring in `text` as whole words, case-insensitive.
  std::optional<GlossaryEntry> Find(std::string_view text) const;
  const std::vector<GlossaryEntry>& entries() const { return entries_; }

 private:
  std::vector<GlossaryEntry> entries_;
};

Glossary LoadGlossary(const std::filesystem::path& path);

}  // namespace convxai::policy

#endif  // CONVXAI_POLICY_GLOSSARY_H_
