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

#ifndef CONVXAI_NLG_TEMPLATES_H_
#define CONVXAI_NLG_TEMPLATES_H_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace convxai::nlg {

// Text with {name} placeholders. `route` is the route name it serves, or
// "any" for shared pieces.
struct Template {
  std::string id;
  std::string route;
  std::string text;
};

using Fields = std::map<std::string, std::string>;

// Placeholder names a template may use.
const std::vector<std::string>& KnownPlaceholders();

// Names of the {...} placeholders in `text`, in order of appearance.
std::vector<std::string> Placeholders(std::string_view text);

// Replaces every placeholder. Throws Error("E_TEMPLATE") if one has no
// value, so raw placeholders never reach the user.
std::string Fill(std::string_view text, const Fields& fields);

// True if `text` still holds a {name} or <name> placeholder. Class labels
// such as "<=50K" are not placeholders.
bool ContainsPlaceholder(std::string_view text);

class TemplateSet {
 public:
  TemplateSet() = default;
  // Throws ValidationError("E_TEMPLATE") for duplicate ids, empty text,
  // unknown placeholders or unbalanced braces.
  explicit TemplateSet(std::vector<Template> templates);

  bool Has(std::string_view id) const;
  // Throws Error("E_TEMPLATE") naming the id and route.
  const Template& Get(std::string_view id, std::string_view route = "any") const;
  std::string Render(std::string_view id, const Fields& fields,
                     std::string_view route = "any") const;
  std::size_t size() const { return by_id_.size(); }

  // Ids the renderer needs; a set missing one is rejected at load time.
  static const std::vector<std::string>& RequiredIds();
  std::vector<std::string> Missing() const;

 private:
  std::map<std::string, Template, std::less<>> by_id_;
};

// Reads {id, route, text[, comment]} lines and checks RequiredIds.
TemplateSet LoadTemplates(const std::filesystem::path& path);

// Reloads the template file when its modification time changes. A broken
// edit keeps the previous set in place.
class TemplateStore {
 public:
  explicit TemplateStore(std::filesystem::path path);

  std::shared_ptr<const TemplateSet> Current();
  std::string last_error();

 private:
  std::filesystem::path path_;
  std::mutex mu_;
  std::filesystem::file_time_type stamp_;
  std::shared_ptr<const TemplateSet> set_;
  std::string last_error_;
};

}  // namespace convxai::nlg

#endif  // CONVXAI_NLG_TEMPLATES_H_
