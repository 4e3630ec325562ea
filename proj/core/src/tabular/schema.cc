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

#include "convxai/tabular/schema.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include "convxai/error.h"

namespace convxai::tabular {

bool EqualsIgnoreCase(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

std::string FormatNumber(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

int FeatureSpec::CategoryIndex(std::string_view value) const {
  for (std::size_t i = 0; i < categories.size(); ++i) {
    if (categories[i] == value) return static_cast<int>(i);
  }
  for (std::size_t i = 0; i < categories.size(); ++i) {
    if (EqualsIgnoreCase(categories[i], value)) return static_cast<int>(i);
  }
  return -1;
}

Schema::Schema(std::vector<FeatureSpec> features,
               std::vector<std::string> classes, std::string target_name,
               Vocabulary vocabulary)
    : features_(std::move(features)),
      classes_(std::move(classes)),
      target_name_(std::move(target_name)),
      vocabulary_(std::move(vocabulary)) {
  std::vector<std::string> problems;
  if (features_.empty()) problems.push_back("schema needs at least 1 feature");
  if (classes_.size() < 2) problems.push_back("schema needs at least 2 classes");
  std::set<std::string> names;
  for (const auto& f : features_) {
    if (f.name.empty()) problems.push_back("feature with empty name");
    if (!names.insert(f.name).second) {
      problems.push_back("duplicate feature name: " + f.name);
    }
    if (f.numeric()) {
      if (!(f.min <= f.max)) {
        problems.push_back("feature " + f.name + ": min > max");
      }
    } else if (f.categories.empty()) {
      problems.push_back("feature " + f.name + ": empty category domain");
    } else {
      std::set<std::string> seen(f.categories.begin(), f.categories.end());
      if (seen.size() != f.categories.size()) {
        problems.push_back("feature " + f.name + ": duplicate categories");
      }
    }
  }
  std::set<std::string> class_set(classes_.begin(), classes_.end());
  if (class_set.size() != classes_.size()) {
    problems.push_back("duplicate class labels");
  }
  if (!problems.empty()) throw ValidationError("E_SCHEMA", std::move(problems));
}

std::optional<std::size_t> Schema::FeatureIndex(std::string_view name) const {
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (features_[i].name == name) return i;
  }
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (EqualsIgnoreCase(features_[i].name, name)) return i;
  }
  return std::nullopt;
}

std::optional<int> Schema::ClassIndex(std::string_view label) const {
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    if (classes_[i] == label) return static_cast<int>(i);
  }
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    if (EqualsIgnoreCase(classes_[i], label)) return static_cast<int>(i);
  }
  return std::nullopt;
}

namespace {

void HashBytes(std::uint64_t& h, std::string_view s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  h ^= 0xff;
  h *= 0x100000001b3ULL;
}

}  // namespace

std::uint64_t Schema::Fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& f : features_) {
    HashBytes(h, f.name);
    HashBytes(h, f.numeric() ? "n" : "c");
    for (const auto& c : f.categories) HashBytes(h, c);
  }
  HashBytes(h, "|classes|");
  for (const auto& c : classes_) HashBytes(h, c);
  return h;
}

std::string Schema::FormatValue(std::size_t feature, double value) const {
  const auto& f = features_.at(feature);
  if (f.numeric()) return FormatNumber(value);
  const auto idx = static_cast<std::size_t>(value);
  if (value < 0 || idx >= f.categories.size()) return "?";
  return f.categories[idx];
}

ClassPhrase Schema::PhraseFor(int class_index) const {
  const std::string& label = classes_.at(class_index);
  auto it = vocabulary_.classes.find(label);
  if (it != vocabulary_.classes.end()) return it->second;
  return ClassPhrase{label, label};
}

Json Schema::ToJson() const {
  Json features = Json::array();
  for (const auto& f : features_) {
    Json j = {{"name", f.name},
              {"kind", f.numeric() ? "numeric" : "categorical"},
              {"mutable", f.is_mutable}};
    if (f.numeric()) {
      j["min"] = f.min;
      j["max"] = f.max;
    } else {
      j["categories"] = f.categories;
    }
    if (f.precision) j["precision"] = *f.precision;
    features.push_back(std::move(j));
  }
  Json classes = Json::object();
  for (const auto& [label, phrase] : vocabulary_.classes) {
    classes[label] = {{"to_get", phrase.to_get}, {"outcome", phrase.outcome}};
  }
  return {{"format", "convxai.schema/1"},
          {"target", target_name_},
          {"classes", classes_},
          {"features", features},
          {"vocabulary",
           {{"target_noun", vocabulary_.target_noun},
            {"subject_outcome", vocabulary_.subject_outcome},
            {"classes", classes}}}};
}

Schema Schema::FromJson(const Json& json) {
  std::vector<FeatureSpec> features;
  for (const auto& jf : json.at("features")) {
    FeatureSpec f;
    f.name = jf.at("name").get<std::string>();
    const auto kind = jf.at("kind").get<std::string>();
    if (kind == "numeric") {
      f.kind = FeatureKind::kNumeric;
      f.min = jf.at("min").get<double>();
      f.max = jf.at("max").get<double>();
    } else if (kind == "categorical") {
      f.kind = FeatureKind::kCategorical;
      f.categories = jf.at("categories").get<std::vector<std::string>>();
    } else {
      throw ParseError("feature " + f.name + ": unknown kind '" + kind + "'");
    }
    f.is_mutable = jf.value("mutable", true);
    if (jf.contains("precision")) f.precision = jf.at("precision").get<int>();
    features.push_back(std::move(f));
  }
  Vocabulary vocab;
  if (json.contains("vocabulary")) {
    const auto& jv = json.at("vocabulary");
    vocab.target_noun = jv.value("target_noun", vocab.target_noun);
    vocab.subject_outcome = jv.value("subject_outcome", vocab.subject_outcome);
    if (jv.contains("classes")) {
      for (const auto& [label, jp] : jv.at("classes").items()) {
        vocab.classes[label] = ClassPhrase{jp.value("to_get", label),
                                           jp.value("outcome", label)};
      }
    }
  }
  return Schema(std::move(features),
                json.at("classes").get<std::vector<std::string>>(),
                json.at("target").get<std::string>(), std::move(vocab));
}

Schema LoadSchema(const std::filesystem::path& path) {
  const Json json = ReadJsonFile(path);
  try {
    return Schema::FromJson(json);
  } catch (const Json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace convxai::tabular
