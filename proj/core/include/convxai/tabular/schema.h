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

#ifndef CONVXAI_TABULAR_SCHEMA_H_
#define CONVXAI_TABULAR_SCHEMA_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "convxai/io.h"

namespace convxai::tabular {

enum class FeatureKind { kNumeric, kCategorical };

struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::kNumeric;
  // Declared range for numeric features.
  double min = 0.0;
  double max = 0.0;
  // Domain for categorical features; values are stored as indices into it.
  std::vector<std::string> categories;
  bool is_mutable = true;
  // Decimal places counterfactual proposals are rounded to. Unset means no
  // rounding.
  std::optional<int> precision;

  bool numeric() const { return kind == FeatureKind::kNumeric; }
  // Exact match first, then case-insensitive. -1 when absent.
  int CategoryIndex(std::string_view value) const;
};

// How classes are phrased in generated answers, e.g. ">50K" becomes
// "an income of more than 50K".
struct ClassPhrase {
  std::string to_get;
  std::string outcome;
};

struct Vocabulary {
  std::string target_noun = "the prediction";
  std::string subject_outcome = "the prediction";
  std::map<std::string, ClassPhrase> classes;
};

class Schema {
 public:
  Schema() = default;
  // Throws ValidationError if the invariants do not hold: at least one
  // feature, at least two classes, unique names, lo <= hi, non-empty
  // categorical domains.
  Schema(std::vector<FeatureSpec> features, std::vector<std::string> classes,
         std::string target_name, Vocabulary vocabulary = {});

  const std::vector<FeatureSpec>& features() const { return features_; }
  const FeatureSpec& feature(std::size_t i) const { return features_.at(i); }
  std::size_t num_features() const { return features_.size(); }
  const std::vector<std::string>& classes() const { return classes_; }
  std::size_t num_classes() const { return classes_.size(); }
  const std::string& class_name(int c) const { return classes_.at(c); }
  const std::string& target_name() const { return target_name_; }
  const Vocabulary& vocabulary() const { return vocabulary_; }

  std::optional<std::size_t> FeatureIndex(std::string_view name) const;
  // Case-insensitive fallback as for categories.
  std::optional<int> ClassIndex(std::string_view label) const;

  // Stable hash over names, kinds, domains and classes. Models record it so
  // they refuse instances of a different schema.
  std::uint64_t Fingerprint() const;

  // Canonical text for a stored value (category name or shortest
  // round-trip number).
  std::string FormatValue(std::size_t feature, double value) const;

  ClassPhrase PhraseFor(int class_index) const;

  Json ToJson() const;
  static Schema FromJson(const Json& json);

 private:
  std::vector<FeatureSpec> features_;
  std::vector<std::string> classes_;
  std::string target_name_;
  Vocabulary vocabulary_;
};

Schema LoadSchema(const std::filesystem::path& path);

// Shortest representation that parses back to the same double.
std::string FormatNumber(double value);

bool EqualsIgnoreCase(std::string_view a, std::string_view b);

}  // namespace convxai::tabular

#endif  // CONVXAI_TABULAR_SCHEMA_H_
