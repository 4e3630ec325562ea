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

#ifndef CONVXAI_TABULAR_DATASET_H_
#define CONVXAI_TABULAR_DATASET_H_

#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "convxai/tabular/schema.h"

namespace convxai::tabular {

// Feature values aligned to schema order. Categorical values are stored as
// the index of the category in the feature's domain.
struct Instance {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  bool operator==(const Instance&) const = default;
};

struct ValidatedInstance {
  Instance instance;
  // Non-fatal findings, e.g. numeric values outside the declared range.
  std::vector<std::string> warnings;
};

using NamedValues = std::vector<std::pair<std::string, std::string>>;

// Builds an instance from feature name/value text. All problems (missing,
// unknown, duplicate, unparseable, out-of-domain categorical) are collected
// into a single ValidationError. Out-of-range numerics only warn.
ValidatedInstance ValidateInstance(const Schema& schema,
                                   const NamedValues& named_values);
ValidatedInstance ValidateInstance(
    const Schema& schema, const std::map<std::string, std::string>& named_values);

// Checks an already-typed instance against the schema; throws
// ValidationError for wrong width or categorical indices outside the domain.
std::vector<std::string> CheckInstance(const Schema& schema,
                                       const Instance& instance);

// Name/value text for every feature, in schema order.
NamedValues Describe(const Schema& schema, const Instance& instance);

struct Dataset {
  Schema schema;
  std::vector<Instance> rows;
  std::vector<int> labels;

  std::size_t size() const { return rows.size(); }
};

// Reads a CSV with a header row holding every schema feature plus the
// target column. Collects every offending row before failing.
Dataset LoadCsv(const std::filesystem::path& path, const Schema& schema);
Dataset ParseCsv(std::istream& in, const Schema& schema,
                 const std::string& source_name = "<csv>");

void WriteCsv(const Dataset& dataset, std::ostream& out);

// Subset by row indices, preserving order.
Dataset Subset(const Dataset& dataset, const std::vector<std::size_t>& rows);

}  // namespace convxai::tabular

#endif  // CONVXAI_TABULAR_DATASET_H_
