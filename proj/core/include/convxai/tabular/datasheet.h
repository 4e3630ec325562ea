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

#ifndef CONVXAI_TABULAR_DATASHEET_H_
#define CONVXAI_TABULAR_DATASHEET_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "convxai/io.h"

namespace convxai::tabular {

struct Dataset;

// Dataset documentation used to answer data-generation questions.
struct DataSheet {
  std::string source;
  std::string label_provenance;
  std::string biases_limitations;
  long long sample_size = 0;
  std::string excluded_data;

  // Text of a named field ("source", "label_provenance",
  // "biases_limitations", "sample_size", "excluded_data").
  std::optional<std::string> Field(std::string_view name) const;

  Json ToJson() const;
  static DataSheet FromJson(const Json& json);
};

DataSheet LoadDataSheet(const std::filesystem::path& path);

// Throws ValidationError when sample_size disagrees with the row count.
void CheckDataSheet(const DataSheet& sheet, const Dataset& dataset);

}  // namespace convxai::tabular

#endif  // CONVXAI_TABULAR_DATASHEET_H_
