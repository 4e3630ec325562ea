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

#include "convxai/tabular/datasheet.h"

#include "convxai/error.h"
#include "convxai/tabular/dataset.h"

namespace convxai::tabular {

std::optional<std::string> DataSheet::Field(std::string_view name) const {
  if (name == "source") return source;
  if (name == "label_provenance") return label_provenance;
  if (name == "biases_limitations") return biases_limitations;
  if (name == "sample_size") return std::to_string(sample_size);
  if (name == "excluded_data") return excluded_data;
  return std::nullopt;
}

Json DataSheet::ToJson() const {
  return {{"format", "convxai.datasheet/1"},
          {"source", source},
          {"label_provenance", label_provenance},
          {"biases_limitations", biases_limitations},
          {"sample_size", sample_size},
          {"excluded_data", excluded_data}};
}

DataSheet DataSheet::FromJson(const Json& json) {
  DataSheet s;
  s.source = json.value("source", "");
  s.label_provenance = json.value("label_provenance", "");
  s.biases_limitations = json.value("biases_limitations", "");
  s.sample_size = json.value("sample_size", 0LL);
  s.excluded_data = json.value("excluded_data", "");
  return s;
}

DataSheet LoadDataSheet(const std::filesystem::path& path) {
  const Json json = ReadJsonFile(path);
  try {
    return DataSheet::FromJson(json);
  } catch (const Json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void CheckDataSheet(const DataSheet& sheet, const Dataset& dataset) {
  if (sheet.sample_size != static_cast<long long>(dataset.size())) {
    throw ValidationError(
        "E_DATASHEET",
        {"datasheet sample_size " + std::to_string(sheet.sample_size) +
         " differs from " + std::to_string(dataset.size()) + " rows"});
  }
}

}  // namespace convxai::tabular
