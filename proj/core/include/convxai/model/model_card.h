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

#ifndef CONVXAI_MODEL_MODEL_CARD_H_
#define CONVXAI_MODEL_MODEL_CARD_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "convxai/io.h"
#include "convxai/model/evaluation.h"
#include "convxai/model/random_forest.h"
#include "convxai/tabular/datasheet.h"

namespace convxai::model {

// Model-specific text; empty fields fall back to generated or datasheet
// text.
struct ModelCardNotes {
  std::string limitations;
  std::string usage;
};

struct ModelCard {
  std::string algorithm;
  ForestConfig hyperparameters;
  std::string dataset_id;
  std::size_t n_rows = 0;
  std::size_t n_features = 0;
  std::string target_name;
  std::vector<std::string> classes;
  // Cross-validation metrics, not training-set metrics.
  CvMetrics cv;
  std::string limitations;
  std::string usage;
  // Copied from the datasheet.
  std::string excluded_data;

  // Phrase answering one card question. Known fields: algorithm,
  // hyperparameters, training_data, accuracy, error_rate, class_metrics,
  // confusion, mistakes, correct_situations, incorrect_situations,
  // limitations, capability, output_kind, output_meaning, usage,
  // excluded_data.
  std::optional<std::string> Field(std::string_view name) const;
  static const std::vector<std::string>& FieldNames();

  Json ToJson() const;
  static ModelCard FromJson(const Json& json);
};

// Throws PreconditionError for an untrained model or missing metrics
// (cv.k == 0), ValidationError when metrics fall outside [0, 1].
ModelCard BuildModelCard(const RandomForest& model, const CvMetrics& cv,
                         const tabular::DataSheet& datasheet,
                         std::string dataset_id, std::size_t n_rows,
                         const ModelCardNotes& notes = {});

}  // namespace convxai::model

#endif  // CONVXAI_MODEL_MODEL_CARD_H_
