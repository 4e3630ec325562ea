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

#ifndef CONVXAI_MODEL_EVALUATION_H_
#define CONVXAI_MODEL_EVALUATION_H_

#include <cstdint>
#include <vector>

#include "convxai/io.h"
#include "convxai/model/random_forest.h"
#include "convxai/stats.h"

namespace convxai::model {

struct CvMetrics {
  int k = 0;
  MeanSd accuracy;
  MeanSd macro_f1;
  std::vector<double> fold_accuracy;
  // confusion[truth][predicted], summed over folds.
  std::vector<std::vector<long>> confusion;
  // From the summed confusion matrix, per class.
  std::vector<double> precision;
  std::vector<double> recall;
  double seconds = 0.0;

  Json ToJson() const;
  static CvMetrics FromJson(const Json& json);
};

// Row indices of k stratified folds: each class is shuffled with its own
// seeded stream and dealt round-robin.
std::vector<std::vector<std::size_t>> StratifiedRowFolds(
    const std::vector<int>& labels, int k, std::uint64_t seed);

// k-fold cross-validation of the forest. Throws PreconditionError for k < 2
// or more folds than rows, and when a training fold lacks a second class.
CvMetrics EvaluateCv(const tabular::Dataset& dataset,
                     const ForestConfig& config, int k);

}  // namespace convxai::model

#endif  // CONVXAI_MODEL_EVALUATION_H_
