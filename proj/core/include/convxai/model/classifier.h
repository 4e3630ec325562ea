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

#ifndef CONVXAI_MODEL_CLASSIFIER_H_
#define CONVXAI_MODEL_CLASSIFIER_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "convxai/tabular/dataset.h"

namespace convxai::model {

// Black-box probabilistic classifier. Explainers only see this interface.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual std::size_t num_classes() const = 0;
  virtual std::vector<double> PredictProba(const tabular::Instance& x) const = 0;
  // Defaults to the arg-max of PredictProba.
  virtual int Predict(const tabular::Instance& x) const;

  // Optional exact shortcut for attribution. Returns, for every coalition
  // mask S over the features, the mean over `background` rows b of
  // P(target | x on S, b elsewhere). Models without a shortcut return
  // nullopt and callers fall back to evaluating PredictProba.
  virtual std::optional<std::vector<double>> CoalitionValues(
      const tabular::Instance& x, const std::vector<tabular::Instance>& background,
      int target) const {
    return std::nullopt;
  }
};

// Index of the largest value; the lowest index wins ties.
int ArgMax(const std::vector<double>& values);

// Adapts a callable; convenient for toy models in tests and benchmarks.
class FunctionClassifier : public Classifier {
 public:
  using Fn = std::function<std::vector<double>(const tabular::Instance&)>;

  FunctionClassifier(std::size_t num_classes, Fn fn)
      : num_classes_(num_classes), fn_(std::move(fn)) {}

  std::size_t num_classes() const override { return num_classes_; }
  std::vector<double> PredictProba(const tabular::Instance& x) const override {
    return fn_(x);
  }

 private:
  std::size_t num_classes_;
  Fn fn_;
};

}  // namespace convxai::model

#endif  // CONVXAI_MODEL_CLASSIFIER_H_
