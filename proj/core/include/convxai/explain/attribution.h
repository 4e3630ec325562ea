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

#ifndef CONVXAI_EXPLAIN_ATTRIBUTION_H_
#define CONVXAI_EXPLAIN_ATTRIBUTION_H_

#include <cstdint>
#include <vector>

#include "convxai/io.h"
#include "convxai/model/classifier.h"
#include "convxai/tabular/dataset.h"

namespace convxai::explain {

struct Attribution {
  // Expected probability of target_class over the background.
  double base_value = 0.0;
  // Probability of target_class for the instance.
  double prediction = 0.0;
  std::vector<double> phi;
  int target_class = 0;
  tabular::Instance instance;
  // True when every coalition was enumerated.
  bool exact = false;

  // |base + sum(phi) - prediction|
  double EfficiencyResidual() const;
  Json ToJson() const;
};

struct ShapConfig {
  int n_samples = 2048;
  // Enumerate all coalitions when the feature count is at most this.
  int exact_below = 12;
  std::uint64_t seed = 11;
  // Use a model's CoalitionValues shortcut when it has one.
  bool allow_model_shortcut = true;

  Json ToJson() const;
  static ShapConfig FromJson(const Json& json);
};

// Kernel SHAP with marginal imputation from `background`. Solves the
// Shapley-kernel weighted least squares problem with base + sum(phi) = f(x)
// as a hard constraint. Throws PreconditionError for an empty background or
// a bad target, NumericError when the system is singular.
Attribution KernelShap(const model::Classifier& model,
                       const tabular::Instance& instance,
                       const std::vector<tabular::Instance>& background,
                       int target_class, const ShapConfig& config = {});

// Shapley values from the subset sum with factorial weights. Same value
// function as KernelShap. Refuses more than 12 features.
Attribution ExactShapley(const model::Classifier& model,
                         const tabular::Instance& instance,
                         const std::vector<tabular::Instance>& background,
                         int target_class);

constexpr int kMaxExactFeatures = 12;

// Mean over background rows b of P(target | x on mask, b elsewhere).
double CoalitionValue(const model::Classifier& model,
                      const tabular::Instance& instance,
                      const std::vector<tabular::Instance>& background,
                      int target_class, std::uint64_t mask);

}  // namespace convxai::explain

#endif  // CONVXAI_EXPLAIN_ATTRIBUTION_H_
