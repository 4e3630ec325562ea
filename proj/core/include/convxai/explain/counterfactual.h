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

#ifndef CONVXAI_EXPLAIN_COUNTERFACTUAL_H_
#define CONVXAI_EXPLAIN_COUNTERFACTUAL_H_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "convxai/io.h"
#include "convxai/model/classifier.h"
#include "convxai/tabular/sampler.h"

namespace convxai::explain {

struct FeatureChange {
  std::size_t feature = 0;
  double old_value = 0.0;
  double new_value = 0.0;
};

struct Counterfactual {
  tabular::Instance cf_instance;
  int target_class = 0;
  std::vector<FeatureChange> changed;
  std::size_t sparsity = 0;
  // MAD-scaled L1 over numerics plus the number of changed categoricals.
  double proximity = 0.0;

  Json ToJson(const tabular::Schema& schema) const;
};

struct CfConstraints {
  // Unset means every mutable feature.
  std::optional<std::set<std::size_t>> allowed_features;
  std::set<std::size_t> immutable_features;
  int k = 3;
};

struct CfConfig {
  int pop_size = 50;
  int generations = 100;
  double lambda_prox = 0.5;
  double lambda_div = 0.1;
  std::uint64_t seed = 17;
  // Numeric grid size for single-feature search.
  int grid_resolution = 200;

  Json ToJson() const;
  static CfConfig FromJson(const Json& json);
};

struct CfResult {
  // Valid counterfactuals, closest first. Empty means NotFound.
  std::vector<Counterfactual> counterfactuals;
  // Closest invalid candidate seen, kept for diagnostics on NotFound.
  std::optional<tabular::Instance> best_invalid;
  double best_invalid_probability = 0.0;

  bool found() const { return !counterfactuals.empty(); }
  Json ToJson(const tabular::Schema& schema) const;
};

// Distance used for proximity, with per-feature MAD scales from `sampler`.
double CfDistance(const tabular::Schema& schema,
                  const tabular::PerturbationSampler& sampler,
                  const tabular::Instance& a, const tabular::Instance& b);

// Builds the Counterfactual record (diff, sparsity, proximity) for `cf`.
Counterfactual MakeCounterfactual(const tabular::PerturbationSampler& sampler,
                                  const tabular::Instance& original,
                                  const tabular::Instance& cf,
                                  int target_class);

// Genetic search for up to constraints.k diverse counterfactuals. Schema
// features marked immutable are always excluded. Throws PreconditionError
// when the instance is already predicted as target_class, the target is
// unknown, or allowed and immutable features overlap.
CfResult Counterfactuals(const model::Classifier& model,
                         const tabular::Instance& instance, int target_class,
                         const tabular::PerturbationSampler& sampler,
                         const CfConstraints& constraints = {},
                         const CfConfig& config = {});

// Varies only `feature`: all other categories, or a grid over the widened
// numeric range refined to the closest flipping value. Throws
// PreconditionError for an immutable feature.
CfResult ConstrainedCounterfactual(const model::Classifier& model,
                                   const tabular::Instance& instance,
                                   int target_class, std::size_t feature,
                                   const tabular::PerturbationSampler& sampler,
                                   const CfConfig& config = {});

// [lo - 0.2 range, hi + 0.2 range] for a numeric feature.
std::pair<double, double> SearchBounds(const tabular::FeatureSpec& feature);

}  // namespace convxai::explain

#endif  // CONVXAI_EXPLAIN_COUNTERFACTUAL_H_
