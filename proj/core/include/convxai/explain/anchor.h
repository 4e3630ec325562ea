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

#ifndef CONVXAI_EXPLAIN_ANCHOR_H_
#define CONVXAI_EXPLAIN_ANCHOR_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "convxai/io.h"
#include "convxai/model/classifier.h"
#include "convxai/tabular/sampler.h"

namespace convxai::explain {

struct Predicate {
  std::size_t feature = 0;
  bool categorical = false;
  // Categorical: category index.
  double category = 0.0;
  // Numeric: lo < x <= hi; infinite ends are open.
  double lo = 0.0;
  double hi = 0.0;

  bool Holds(const tabular::Instance& z) const;
  // e.g. "Age <= 28", "28 < Age <= 37", "Workclass = Private"
  std::string Describe(const tabular::Schema& schema) const;
  Json ToJson(const tabular::Schema& schema) const;
};

struct AnchorRule {
  std::vector<Predicate> predicates;
  double est_precision = 0.0;
  double est_coverage = 0.0;
  // 1 - delta
  double confidence = 0.0;
  // False when no rule reached tau; the rule is then the best effort.
  bool success = false;
  int predicted_class = 0;
  // Total model evaluations spent.
  std::size_t samples = 0;

  bool Holds(const tabular::Instance& z) const;
  Json ToJson(const tabular::Schema& schema) const;
};

struct AnchorConfig {
  double tau = 0.95;
  double delta = 0.05;
  int beam_width = 2;
  // 0 means the feature count.
  int max_predicates = 0;
  // Draws per sampling round.
  int batch = 100;
  // Accuracy of the best-arm search.
  double epsilon = 0.1;
  // Every reported precision rests on at least this many draws.
  int min_samples = 1000;
  // Cap on draws per candidate rule.
  int max_samples_per_rule = 10000;
  int coverage_samples = 2000;
  std::uint64_t seed = 13;
  // Per-feature bin edges replacing the quartile edges, keyed by index.
  std::map<std::size_t, std::vector<double>> bins;

  Json ToJson() const;
  static AnchorConfig FromJson(const Json& json);
};

// Beam search over predicates fixed to the instance's own values (its
// category, or the bin containing its numeric value). Candidate precision
// is P[model(z) = model(x)] for sampler draws z conditioned on the rule.
AnchorRule FindAnchor(const model::Classifier& model,
                      const tabular::Instance& instance,
                      const tabular::PerturbationSampler& sampler,
                      const AnchorConfig& config = {});

// Bernoulli KL confidence bounds: the largest (smallest) q with
// n * KL(p || q) <= level.
double KlUpperBound(double p, double level, double n);
double KlLowerBound(double p, double level, double n);

}  // namespace convxai::explain

#endif  // CONVXAI_EXPLAIN_ANCHOR_H_
