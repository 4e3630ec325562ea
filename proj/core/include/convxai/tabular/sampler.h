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

#ifndef CONVXAI_TABULAR_SAMPLER_H_
#define CONVXAI_TABULAR_SAMPLER_H_

#include <cstdint>
#include <vector>

#include "convxai/random.h"
#include "convxai/tabular/dataset.h"

namespace convxai::tabular {

// Draws feature values independently from the empirical marginals of a
// dataset and keeps a fixed background set for attribution baselines.
// Immutable after construction; consumers obtain their own seeded streams.
class PerturbationSampler {
 public:
  static constexpr std::size_t kDefaultBackgroundSize = 100;

  PerturbationSampler(const Dataset& dataset, std::uint64_t seed,
                      std::size_t background_size = kDefaultBackgroundSize);

  std::size_t num_features() const { return columns_.size(); }
  const Schema& schema() const { return schema_; }
  std::uint64_t seed() const { return seed_; }

  // Up to `background_size` distinct rows drawn without replacement.
  const std::vector<Instance>& background() const { return background_; }

  // Independent generator for one consumer; identical ids give identical
  // streams.
  Rng Stream(std::uint64_t consumer_id) const;

  Instance Draw(Rng& rng) const;
  double DrawFeature(std::size_t feature, Rng& rng) const;
  // Draws from the marginal restricted to (lo, hi]. Returns `fallback` if no
  // training value falls in the interval.
  double DrawFeatureInInterval(std::size_t feature, double lo, double hi,
                               double fallback, Rng& rng) const;

  // Sorted training values of one column.
  const std::vector<double>& column(std::size_t feature) const {
    return columns_[feature];
  }
  // Distinct interior quartile edges (q25, q50, q75) of a numeric column.
  std::vector<double> QuartileEdges(std::size_t feature) const;
  double Median(std::size_t feature) const;
  // Median absolute deviation; falls back to the standard deviation, then to
  // 1, when the spread is zero.
  double Scale(std::size_t feature) const;
  // Empirical probability of one categorical value.
  double Frequency(std::size_t feature, double value) const;

 private:
  double ComputeScale(std::size_t feature) const;

  Schema schema_;
  std::uint64_t seed_;
  std::vector<std::vector<double>> columns_;
  std::vector<Instance> background_;
  std::vector<double> scales_;
};

}  // namespace convxai::tabular

#endif  // CONVXAI_TABULAR_SAMPLER_H_
