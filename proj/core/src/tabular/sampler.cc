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

#include "convxai/tabular/sampler.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "convxai/error.h"

namespace convxai::tabular {
namespace {

double Quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

PerturbationSampler::PerturbationSampler(const Dataset& dataset,
                                         std::uint64_t seed,
                                         std::size_t background_size)
    : schema_(dataset.schema), seed_(seed) {
  if (dataset.size() == 0) {
    throw PreconditionError("sampler needs a non-empty dataset");
  }
  const std::size_t m = schema_.num_features();
  columns_.assign(m, {});
  for (auto& c : columns_) c.reserve(dataset.size());
  for (const auto& row : dataset.rows) {
    for (std::size_t f = 0; f < m; ++f) columns_[f].push_back(row[f]);
  }
  for (auto& c : columns_) std::sort(c.begin(), c.end());
  for (std::size_t f = 0; f < m; ++f) scales_.push_back(ComputeScale(f));

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(MixSeed(seed_, 0xb0));
  const std::size_t b = std::min(background_size, order.size());
  // Partial Fisher-Yates: the first b slots are a uniform sample without
  // replacement.
  for (std::size_t i = 0; i < b; ++i) {
    std::swap(order[i], order[i + UniformIndex(rng, order.size() - i)]);
  }
  for (std::size_t i = 0; i < b; ++i) {
    background_.push_back(dataset.rows[order[i]]);
  }
}

Rng PerturbationSampler::Stream(std::uint64_t consumer_id) const {
  return Rng(MixSeed(seed_, consumer_id + 1));
}

Instance PerturbationSampler::Draw(Rng& rng) const {
  Instance out;
  out.values.resize(columns_.size());
  for (std::size_t f = 0; f < columns_.size(); ++f) {
    out.values[f] = DrawFeature(f, rng);
  }
  return out;
}

double PerturbationSampler::DrawFeature(std::size_t feature, Rng& rng) const {
  const auto& c = columns_[feature];
  return c[UniformIndex(rng, c.size())];
}

double PerturbationSampler::DrawFeatureInInterval(std::size_t feature,
                                                  double lo, double hi,
                                                  double fallback,
                                                  Rng& rng) const {
  const auto& c = columns_[feature];
  const auto first = std::upper_bound(c.begin(), c.end(), lo);
  const auto last = std::upper_bound(c.begin(), c.end(), hi);
  if (first >= last) return fallback;
  const auto n = static_cast<std::size_t>(last - first);
  return first[UniformIndex(rng, n)];
}

std::vector<double> PerturbationSampler::QuartileEdges(
    std::size_t feature) const {
  const auto& c = columns_[feature];
  std::vector<double> edges;
  for (double q : {0.25, 0.5, 0.75}) {
    const double e = Quantile(c, q);
    if (e < c.back() && (edges.empty() || e > edges.back())) {
      edges.push_back(e);
    }
  }
  return edges;
}

double PerturbationSampler::Median(std::size_t feature) const {
  return Quantile(columns_[feature], 0.5);
}

double PerturbationSampler::Scale(std::size_t feature) const {
  return scales_.at(feature);
}

double PerturbationSampler::ComputeScale(std::size_t feature) const {
  const auto& c = columns_[feature];
  const double med = Median(feature);
  std::vector<double> dev(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) dev[i] = std::abs(c[i] - med);
  std::sort(dev.begin(), dev.end());
  const double mad = Quantile(dev, 0.5);
  if (mad > 0) return mad;
  const double mean = std::accumulate(c.begin(), c.end(), 0.0) / c.size();
  double var = 0.0;
  for (double v : c) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / c.size());
  return sd > 0 ? sd : 1.0;
}

double PerturbationSampler::Frequency(std::size_t feature, double value) const {
  const auto& c = columns_[feature];
  const auto range = std::equal_range(c.begin(), c.end(), value);
  return static_cast<double>(range.second - range.first) / c.size();
}

}  // namespace convxai::tabular
