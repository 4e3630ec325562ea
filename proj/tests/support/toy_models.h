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

#ifndef CONVXAI_TESTS_SUPPORT_TOY_MODELS_H_
#define CONVXAI_TESTS_SUPPORT_TOY_MODELS_H_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "convxai/model/classifier.h"
#include "convxai/random.h"
#include "convxai/service/config.h"
#include "convxai/tabular/dataset.h"
#include "convxai/tabular/schema.h"

namespace convxai::testing {

inline std::filesystem::path SourcePath(const std::string& rel) {
  return std::filesystem::path(CONVXAI_SOURCE_DIR) / rel;
}

inline std::filesystem::path DataPath(const std::string& rel) {
  return SourcePath("data/" + rel);
}

// Test config with its own unmatched log and artifact dir so test cases do
// not see each other's records.
inline service::ServiceConfig TestConfig(const std::string& scratch) {
  auto config = service::LoadServiceConfig(CONVXAI_TEST_CONFIG);
  const auto dir = std::filesystem::path(CONVXAI_TEST_VAR) / scratch;
  std::filesystem::create_directories(dir);
  config.unmatched_log = dir / "unmatched.jsonl";
  config.artifact_dir = std::filesystem::path(CONVXAI_TEST_VAR) / "artifacts";
  return config;
}

inline tabular::Schema NumericSchema(std::size_t m, double lo = 0.0,
                                     double hi = 1.0) {
  std::vector<tabular::FeatureSpec> features;
  for (std::size_t i = 0; i < m; ++i) {
    tabular::FeatureSpec f;
    f.name = "x" + std::to_string(i);
    f.min = lo;
    f.max = hi;
    features.push_back(f);
  }
  return tabular::Schema(std::move(features), {"neg", "pos"}, "y");
}

inline double Sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Logistic model with random weights and a few pairwise interactions.
struct RandomToy {
  std::size_t m = 0;
  std::vector<double> w;
  std::vector<std::tuple<std::size_t, std::size_t, double>> pairs;
  double bias = 0.0;

  double P(const tabular::Instance& x) const {
    double z = bias;
    for (std::size_t i = 0; i < m; ++i) z += w[i] * x[i];
    for (const auto& [a, b, c] : pairs) z += c * x[a] * x[b];
    return Sigmoid(z);
  }
  model::FunctionClassifier Classifier() const {
    RandomToy self = *this;
    return model::FunctionClassifier(2, [self](const tabular::Instance& x) {
      const double p = self.P(x);
      return std::vector<double>{1.0 - p, p};
    });
  }
};

inline RandomToy MakeRandomToy(std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  RandomToy toy;
  toy.m = m;
  for (std::size_t i = 0; i < m; ++i) toy.w.push_back(UniformReal(rng, -2, 2));
  toy.bias = UniformReal(rng, -1, 1);
  if (m >= 2) {
    for (int k = 0; k < 2; ++k) {
      std::size_t a = UniformIndex(rng, m), b = UniformIndex(rng, m);
      toy.pairs.emplace_back(a, b, UniformReal(rng, -1.5, 1.5));
    }
  }
  return toy;
}

inline std::vector<tabular::Instance> UniformRows(std::size_t m, std::size_t n,
                                                  std::uint64_t seed,
                                                  double lo = 0.0,
                                                  double hi = 1.0) {
  Rng rng(seed);
  std::vector<tabular::Instance> rows(n);
  for (auto& r : rows) {
    r.values.resize(m);
    for (auto& v : r.values) v = UniformReal(rng, lo, hi);
  }
  return rows;
}

}  // namespace convxai::testing

#endif  // CONVXAI_TESTS_SUPPORT_TOY_MODELS_H_
