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

#ifndef CONVXAI_MODEL_RANDOM_FOREST_H_
#define CONVXAI_MODEL_RANDOM_FOREST_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "convxai/io.h"
#include "convxai/model/classifier.h"
#include "convxai/tabular/dataset.h"

namespace convxai::model {

struct ForestConfig {
  int n_trees = 100;
  // 0 means unlimited.
  int max_depth = 0;
  int min_leaf = 1;
  // 0 means ceil(sqrt(number of features)).
  int max_features = 0;
  std::uint64_t seed = 42;

  Json ToJson() const;
  static ForestConfig FromJson(const Json& json);
};

struct TreeNode {
  // -1 for leaves.
  int feature = -1;
  // Numeric: go left when x <= threshold.
  double threshold = 0.0;
  // Categorical: go left when bit (category index) is set.
  std::uint64_t left_categories = 0;
  int left = -1;
  int right = -1;
  // Leaves: offset of the class-count block in Tree::leaf_counts.
  int leaf = -1;

  bool is_leaf() const { return feature < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;
  // num_classes counts per leaf.
  std::vector<double> leaf_counts;

  // Leaf reached by x; returns the offset into leaf_counts.
  int LeafFor(const tabular::Instance& x, const tabular::Schema& schema) const;
};

class RandomForest : public Classifier {
 public:
  RandomForest() = default;

  // Bootstrap-aggregated Gini trees. Throws PreconditionError when fewer
  // than two classes are present, or a categorical feature has more than
  // 64 categories.
  static RandomForest Train(const tabular::Dataset& dataset,
                            const ForestConfig& config);

  std::size_t num_classes() const override { return schema_.num_classes(); }
  // Mean of the per-tree leaf class frequencies.
  std::vector<double> PredictProba(const tabular::Instance& x) const override;
  // Majority vote over trees; ties go to the lowest class index.
  int Predict(const tabular::Instance& x) const override;
  // Exact, by walking each tree once per background row and recording which
  // features decide the leaf reached. Up to 16 features.
  std::optional<std::vector<double>> CoalitionValues(
      const tabular::Instance& x, const std::vector<tabular::Instance>& background,
      int target) const override;

  // Throws ValidationError (E_SCHEMA_MISMATCH) unless the schema has the
  // fingerprint recorded at training time.
  void RequireSchema(const tabular::Schema& schema) const;

  const tabular::Schema& schema() const { return schema_; }
  const ForestConfig& config() const { return config_; }
  const std::vector<Tree>& trees() const { return trees_; }
  std::uint64_t schema_fingerprint() const { return fingerprint_; }
  bool trained() const { return !trees_.empty(); }
  // Stable hash of the trained structure; equal models hash equal.
  std::uint64_t Fingerprint() const;

  // Built from explicit trees; used by tests and loading.
  static RandomForest FromTrees(const tabular::Schema& schema,
                                const ForestConfig& config,
                                std::vector<Tree> trees);

  void Save(const std::filesystem::path& path) const;
  void Write(std::ostream& out) const;
  // `schema` must match the fingerprint stored in the file.
  static RandomForest Load(const std::filesystem::path& path,
                           const tabular::Schema& schema);
  static RandomForest Read(std::istream& in, const tabular::Schema& schema);

 private:
  void CheckWidth(const tabular::Instance& x) const;

  tabular::Schema schema_;
  ForestConfig config_;
  std::uint64_t fingerprint_ = 0;
  std::vector<Tree> trees_;
};

// Gini impurity of a class-count vector.
double Gini(const std::vector<double>& counts);

}  // namespace convxai::model

#endif  // CONVXAI_MODEL_RANDOM_FOREST_H_
