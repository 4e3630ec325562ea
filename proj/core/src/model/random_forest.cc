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

#include "convxai/model/random_forest.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <map>
#include <thread>
#include <unordered_map>

#include "convxai/error.h"
#include "convxai/random.h"

namespace convxai::model {
namespace {

constexpr char kMagic[8] = {'C', 'V', 'X', 'R', 'F', 0, 0, 1};
constexpr std::uint32_t kFormatVersion = 1;
constexpr int kExhaustiveCategoryLimit = 8;
constexpr double kMinGain = 1e-12;

// Column data shared by all trees: for every feature the rank of each row's
// value among the distinct training values (category index for
// categoricals).
struct Columns {
  std::vector<std::vector<double>> distinct;
  std::vector<std::vector<int>> rank;
};

Columns BuildColumns(const tabular::Dataset& ds) {
  const std::size_t m = ds.schema.num_features();
  Columns c;
  c.distinct.resize(m);
  c.rank.resize(m);
  for (std::size_t f = 0; f < m; ++f) {
    auto& d = c.distinct[f];
    auto& r = c.rank[f];
    r.resize(ds.size());
    if (ds.schema.feature(f).numeric()) {
      d.reserve(ds.size());
      for (const auto& row : ds.rows) d.push_back(row[f]);
      std::sort(d.begin(), d.end());
      d.erase(std::unique(d.begin(), d.end()), d.end());
      for (std::size_t i = 0; i < ds.size(); ++i) {
        r[i] = static_cast<int>(
            std::lower_bound(d.begin(), d.end(), ds.rows[i][f]) - d.begin());
      }
    } else {
      const std::size_t k = ds.schema.feature(f).categories.size();
      d.resize(k);
      std::iota(d.begin(), d.end(), 0.0);
      for (std::size_t i = 0; i < ds.size(); ++i) {
        r[i] = static_cast<int>(ds.rows[i][f]);
      }
    }
  }
  return c;
}

struct Split {
  bool valid = false;
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
  std::uint64_t left_categories = 0;
};

class TreeBuilder {
 public:
  TreeBuilder(const tabular::Dataset& ds, const Columns& cols,
              const ForestConfig& config, int max_features, Rng rng)
      : ds_(ds),
        cols_(cols),
        config_(config),
        max_features_(max_features),
        num_classes_(ds.schema.num_classes()),
        rng_(std::move(rng)) {
    std::size_t widest = 0;
    for (const auto& d : cols_.distinct) widest = std::max(widest, d.size());
    hist_.assign(widest * num_classes_, 0.0);
  }

  Tree Build() {
    // Bootstrap sample stored as row weights.
    const std::size_t n = ds_.size();
    std::vector<double> weight(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) weight[UniformIndex(rng_, n)] += 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (weight[i] > 0) {
        rows_.push_back(static_cast<int>(i));
        weights_.push_back(weight[i]);
      }
    }
    struct Pending {
      int node;
      std::size_t begin;
      std::size_t end;
      int depth;
    };
    tree_.nodes.emplace_back();
    std::vector<Pending> stack = {{0, 0, rows_.size(), 0}};
    while (!stack.empty()) {
      const Pending p = stack.back();
      stack.pop_back();
      std::vector<double> counts(num_classes_, 0.0);
      double total = 0.0;
      for (std::size_t i = p.begin; i < p.end; ++i) {
        counts[ds_.labels[rows_[i]]] += weights_[i];
        total += weights_[i];
      }
      const bool pure =
          std::count_if(counts.begin(), counts.end(),
                        [](double c) { return c > 0; }) <= 1;
      const bool depth_limit =
          config_.max_depth > 0 && p.depth >= config_.max_depth;
      Split split;
      if (!pure && !depth_limit && total >= 2.0 * config_.min_leaf) {
        split = BestSplit(p.begin, p.end, counts, total);
      }
      if (!split.valid) {
        MakeLeaf(p.node, counts);
        continue;
      }
      const std::size_t mid = Partition(p.begin, p.end, split);
      TreeNode& node = tree_.nodes[p.node];
      node.feature = split.feature;
      node.threshold = split.threshold;
      node.left_categories = split.left_categories;
      const int left = static_cast<int>(tree_.nodes.size());
      tree_.nodes.emplace_back();
      const int right = static_cast<int>(tree_.nodes.size());
      tree_.nodes.emplace_back();
      tree_.nodes[p.node].left = left;
      tree_.nodes[p.node].right = right;
      stack.push_back({right, mid, p.end, p.depth + 1});
      stack.push_back({left, p.begin, mid, p.depth + 1});
    }
    return std::move(tree_);
  }

 private:
  void MakeLeaf(int node, const std::vector<double>& counts) {
    tree_.nodes[node].feature = -1;
    tree_.nodes[node].leaf = static_cast<int>(tree_.leaf_counts.size());
    tree_.leaf_counts.insert(tree_.leaf_counts.end(), counts.begin(),
                             counts.end());
  }

  bool GoesLeft(int row, const Split& s) const {
    const auto& f = ds_.schema.feature(s.feature);
    const double v = ds_.rows[row][s.feature];
    if (f.numeric()) return v <= s.threshold;
    return (s.left_categories >> static_cast<int>(v)) & 1ULL;
  }

  std::size_t Partition(std::size_t begin, std::size_t end, const Split& s) {
    std::size_t mid = begin;
    for (std::size_t i = begin; i < end; ++i) {
      if (GoesLeft(rows_[i], s)) {
        std::swap(rows_[i], rows_[mid]);
        std::swap(weights_[i], weights_[mid]);
        ++mid;
      }
    }
    return mid;
  }

  // Sum of squared class counts over the child weight; maximising the sum
  // over both children minimises weighted Gini impurity.
  static double Purity(const double* counts, std::size_t k, double total) {
    if (total <= 0) return 0.0;
    double s = 0.0;
    for (std::size_t c = 0; c < k; ++c) s += counts[c] * counts[c];
    return s / total;
  }

  Split BestSplit(std::size_t begin, std::size_t end,
                  const std::vector<double>& counts, double total) {
    const double parent = Purity(counts.data(), num_classes_, total);
    std::vector<int> order(ds_.schema.num_features());
    std::iota(order.begin(), order.end(), 0);
    Shuffle(order.begin(), order.end(), rng_);
    Split best;
    int visited = 0;
    for (int f : order) {
      if (visited >= max_features_ && best.valid) break;
      ++visited;
      const Split s = ds_.schema.feature(f).numeric()
                          ? NumericSplit(f, begin, end, total, parent)
                          : CategoricalSplit(f, begin, end, total, parent);
      if (s.valid && (!best.valid || s.gain > best.gain)) best = s;
    }
    return best;
  }

  Split NumericSplit(int f, std::size_t begin, std::size_t end, double total,
                     double parent) {
    const auto& distinct = cols_.distinct[f];
    const auto& rank = cols_.rank[f];
    const std::size_t k = num_classes_;
    const std::size_t n_node = end - begin;
    Split best;
    std::vector<double> left(k, 0.0);
    std::vector<double> right(k, 0.0);
    auto consider = [&](double left_w, int lo_rank, int hi_rank) {
      const double right_w = total - left_w;
      if (left_w < config_.min_leaf || right_w < config_.min_leaf) return;
      for (std::size_t c = 0; c < k; ++c) right[c] = totals_[c] - left[c];
      const double gain = Purity(left.data(), k, left_w) +
                          Purity(right.data(), k, right_w) - parent;
      if (gain / total > kMinGain && (!best.valid || gain > best.gain)) {
        best.valid = true;
        best.gain = gain;
        best.feature = f;
        const double lo = distinct[lo_rank];
        const double hi = distinct[hi_rank];
        double t = lo + (hi - lo) / 2.0;
        if (!(t >= lo && t < hi)) t = lo;
        best.threshold = t;
      }
    };
    totals_.assign(k, 0.0);
    for (std::size_t i = begin; i < end; ++i) {
      totals_[ds_.labels[rows_[i]]] += weights_[i];
    }
    if (distinct.size() <= 4 * n_node) {
      // Histogram over value ranks.
      std::fill(hist_.begin(), hist_.begin() + distinct.size() * k, 0.0);
      for (std::size_t i = begin; i < end; ++i) {
        hist_[rank[rows_[i]] * k + ds_.labels[rows_[i]]] += weights_[i];
      }
      double left_w = 0.0;
      int prev = -1;
      for (std::size_t r = 0; r < distinct.size(); ++r) {
        double w = 0.0;
        for (std::size_t c = 0; c < k; ++c) w += hist_[r * k + c];
        if (w == 0.0) continue;
        if (prev >= 0) consider(left_w, prev, static_cast<int>(r));
        for (std::size_t c = 0; c < k; ++c) left[c] += hist_[r * k + c];
        left_w += w;
        prev = static_cast<int>(r);
      }
    } else {
      std::vector<std::size_t> idx(n_node);
      std::iota(idx.begin(), idx.end(), begin);
      std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return rank[rows_[a]] < rank[rows_[b]];
      });
      double left_w = 0.0;
      for (std::size_t j = 0; j < idx.size(); ++j) {
        const std::size_t i = idx[j];
        if (j > 0 && rank[rows_[i]] != rank[rows_[idx[j - 1]]]) {
          consider(left_w, rank[rows_[idx[j - 1]]], rank[rows_[i]]);
        }
        left[ds_.labels[rows_[i]]] += weights_[i];
        left_w += weights_[i];
      }
    }
    return best;
  }

  Split CategoricalSplit(int f, std::size_t begin, std::size_t end,
                         double total, double parent) {
    const std::size_t n_cat = cols_.distinct[f].size();
    const auto& rank = cols_.rank[f];
    const std::size_t k = num_classes_;
    std::fill(hist_.begin(), hist_.begin() + n_cat * k, 0.0);
    for (std::size_t i = begin; i < end; ++i) {
      hist_[rank[rows_[i]] * k + ds_.labels[rows_[i]]] += weights_[i];
    }
    std::vector<int> present;
    std::vector<double> cat_w(n_cat, 0.0);
    for (std::size_t c = 0; c < n_cat; ++c) {
      for (std::size_t j = 0; j < k; ++j) cat_w[c] += hist_[c * k + j];
      if (cat_w[c] > 0) present.push_back(static_cast<int>(c));
    }
    Split best;
    if (present.size() < 2) return best;
    std::vector<double> left(k);
    std::vector<double> right(k);
    std::uint64_t absent = 0;
    for (std::size_t c = 0; c < n_cat; ++c) {
      if (cat_w[c] == 0) absent |= 1ULL << c;
    }
    auto consider = [&](std::uint64_t mask) {
      std::fill(left.begin(), left.end(), 0.0);
      double left_w = 0.0;
      for (int c : present) {
        if ((mask >> c) & 1ULL) {
          for (std::size_t j = 0; j < k; ++j) left[j] += hist_[c * k + j];
          left_w += cat_w[c];
        }
      }
      const double right_w = total - left_w;
      if (left_w < config_.min_leaf || right_w < config_.min_leaf) return;
      for (std::size_t j = 0; j < k; ++j) {
        right[j] = 0.0;
      }
      for (int c : present) {
        if (!((mask >> c) & 1ULL)) {
          for (std::size_t j = 0; j < k; ++j) right[j] += hist_[c * k + j];
        }
      }
      const double gain = Purity(left.data(), k, left_w) +
                          Purity(right.data(), k, right_w) - parent;
      if (gain / total > kMinGain && (!best.valid || gain > best.gain)) {
        best.valid = true;
        best.gain = gain;
        best.feature = f;
        // Categories unseen at this node follow the heavier child.
        best.left_categories = left_w > right_w ? (mask | absent) : mask;
      }
    };
    if (present.size() <= kExhaustiveCategoryLimit) {
      // The last present category stays right, so each partition is
      // visited once.
      const std::size_t free = present.size() - 1;
      for (std::uint64_t s = 1; s < (1ULL << free); ++s) {
        std::uint64_t mask = 0;
        for (std::size_t b = 0; b < free; ++b) {
          if ((s >> b) & 1ULL) mask |= 1ULL << present[b];
        }
        consider(mask);
      }
    } else {
      for (int c : present) consider(1ULL << c);
    }
    return best;
  }

  const tabular::Dataset& ds_;
  const Columns& cols_;
  const ForestConfig& config_;
  int max_features_;
  std::size_t num_classes_;
  Rng rng_;
  std::vector<int> rows_;
  std::vector<double> weights_;
  std::vector<double> hist_;
  std::vector<double> totals_;
  Tree tree_;
};

template <typename T>
void WritePod(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T ReadPod(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw ParseError("truncated model artifact");
  return v;
}

}  // namespace

double Gini(const std::vector<double>& counts) {
  double total = 0.0;
  for (double c : counts) total += c;
  if (total <= 0) return 0.0;
  double s = 1.0;
  for (double c : counts) s -= (c / total) * (c / total);
  return s;
}

Json ForestConfig::ToJson() const {
  return {{"n_trees", n_trees},
          {"max_depth", max_depth},
          {"min_leaf", min_leaf},
          {"max_features", max_features},
          {"seed", seed}};
}

ForestConfig ForestConfig::FromJson(const Json& j) {
  ForestConfig c;
  try {
    c.n_trees = j.value("n_trees", c.n_trees);
    c.max_depth = j.value("max_depth", c.max_depth);
    c.min_leaf = j.value("min_leaf", c.min_leaf);
    c.max_features = j.value("max_features", c.max_features);
    c.seed = j.value("seed", c.seed);
  } catch (const Json::exception& e) {
    throw ValidationError("E_CONFIG", {std::string("forest: ") + e.what()});
  }
  std::vector<std::string> problems;
  if (c.n_trees < 1) problems.push_back("forest.n_trees < 1");
  if (c.max_depth < 0) problems.push_back("forest.max_depth < 0");
  if (c.min_leaf < 1) problems.push_back("forest.min_leaf < 1");
  if (c.max_features < 0) problems.push_back("forest.max_features < 0");
  if (!problems.empty()) throw ValidationError("E_CONFIG", problems);
  return c;
}

int Tree::LeafFor(const tabular::Instance& x,
                  const tabular::Schema& schema) const {
  int i = 0;
  while (!nodes[i].is_leaf()) {
    const TreeNode& n = nodes[i];
    bool left;
    if (schema.feature(n.feature).numeric()) {
      left = x[n.feature] <= n.threshold;
    } else {
      const double v = x[n.feature];
      left = v >= 0 && v < 64 &&
             ((n.left_categories >> static_cast<int>(v)) & 1ULL);
    }
    i = left ? n.left : n.right;
  }
  return nodes[i].leaf;
}

RandomForest RandomForest::Train(const tabular::Dataset& dataset,
                                 const ForestConfig& config) {
  const auto& schema = dataset.schema;
  if (dataset.size() == 0) throw PreconditionError("empty training set");
  std::vector<bool> seen(schema.num_classes(), false);
  for (int l : dataset.labels) seen[l] = true;
  if (std::count(seen.begin(), seen.end(), true) < 2) {
    throw PreconditionError("training data must contain at least 2 classes");
  }
  if (config.n_trees < 1 || config.min_leaf < 1 || config.max_depth < 0 ||
      config.max_features < 0) {
    throw PreconditionError("invalid forest configuration");
  }
  for (const auto& f : schema.features()) {
    if (!f.numeric() && f.categories.size() > 64) {
      throw PreconditionError("feature " + f.name +
                              " has more than 64 categories");
    }
  }
  const int m = static_cast<int>(schema.num_features());
  int max_features = config.max_features > 0
                         ? std::min(config.max_features, m)
                         : static_cast<int>(std::ceil(std::sqrt(m)));
  const Columns cols = BuildColumns(dataset);

  std::vector<Tree> trees(config.n_trees);
  // Trees depend only on their own seed, so the thread count does not change
  // the result.
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int n_threads = std::min<int>(hw, config.n_trees);
  auto work = [&](int t0) {
    for (int t = t0; t < config.n_trees; t += n_threads) {
      TreeBuilder b(dataset, cols, config, max_features,
                    Rng(MixSeed(config.seed, static_cast<std::uint64_t>(t))));
      trees[t] = b.Build();
    }
  };
  if (n_threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  return FromTrees(schema, config, std::move(trees));
}

RandomForest RandomForest::FromTrees(const tabular::Schema& schema,
                                     const ForestConfig& config,
                                     std::vector<Tree> trees) {
  RandomForest rf;
  rf.schema_ = schema;
  rf.config_ = config;
  rf.fingerprint_ = schema.Fingerprint();
  rf.trees_ = std::move(trees);
  return rf;
}

void RandomForest::CheckWidth(const tabular::Instance& x) const {
  if (trees_.empty()) throw PreconditionError("model is not trained");
  if (x.size() != schema_.num_features()) {
    throw ValidationError("E_SCHEMA_MISMATCH",
                          {"instance has " + std::to_string(x.size()) +
                           " values, model expects " +
                           std::to_string(schema_.num_features())});
  }
}

std::vector<double> RandomForest::PredictProba(
    const tabular::Instance& x) const {
  CheckWidth(x);
  const std::size_t k = schema_.num_classes();
  std::vector<double> p(k, 0.0);
  for (const auto& t : trees_) {
    const int leaf = t.LeafFor(x, schema_);
    double total = 0.0;
    for (std::size_t c = 0; c < k; ++c) total += t.leaf_counts[leaf + c];
    for (std::size_t c = 0; c < k; ++c) p[c] += t.leaf_counts[leaf + c] / total;
  }
  for (double& v : p) v /= static_cast<double>(trees_.size());
  return p;
}

int RandomForest::Predict(const tabular::Instance& x) const {
  CheckWidth(x);
  const std::size_t k = schema_.num_classes();
  std::vector<double> votes(k, 0.0);
  for (const auto& t : trees_) {
    const int leaf = t.LeafFor(x, schema_);
    std::vector<double> counts(t.leaf_counts.begin() + leaf,
                               t.leaf_counts.begin() + leaf + k);
    votes[ArgMax(counts)] += 1.0;
  }
  return ArgMax(votes);
}

std::optional<std::vector<double>> RandomForest::CoalitionValues(
    const tabular::Instance& x, const std::vector<tabular::Instance>& background,
    int target) const {
  CheckWidth(x);
  const std::size_t m = schema_.num_features();
  if (m > 16 || background.empty()) return std::nullopt;
  const std::size_t k = schema_.num_classes();
  // Sum of leaf values keyed by (U, I): U holds the features on which x and
  // b disagreed along the path, I the subset of U where x was followed. A
  // coalition S reaches the leaf exactly when S restricted to U equals I.
  std::unordered_map<std::uint64_t, double> acc;
  struct Frame {
    int node;
    std::uint32_t in;
    std::uint32_t out;
  };
  std::vector<Frame> stack;
  auto goes_left = [&](const TreeNode& n, const tabular::Instance& v) {
    if (schema_.feature(n.feature).numeric()) return v[n.feature] <= n.threshold;
    const double c = v[n.feature];
    return c >= 0 && c < 64 && ((n.left_categories >> static_cast<int>(c)) & 1ULL);
  };
  for (const auto& t : trees_) {
    for (const auto& b : background) {
      stack.push_back({0, 0, 0});
      while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        const TreeNode& n = t.nodes[f.node];
        if (n.is_leaf()) {
          double total = 0.0;
          for (std::size_t c = 0; c < k; ++c) total += t.leaf_counts[n.leaf + c];
          const double v = t.leaf_counts[n.leaf + target] / total;
          const std::uint64_t key =
              (static_cast<std::uint64_t>(f.in | f.out) << 32) | f.in;
          acc[key] += v;
          continue;
        }
        const bool lx = goes_left(n, x);
        const bool lb = goes_left(n, b);
        const std::uint32_t bit = 1u << n.feature;
        if (lx == lb) {
          stack.push_back({lx ? n.left : n.right, f.in, f.out});
        } else if (f.in & bit) {
          stack.push_back({lx ? n.left : n.right, f.in, f.out});
        } else if (f.out & bit) {
          stack.push_back({lb ? n.left : n.right, f.in, f.out});
        } else {
          stack.push_back({lx ? n.left : n.right, f.in | bit, f.out});
          stack.push_back({lb ? n.left : n.right, f.in, f.out | bit});
        }
      }
    }
  }
  std::map<std::uint32_t, std::vector<std::pair<std::uint32_t, double>>> by_u;
  for (const auto& [key, v] : acc) {
    by_u[static_cast<std::uint32_t>(key >> 32)].emplace_back(
        static_cast<std::uint32_t>(key & 0xffffffffu), v);
  }
  const std::size_t n_masks = std::size_t{1} << m;
  std::vector<double> values(n_masks, 0.0);
  std::vector<double> table;
  for (auto& [u, entries] : by_u) {
    // Dense table over the submasks of U, indexed by S & U.
    table.assign(n_masks, 0.0);
    for (const auto& [in, v] : entries) table[in] += v;
    for (std::size_t s = 0; s < n_masks; ++s) values[s] += table[s & u];
  }
  const double scale = 1.0 / (static_cast<double>(trees_.size()) * background.size());
  for (double& v : values) v *= scale;
  return values;
}

void RandomForest::RequireSchema(const tabular::Schema& schema) const {
  if (schema.Fingerprint() != fingerprint_) {
    throw ValidationError("E_SCHEMA_MISMATCH",
                          {"schema fingerprint does not match the model"});
  }
}

std::uint64_t RandomForest::Fingerprint() const {
  std::ostringstream buf;
  Write(buf);
  const std::string bytes = buf.str();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void RandomForest::Write(std::ostream& out) const {
  out.write(kMagic, sizeof(kMagic));
  WritePod(out, kFormatVersion);
  WritePod(out, fingerprint_);
  const std::string config = config_.ToJson().dump();
  WritePod(out, static_cast<std::uint32_t>(config.size()));
  out.write(config.data(), static_cast<std::streamsize>(config.size()));
  WritePod(out, static_cast<std::uint32_t>(schema_.num_classes()));
  WritePod(out, static_cast<std::uint32_t>(trees_.size()));
  for (const auto& t : trees_) {
    WritePod(out, static_cast<std::uint32_t>(t.nodes.size()));
    for (const auto& n : t.nodes) {
      WritePod(out, static_cast<std::int32_t>(n.feature));
      WritePod(out, n.threshold);
      WritePod(out, n.left_categories);
      WritePod(out, static_cast<std::int32_t>(n.left));
      WritePod(out, static_cast<std::int32_t>(n.right));
      WritePod(out, static_cast<std::int32_t>(n.leaf));
    }
    WritePod(out, static_cast<std::uint32_t>(t.leaf_counts.size()));
    out.write(reinterpret_cast<const char*>(t.leaf_counts.data()),
              static_cast<std::streamsize>(t.leaf_counts.size() * sizeof(double)));
  }
}

void RandomForest::Save(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot write " + tmp);
    Write(out);
    if (!out) throw IoError("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

RandomForest RandomForest::Read(std::istream& in,
                                const tabular::Schema& schema) {
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ParseError("not a forest artifact");
  }
  if (ReadPod<std::uint32_t>(in) != kFormatVersion) {
    throw ParseError("unsupported forest artifact version");
  }
  const auto fingerprint = ReadPod<std::uint64_t>(in);
  if (fingerprint != schema.Fingerprint()) {
    throw ValidationError("E_SCHEMA_MISMATCH",
                          {"artifact was trained on a different schema"});
  }
  std::string config(ReadPod<std::uint32_t>(in), '\0');
  in.read(config.data(), static_cast<std::streamsize>(config.size()));
  const auto n_classes = ReadPod<std::uint32_t>(in);
  if (n_classes != schema.num_classes()) throw ParseError("class count mismatch");
  const auto n_trees = ReadPod<std::uint32_t>(in);
  std::vector<Tree> trees(n_trees);
  for (auto& t : trees) {
    t.nodes.resize(ReadPod<std::uint32_t>(in));
    for (auto& n : t.nodes) {
      n.feature = ReadPod<std::int32_t>(in);
      n.threshold = ReadPod<double>(in);
      n.left_categories = ReadPod<std::uint64_t>(in);
      n.left = ReadPod<std::int32_t>(in);
      n.right = ReadPod<std::int32_t>(in);
      n.leaf = ReadPod<std::int32_t>(in);
    }
    t.leaf_counts.resize(ReadPod<std::uint32_t>(in));
    in.read(reinterpret_cast<char*>(t.leaf_counts.data()),
            static_cast<std::streamsize>(t.leaf_counts.size() * sizeof(double)));
    if (!in) throw ParseError("truncated model artifact");
    const int n_nodes = static_cast<int>(t.nodes.size());
    for (const auto& n : t.nodes) {
      const bool bad =
          n.is_leaf()
              ? (n.leaf < 0 ||
                 static_cast<std::size_t>(n.leaf) + n_classes > t.leaf_counts.size())
              : (n.feature >= static_cast<int>(schema.num_features()) ||
                 n.left <= 0 || n.left >= n_nodes || n.right <= 0 ||
                 n.right >= n_nodes);
      if (bad) throw ParseError("corrupt tree node in model artifact");
    }
  }
  ForestConfig cfg;
  try {
    cfg = ForestConfig::FromJson(Json::parse(config));
  } catch (const Json::exception& e) {
    throw ParseError(std::string("bad forest config: ") + e.what());
  }
  return FromTrees(schema, cfg, std::move(trees));
}

RandomForest RandomForest::Load(const std::filesystem::path& path,
                                const tabular::Schema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return Read(in, schema);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace convxai::model
