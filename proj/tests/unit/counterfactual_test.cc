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

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "convxai/error.h"
#include "convxai/explain/counterfactual.h"
#include "convxai/model/random_forest.h"
#include "support/toy_models.h"

namespace {

using namespace convxai;

constexpr double kThreshold = 62.5;

// One numeric feature on [0, 100]; positive above the threshold.
struct ThresholdWorld {
  tabular::Dataset data;
  std::unique_ptr<tabular::PerturbationSampler> sampler;
  model::FunctionClassifier model{2, [](const tabular::Instance& x) {
    return x[0] > kThreshold ? std::vector<double>{0.1, 0.9}
                             : std::vector<double>{0.9, 0.1};
  }};

  ThresholdWorld() {
    data.schema = testing::NumericSchema(1, 0.0, 100.0);
    for (int i = 0; i <= 100; ++i) {
      data.rows.push_back(tabular::Instance{{static_cast<double>(i)}});
      data.labels.push_back(i > kThreshold);
    }
    sampler = std::make_unique<tabular::PerturbationSampler>(data, 1, 50);
  }
};

// Smallest |dx| that flips the model, by scanning a fine grid.
double BruteForceMinimum(const model::Classifier& m, double x0, int target) {
  double best = INFINITY;
  const auto [lo, hi] = explain::SearchBounds(
      testing::NumericSchema(1, 0.0, 100.0).feature(0));
  for (double v = lo; v <= hi; v += 0.001) {
    if (m.Predict(tabular::Instance{{v}}) == target) {
      best = std::min(best, std::abs(v - x0));
    }
  }
  return best;
}

tabular::Dataset Loan() {
  const std::string dir = std::string(CONVXAI_SOURCE_DIR) + "/tests/data/loan/";
  return tabular::LoadCsv(dir + "loan.csv", tabular::LoadSchema(dir + "schema.json"));
}

TEST_SUITE("counterfactual") {

TEST_CASE("1-D threshold: distance within 5% of the brute-force minimum") {
  ThresholdWorld w;
  for (double x0 : {40.0, 10.0, 55.0}) {
    const tabular::Instance x{{x0}};
    const double oracle = BruteForceMinimum(w.model, x0, 1);
    const auto ga = explain::Counterfactuals(w.model, x, 1, *w.sampler);
    REQUIRE(ga.found());
    const double got = std::abs(ga.counterfactuals[0].cf_instance[0] - x0);
    CHECK_MESSAGE(std::abs(got - oracle) <= 0.05 * oracle, "x0 " << x0 << " got " << got);
    const auto one = explain::ConstrainedCounterfactual(w.model, x, 1, 0, *w.sampler);
    REQUIRE(one.found());
    const double got1 = std::abs(one.counterfactuals[0].cf_instance[0] - x0);
    CHECK(std::abs(got1 - oracle) <= 0.05 * oracle);
  }
  // And downwards.
  const tabular::Instance high{{90.0}};
  const double oracle = BruteForceMinimum(w.model, 90.0, 0);
  const auto down = explain::Counterfactuals(w.model, high, 0, *w.sampler);
  REQUIRE(down.found());
  CHECK(std::abs(std::abs(down.counterfactuals[0].cf_instance[0] - 90.0) - oracle) <=
        0.05 * oracle);
}

TEST_CASE("every returned counterfactual is valid on recheck") {
  const auto data = Loan();
  model::ForestConfig fc;
  fc.n_trees = 30;
  const auto forest = model::RandomForest::Train(data, fc);
  tabular::PerturbationSampler sampler(data, 2, 50);
  int checked = 0;
  for (std::size_t r = 0; r < data.size(); r += 24) {
    const auto& x = data.rows[r];
    const int target = 1 - forest.Predict(x);
    const auto res = explain::Counterfactuals(forest, x, target, sampler);
    for (const auto& cf : res.counterfactuals) {
      CHECK(forest.Predict(cf.cf_instance) == target);
      CHECK(cf.cf_instance[1] == x[1]);  // Age is immutable
      CHECK(cf.sparsity == cf.changed.size());
      CHECK(cf.sparsity >= 1);
      ++checked;
    }
    for (std::size_t i = 1; i < res.counterfactuals.size(); ++i) {
      CHECK(res.counterfactuals[i - 1].proximity <= res.counterfactuals[i].proximity);
      CHECK(!(res.counterfactuals[i - 1].cf_instance == res.counterfactuals[i].cf_instance));
    }
    CHECK(res.counterfactuals.size() <= 3);
  }
  CHECK(checked > 10);
}

TEST_CASE("random toy models: validity and schema bounds") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto toy = testing::MakeRandomToy(4, seed);
    const auto clf = toy.Classifier();
    tabular::Dataset data;
    data.schema = testing::NumericSchema(4, 0.0, 1.0);
    data.rows = testing::UniformRows(4, 200, seed);
    for (const auto& r : data.rows) data.labels.push_back(clf.Predict(r));
    tabular::PerturbationSampler sampler(data, seed, 50);
    const auto x = data.rows[0];
    const int target = 1 - clf.Predict(x);
    const auto res = explain::Counterfactuals(clf, x, target, sampler);
    for (const auto& cf : res.counterfactuals) {
      CHECK(clf.Predict(cf.cf_instance) == target);
    }
  }
}

TEST_CASE("constrained counterfactuals change exactly one feature") {
  const auto data = Loan();
  model::ForestConfig fc;
  fc.n_trees = 30;
  const auto forest = model::RandomForest::Train(data, fc);
  tabular::PerturbationSampler sampler(data, 2, 50);
  int found = 0;
  for (std::size_t r = 0; r < data.size(); r += 12) {
    const auto& x = data.rows[r];
    const int target = 1 - forest.Predict(x);
    for (std::size_t f : {0u, 2u, 3u, 4u}) {
      const auto res = explain::ConstrainedCounterfactual(forest, x, target, f, sampler);
      for (const auto& cf : res.counterfactuals) {
        REQUIRE(cf.changed.size() == 1);
        CHECK(cf.changed[0].feature == f);
        CHECK(forest.Predict(cf.cf_instance) == target);
        for (std::size_t g = 0; g < x.size(); ++g) {
          if (g != f) CHECK(cf.cf_instance[g] == x[g]);
        }
        ++found;
      }
    }
  }
  CHECK(found > 10);
}

TEST_CASE("counterfactual preconditions") {
  const auto data = Loan();
  model::ForestConfig fc;
  fc.n_trees = 10;
  const auto forest = model::RandomForest::Train(data, fc);
  tabular::PerturbationSampler sampler(data, 2, 50);
  const auto& x = data.rows[0];
  const int predicted = forest.Predict(x);
  CHECK_THROWS_AS(explain::Counterfactuals(forest, x, predicted, sampler),
                  PreconditionError);
  CHECK_THROWS_AS(explain::Counterfactuals(forest, x, 7, sampler), PreconditionError);
  CHECK_THROWS_AS(explain::ConstrainedCounterfactual(forest, x, 1 - predicted, 1, sampler),
                  PreconditionError);
  explain::CfConstraints c;
  c.allowed_features = std::set<std::size_t>{0, 4};
  c.immutable_features = {4};
  CHECK_THROWS_AS(explain::Counterfactuals(forest, x, 1 - predicted, sampler, c),
                  PreconditionError);
  c.immutable_features.clear();
  c.k = 0;
  CHECK_THROWS_AS(explain::Counterfactuals(forest, x, 1 - predicted, sampler, c),
                  PreconditionError);
}

TEST_CASE("allowed features are respected") {
  const auto data = Loan();
  model::ForestConfig fc;
  fc.n_trees = 20;
  const auto forest = model::RandomForest::Train(data, fc);
  tabular::PerturbationSampler sampler(data, 2, 50);
  explain::CfConstraints c;
  c.allowed_features = std::set<std::size_t>{0, 4};
  for (std::size_t r = 0; r < 60; r += 10) {
    const auto& x = data.rows[r];
    const auto res = explain::Counterfactuals(forest, x, 1 - forest.Predict(x), sampler, c);
    for (const auto& cf : res.counterfactuals) {
      for (const auto& ch : cf.changed) CHECK((ch.feature == 0 || ch.feature == 4));
    }
  }
}

TEST_CASE("an unreachable target reports NotFound") {
  ThresholdWorld w;
  model::FunctionClassifier never(2, [](const tabular::Instance&) {
    return std::vector<double>{0.8, 0.2};
  });
  const tabular::Instance x{{30.0}};
  const auto res = explain::Counterfactuals(never, x, 1, *w.sampler);
  CHECK(!res.found());
  CHECK(res.best_invalid.has_value());
  CHECK(res.best_invalid_probability == doctest::Approx(0.2));
  CHECK(!explain::ConstrainedCounterfactual(never, x, 1, 0, *w.sampler).found());
}

TEST_CASE("search is reproducible") {
  ThresholdWorld w;
  const tabular::Instance x{{20.0}};
  const auto a = explain::Counterfactuals(w.model, x, 1, *w.sampler);
  const auto b = explain::Counterfactuals(w.model, x, 1, *w.sampler);
  REQUIRE(a.counterfactuals.size() == b.counterfactuals.size());
  for (std::size_t i = 0; i < a.counterfactuals.size(); ++i) {
    CHECK(a.counterfactuals[i].cf_instance == b.counterfactuals[i].cf_instance);
  }
}

}  // TEST_SUITE

}  // namespace
