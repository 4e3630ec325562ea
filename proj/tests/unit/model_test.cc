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
#include <sstream>
#include <string>

#include "doctest.h"
#include "convxai/error.h"
#include "convxai/explain/attribution.h"
#include "convxai/model/evaluation.h"
#include "convxai/model/model_card.h"
#include "convxai/model/random_forest.h"
#include "convxai/tabular/datasheet.h"
#include "convxai/tabular/sampler.h"
#include "support/toy_models.h"

namespace {

using namespace convxai;

const std::string kLoanDir = std::string(CONVXAI_SOURCE_DIR) + "/tests/data/loan/";

tabular::Dataset Loan() {
  return tabular::LoadCsv(kLoanDir + "loan.csv",
                          tabular::LoadSchema(kLoanDir + "schema.json"));
}

model::ForestConfig Small() {
  model::ForestConfig c;
  c.n_trees = 30;
  c.seed = 5;
  return c;
}

TEST_SUITE("model") {

TEST_CASE("gini impurity") {
  CHECK(model::Gini({5, 5}) == doctest::Approx(0.5));
  CHECK(model::Gini({10, 0}) == doctest::Approx(0.0));
  CHECK(model::Gini({1, 1, 1, 1}) == doctest::Approx(0.75));
  CHECK(model::Gini({0, 0}) == doctest::Approx(0.0));
}

TEST_CASE("argmax ties go to the lowest index") {
  CHECK(model::ArgMax({0.2, 0.4, 0.4}) == 1);
  CHECK(model::ArgMax({0.5, 0.5}) == 0);
}

TEST_CASE("forest fits the loan rule") {
  const auto data = Loan();
  const auto forest = model::RandomForest::Train(data, Small());
  int correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto p = forest.PredictProba(data.rows[i]);
    CHECK(p[0] + p[1] == doctest::Approx(1.0));
    correct += forest.Predict(data.rows[i]) == data.labels[i];
  }
  CHECK(correct >= 228);
  CHECK(forest.trees().size() == 30);
}

TEST_CASE("training is deterministic and save/load keeps the model") {
  const auto data = Loan();
  const auto a = model::RandomForest::Train(data, Small());
  const auto b = model::RandomForest::Train(data, Small());
  CHECK(a.Fingerprint() == b.Fingerprint());
  auto other = Small();
  other.seed = 6;
  CHECK(model::RandomForest::Train(data, other).Fingerprint() != a.Fingerprint());

  std::stringstream buf;
  a.Write(buf);
  const auto back = model::RandomForest::Read(buf, data.schema);
  CHECK(back.Fingerprint() == a.Fingerprint());
  for (std::size_t i = 0; i < 20; ++i) {
    CHECK(back.PredictProba(data.rows[i]) == a.PredictProba(data.rows[i]));
  }
}

TEST_CASE("model refuses a different schema") {
  const auto data = Loan();
  const auto forest = model::RandomForest::Train(data, Small());
  const auto other = testing::NumericSchema(5);
  CHECK_THROWS_AS(forest.RequireSchema(other), ValidationError);
  std::stringstream buf;
  forest.Write(buf);
  CHECK_THROWS(model::RandomForest::Read(buf, other));
  CHECK_THROWS_AS(forest.PredictProba(tabular::Instance{{1, 2}}),
                  ValidationError);
}

TEST_CASE("single class training fails") {
  auto data = Loan();
  for (auto& l : data.labels) l = 0;
  CHECK_THROWS_AS(model::RandomForest::Train(data, Small()), PreconditionError);
}

TEST_CASE("coalition shortcut equals the generic loop") {
  const auto data = Loan();
  const auto forest = model::RandomForest::Train(data, Small());
  tabular::PerturbationSampler sampler(data, 1, 20);
  // Wrap the forest so only PredictProba is visible.
  model::FunctionClassifier plain(
      2, [&](const tabular::Instance& x) { return forest.PredictProba(x); });
  for (std::size_t r : {0u, 17u, 101u}) {
    const auto& x = data.rows[r];
    const auto fast = forest.CoalitionValues(x, sampler.background(), 1);
    REQUIRE(fast.has_value());
    REQUIRE(fast->size() == 32);
    for (std::uint64_t mask = 0; mask < 32; ++mask) {
      const double slow =
          explain::CoalitionValue(plain, x, sampler.background(), 1, mask);
      CHECK((*fast)[mask] == doctest::Approx(slow).epsilon(1e-12));
    }
  }
}

TEST_CASE("stratified row folds keep class balance") {
  const auto data = Loan();
  const auto folds = model::StratifiedRowFolds(data.labels, 3, 1);
  REQUIRE(folds.size() == 3);
  std::size_t total = 0;
  for (const auto& f : folds) {
    total += f.size();
    int pos = 0;
    for (auto i : f) pos += data.labels[i];
    CHECK(std::abs(pos - 133.0 / 3) <= 1.0);
  }
  CHECK(total == data.size());
}

TEST_CASE("cross-validation metrics and model card") {
  const auto data = Loan();
  const auto cv = model::EvaluateCv(data, Small(), 3);
  CHECK(cv.k == 3);
  CHECK(cv.accuracy.mean > 0.8);
  long cells = 0;
  for (const auto& row : cv.confusion) for (long v : row) cells += v;
  CHECK(cells == 240);
  CHECK_THROWS_AS(model::EvaluateCv(data, Small(), 1), PreconditionError);

  const auto forest = model::RandomForest::Train(data, Small());
  const auto sheet = tabular::LoadDataSheet(kLoanDir + "datasheet.json");
  const auto card = model::BuildModelCard(forest, cv, sheet, "loan", data.size());
  for (const auto& name : model::ModelCard::FieldNames()) {
    const auto v = card.Field(name);
    REQUIRE_MESSAGE(v.has_value(), name);
    CHECK_MESSAGE(!v->empty(), name);
  }
  CHECK(card.Field("accuracy")->find("3-fold cross-validation") != std::string::npos);
  CHECK(!card.Field("nonsense"));
  const auto back = model::ModelCard::FromJson(card.ToJson());
  CHECK(back.Field("confusion") == card.Field("confusion"));

  auto broken = cv;
  broken.accuracy.mean = 1.5;
  CHECK_THROWS_AS(model::BuildModelCard(forest, broken, sheet, "loan", 240),
                  ValidationError);
  CHECK_THROWS_AS(model::BuildModelCard(model::RandomForest(), cv, sheet, "loan", 240),
                  PreconditionError);
}

}  // TEST_SUITE

}  // namespace
