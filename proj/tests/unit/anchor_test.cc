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
#include <string>
#include <vector>

#include "doctest.h"
#include "convxai/error.h"
#include "convxai/explain/anchor.h"
#include "support/toy_models.h"

namespace {

using namespace convxai;

// Three categorical features with three values each; the dataset holds every
// combination once, so the sampler's marginals are uniform.
struct CategoricalWorld {
  tabular::Dataset data;
  std::unique_ptr<tabular::PerturbationSampler> sampler;
  model::FunctionClassifier model{2, [](const tabular::Instance& x) {
    const bool pos = (x[0] == 0 && x[1] != 2) || (x[0] == 1 && x[2] == 1);
    return pos ? std::vector<double>{0.2, 0.8} : std::vector<double>{0.7, 0.3};
  }};

  CategoricalWorld() {
    std::vector<tabular::FeatureSpec> features;
    for (const char* name : {"a", "b", "c"}) {
      tabular::FeatureSpec f;
      f.name = name;
      f.kind = tabular::FeatureKind::kCategorical;
      f.categories = {"p", "q", "r"};
      features.push_back(f);
    }
    data.schema = tabular::Schema(features, {"neg", "pos"}, "y");
    for (int i = 0; i < 27; ++i) {
      tabular::Instance x{{double(i % 3), double(i / 3 % 3), double(i / 9)}};
      data.labels.push_back(model.Predict(x));
      data.rows.push_back(x);
    }
    sampler = std::make_unique<tabular::PerturbationSampler>(data, 1, 27);
  }

  // Precision and coverage of a rule by enumerating the space.
  std::pair<double, double> Exhaustive(const explain::AnchorRule& rule,
                                       const tabular::Instance& x) const {
    const int want = model.Predict(x);
    int holds = 0, agree = 0;
    for (const auto& z : data.rows) {
      if (!rule.Holds(z)) continue;
      ++holds;
      agree += model.Predict(z) == want;
    }
    return {double(agree) / holds, holds / 27.0};
  }
};

double Kl(double p, double q) {
  auto term = [](double a, double b) { return a > 0 ? a * std::log(a / b) : 0.0; };
  return term(p, q) + term(1 - p, 1 - q);
}

double BisectUpper(double p, double level, double n) {
  double lo = p, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = (lo + hi) / 2;
    (n * Kl(p, mid) <= level ? lo : hi) = mid;
  }
  return lo;
}

double BisectLower(double p, double level, double n) {
  double lo = 0.0, hi = p;
  for (int i = 0; i < 200; ++i) {
    const double mid = (lo + hi) / 2;
    (n * Kl(p, mid) <= level ? hi : lo) = mid;
  }
  return hi;
}

TEST_SUITE("anchor") {

TEST_CASE("estimated precision matches exhaustive precision") {
  CategoricalWorld w;
  int successes = 0;
  for (const auto& x : w.data.rows) {
    const auto rule = explain::FindAnchor(w.model, x, *w.sampler);
    const auto [precision, coverage] = w.Exhaustive(rule, x);
    CHECK(std::abs(rule.est_precision - precision) <= 0.05);
    CHECK(std::abs(rule.est_coverage - coverage) <= 0.05);
    CHECK(rule.predicted_class == w.model.Predict(x));
    CHECK(rule.Holds(x));
    if (rule.success) {
      CHECK(rule.est_precision >= 0.95);
      ++successes;
    }
  }
  // Every point of this space has a perfect anchor (all three features).
  CHECK(successes == 27);
}

TEST_CASE("success implies precision of at least tau on a noisy model") {
  CategoricalWorld w;
  // The class depends on a hash of the whole point; short rules are weak.
  model::FunctionClassifier noisy(2, [](const tabular::Instance& x) {
    const int h = int(x[0] * 7 + x[1] * 5 + x[2] * 3) % 4;
    return h == 0 ? std::vector<double>{0.1, 0.9} : std::vector<double>{0.9, 0.1};
  });
  for (double tau : {0.8, 0.95}) {
    explain::AnchorConfig config;
    config.tau = tau;
    for (std::size_t i = 0; i < w.data.rows.size(); i += 4) {
      const auto rule = explain::FindAnchor(noisy, w.data.rows[i], *w.sampler, config);
      if (rule.success) CHECK(rule.est_precision >= tau);
    }
  }
}

TEST_CASE("short rules are preferred when they suffice") {
  CategoricalWorld w;
  // For a=r every point is negative, so "a = r" alone is a perfect anchor.
  const tabular::Instance x{{2, 0, 0}};
  const auto rule = explain::FindAnchor(w.model, x, *w.sampler);
  CHECK(rule.success);
  REQUIRE(rule.predicates.size() == 1);
  CHECK(rule.predicates[0].Describe(w.data.schema) == "a = r");
}

TEST_CASE("kl bounds agree with an independent bisection") {
  for (double p : {0.0, 0.1, 0.5, 0.93, 1.0}) {
    for (double n : {10.0, 100.0, 1000.0}) {
      for (double level : {0.5, 3.0}) {
        const double up = explain::KlUpperBound(p, level, n);
        const double lo = explain::KlLowerBound(p, level, n);
        CHECK(up == doctest::Approx(BisectUpper(p, level, n)).epsilon(1e-6));
        CHECK(lo == doctest::Approx(BisectLower(p, level, n)).epsilon(1e-6));
        CHECK(lo <= p);
        CHECK(up >= p);
      }
    }
  }
}

TEST_CASE("numeric predicates describe bins") {
  const auto schema = testing::NumericSchema(1, 0, 100);
  explain::Predicate p;
  p.feature = 0;
  p.lo = -INFINITY;
  p.hi = 28;
  CHECK(p.Describe(schema) == "x0 <= 28");
  p.lo = 28;
  p.hi = 37;
  CHECK(p.Describe(schema) == "28 < x0 <= 37");
  CHECK(p.Holds(tabular::Instance{{37}}));
  CHECK(!p.Holds(tabular::Instance{{28}}));
  p.hi = INFINITY;
  CHECK(p.Describe(schema) == "x0 > 28");
}

TEST_CASE("anchor search is reproducible and validates config") {
  CategoricalWorld w;
  const auto a = explain::FindAnchor(w.model, w.data.rows[5], *w.sampler);
  const auto b = explain::FindAnchor(w.model, w.data.rows[5], *w.sampler);
  CHECK(a.ToJson(w.data.schema) == b.ToJson(w.data.schema));
  explain::AnchorConfig bad;
  bad.tau = 1.5;
  CHECK_THROWS_AS(explain::AnchorConfig::FromJson(bad.ToJson()), ValidationError);
  CHECK_THROWS_AS(explain::FindAnchor(w.model, tabular::Instance{{0, 0}}, *w.sampler),
                  PreconditionError);
}

}  // TEST_SUITE

}  // namespace
