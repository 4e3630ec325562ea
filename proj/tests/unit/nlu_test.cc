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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "convxai/corpus/phrase_bank.h"
#include "convxai/error.h"
#include "convxai/nlu/matcher.h"
#include "convxai/nlu/porter.h"
#include "convxai/nlu/preprocess.h"
#include "convxai/nlu/svm.h"
#include "convxai/nlu/tfidf.h"
#include "convxai/nlu/unmatched_log.h"
#include "convxai/tabular/schema.h"
#include "support/toy_models.h"

namespace {

using namespace convxai;
using convxai::testing::DataPath;

corpus::PhraseBank MergedBank() {
  return corpus::MergeLabels(
      corpus::LoadPhraseBank(DataPath("phrase_bank/bank.jsonl")),
      corpus::LoadMergeSpec(DataPath("phrase_bank/merge_spec.json")));
}

const tabular::Schema& Adult() {
  static const auto schema = tabular::LoadSchema(DataPath("adult/schema.json"));
  return schema;
}

TEST_SUITE("nlu") {

TEST_CASE("porter stemmer reference pairs") {
  const std::map<std::string, std::string> pairs = {
      {"caresses", "caress"},  {"ponies", "poni"},     {"cats", "cat"},
      {"feed", "feed"},        {"agreed", "agre"},     {"plastered", "plaster"},
      {"motoring", "motor"},   {"sing", "sing"},       {"hopping", "hop"},
      {"falling", "fall"},     {"filing", "file"},     {"happy", "happi"},
      {"relational", "relat"}, {"conditional", "condit"},
      {"generalization", "gener"}, {"predicted", "predict"},
      {"features", "featur"},  {"is", "is"},           {"hopeful", "hope"},
      {"electrical", "electr"}, {"adjustable", "adjust"}};
  for (const auto& [word, stem] : pairs) {
    CHECK_MESSAGE(nlu::PorterStem(word) == stem, word);
  }
}

TEST_CASE("tokenizer keeps placeholders and drops short tokens") {
  const auto tokens =
      nlu::TokenizeAndStem("How could I change <feature> to get <class>?");
  const std::vector<std::string> expected = {"how", "could", "chang",
                                             "<feature>", "to", "get",
                                             "<class>"};
  CHECK(tokens == expected);
}

TEST_CASE("tf-idf weights match the smoothed idf formula") {
  const std::vector<std::vector<std::string>> docs = {
      {"a1", "b1", "b1"}, {"a1", "c1"}, {"c1", "d1"}, {"e1"}};
  nlu::TfidfParams params;
  params.max_df = 1.0;
  const auto model = nlu::TfidfModel::Fit(docs, params);
  const double n = docs.size();
  auto idf = [&](int df) { return std::log((1 + n) / (1 + df)) + 1; };
  CHECK(model.idf()[model.vocabulary().at("a1")] == doctest::Approx(idf(2)));
  CHECK(model.idf()[model.vocabulary().at("e1")] == doctest::Approx(idf(1)));

  const auto v = model.Transform({"a1", "b1", "b1", "zz"});
  const double wa = idf(2), wb = 2 * idf(1);
  const double norm = std::sqrt(wa * wa + wb * wb);
  std::map<int, double> got(v.items.begin(), v.items.end());
  CHECK(got.size() == 2);
  CHECK(got[model.vocabulary().at("a1")] == doctest::Approx(wa / norm));
  CHECK(got[model.vocabulary().at("b1")] == doctest::Approx(wb / norm));
  CHECK(v.SquaredNorm() == doctest::Approx(1.0));
  CHECK(model.Transform({"unknown"}).empty());
}

TEST_CASE("tf-idf drops tokens above max_df") {
  const std::vector<std::vector<std::string>> docs = {
      {"common", "x"}, {"common", "y"}, {"common", "z"}};
  nlu::TfidfParams params;
  params.max_df = 0.8;
  const auto model = nlu::TfidfModel::Fit(docs, params);
  CHECK(model.vocabulary().count("common") == 0);
  CHECK(model.vocabulary().size() == 3);
  CHECK_THROWS_AS(nlu::TfidfModel::Fit({{"common"}, {"common"}}, params),
                  ValidationError);
  CHECK_THROWS_AS(nlu::TfidfModel::Fit({}, params), PreconditionError);
  const auto back = nlu::TfidfModel::FromJson(model.ToJson());
  CHECK(back.vocabulary() == model.vocabulary());
  CHECK(back.idf() == model.idf());
}

TEST_CASE("smo recovers the max-margin solution of a separable toy") {
  // Linear kernel; the optimum uses only (1,0) and (-1,0) with alpha 0.5.
  const std::vector<std::pair<double, double>> pts = {
      {1, 0}, {-1, 0}, {2, 1}, {-2, -1}, {3, -1}, {-3, 1}};
  const std::vector<int> y = {1, -1, 1, -1, 1, -1};
  nlu::KernelMatrix k;
  k.n = pts.size();
  for (auto [a, b] : pts) {
    for (auto [c, d] : pts) k.values.push_back(a * c + b * d);
  }
  nlu::SvmParams params;
  params.c = 1000;
  params.tolerance = 1e-6;
  const auto svm = nlu::SolveSmo(k, y, params);
  CHECK(svm.converged);
  CHECK(svm.coef[0] == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(svm.coef[1] == doctest::Approx(-0.5).epsilon(1e-4));
  for (std::size_t i = 2; i < pts.size(); ++i) {
    CHECK(std::abs(svm.coef[i]) < 1e-6);
  }
  CHECK(std::abs(svm.rho) < 1e-4);
  double sum = 0;
  for (double c : svm.coef) sum += c;
  CHECK(std::abs(sum) < 1e-9);
  for (std::size_t i = 0; i < k.n; ++i) {
    double f = -svm.rho;
    for (std::size_t j = 0; j < k.n; ++j) f += svm.coef[j] * k(j, i);
    CHECK(y[i] * f >= 1.0 - 1e-3);
  }
}

TEST_CASE("placeholder substitution records slots") {
  const auto q = nlu::SubstitutePlaceholders(
      "How could I change only Occupation to get >50K prediction?", Adult());
  CHECK(q.canonical_text ==
        "How could I change only <feature> to get <class> prediction?");
  CHECK(q.slots.features == std::vector<std::string>{"Occupation"});
  CHECK(q.slots.classes == std::vector<std::string>{">50K"});
  CHECK(nlu::ReinsertSlots(q) == q.original_text);

  const auto lower = nlu::SubstitutePlaceholders(
      "what if age were 45 and workclass Private", Adult());
  CHECK(lower.slots.features == std::vector<std::string>{"age", "workclass"});
  CHECK(lower.slots.values.size() == 2);
}

TEST_CASE("cosine backend reproduces its training data") {
  nlu::MatcherConfig config;
  config.backend = nlu::Backend::kCosineNearest;
  CHECK(nlu::TrainingAccuracy(MergedBank(), config) == doctest::Approx(1.0));
}

TEST_CASE("matcher scores, save and load") {
  const auto bank = MergedBank();
  nlu::MatcherConfig config;
  const auto matcher = nlu::Matcher::Train(bank, config);
  CHECK(matcher.labels().size() == 52);

  const auto scores = matcher.Score("give me the reason for thi predict");
  double total = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    total += scores[i].confidence;
    if (i > 0) CHECK(scores[i - 1].confidence >= scores[i].confidence);
  }
  CHECK(total == doctest::Approx(1.0));

  const auto r = matcher.Match("Give me the reason for this prediction!", Adult());
  CHECK(r.matched);
  CHECK(bank.label_map().at(r.label).count(47) == 1);
  CHECK(r.top.size() == 3);

  const auto path =
      std::filesystem::path(CONVXAI_TEST_VAR) / "matcher_roundtrip.json";
  matcher.Save(path);
  const auto back = nlu::Matcher::Load(path);
  const std::string q = "why is thi profil predict <class> instead of <class>";
  CHECK(back.DecisionValues(q) == matcher.DecisionValues(q));
  CHECK(back.temperature() == matcher.temperature());
}

TEST_CASE("slot reinsertion is reversible up to case") {
  for (const char* text :
       {"Why is this person predicted <=50K instead of >50K?",
        "what if AGE were 45 and Workclass Private",
        "How could I change only occupation to get >50k?"}) {
    const auto q = nlu::SubstitutePlaceholders(text, Adult());
    std::string a = nlu::ReinsertSlots(q), b = text;
    for (auto* s : {&a, &b}) {
      for (char& c : *s) c = static_cast<char>(std::tolower(c));
    }
    CHECK(a == b);
  }
}

TEST_CASE("match does not depend on which feature is named") {
  const auto matcher = nlu::Matcher::Train(MergedBank(), {});
  for (const char* pattern :
       {"How could I change only %s to get >50K prediction?",
        "How important is %s for this prediction?",
        "What if %s were different?"}) {
    std::set<int> labels;
    std::set<std::string> canon;
    for (const auto& f : Adult().features()) {
      std::string text = pattern;
      text.replace(text.find("%s"), 2, f.name);
      const auto r = matcher.Match(text, Adult(), 0.0);
      labels.insert(r.label);
      canon.insert(r.question.canonical_text);
    }
    CHECK_MESSAGE(canon.size() == 1, pattern);
    CHECK_MESSAGE(labels.size() == 1, pattern);
  }
}

TEST_CASE("cosine backend matches every training phrase to itself") {
  const auto bank = MergedBank();
  nlu::MatcherConfig config;
  config.backend = nlu::Backend::kCosineNearest;
  const auto matcher = nlu::Matcher::Train(bank, config);
  for (const auto& e : bank.entries()) {
    const auto top = matcher.Score(e.phrase).front();
    CHECK_MESSAGE(top.confidence == doctest::Approx(1.0), e.phrase);
  }
}

TEST_CASE("svm decision values ignore training order") {
  const auto bank = MergedBank();
  nlu::MatcherConfig config;
  config.calibrate = false;
  config.svm.tolerance = 1e-9;
  config.svm.max_iterations = 1000000;
  std::map<int, std::string> refs;
  for (int label : bank.labels()) refs[label] = bank.ReferenceText(label);
  auto entries = bank.entries();
  const auto a = nlu::Matcher::TrainOnEntries(entries, refs, config);
  std::mt19937_64 rng(5);
  std::shuffle(entries.begin(), entries.end(), rng);
  const auto b =
      nlu::Matcher::TrainOnEntries(entries, refs, a.tfidf(), config);
  for (const char* q : {"give me the reason for thi predict",
                        "how could i chang onli <feature> to get <class>",
                        "what data wa the model train on"}) {
    const auto da = a.DecisionValues(q);
    const auto db = b.DecisionValues(q);
    REQUIRE(da.size() == db.size());
    for (std::size_t i = 0; i < da.size(); ++i) {
      CHECK(std::abs(da[i] - db[i]) <= 1e-6);
    }
  }
}

TEST_CASE("nonsense gives NoMatch under theta 0.5") {
  nlu::MatcherConfig config;
  const auto matcher = nlu::Matcher::Train(MergedBank(), config);
  for (const char* text : {"qwzx vbnm plokij", "", "!!!", "banana trampoline"}) {
    const auto r = matcher.Match(text, Adult(), 0.5);
    CHECK_MESSAGE(r.IsNoMatch(), text);
  }
}

TEST_CASE("matcher refuses a single label") {
  std::vector<corpus::Entry> entries = {{1, "how are parameters set", 1},
                                        {1, "which parameters", 1}};
  CHECK_THROWS_AS(nlu::Matcher::TrainOnEntries(entries, {{1, "how"}}, {}),
                  PreconditionError);
}

TEST_CASE("cross-validation is reproducible") {
  const auto bank = MergedBank();
  nlu::MatcherConfig config;
  const auto folds = corpus::StratifiedFolds(bank, 3, 1);
  const auto a = nlu::CrossValidate(bank, config, folds);
  const auto b = nlu::CrossValidate(bank, config, folds);
  CHECK(a.fold_accuracy == b.fold_accuracy);
  CHECK(a.fold_micro_f1 == a.fold_accuracy);
  int counted = 0;
  for (const auto& bin : a.reliability) counted += bin.count;
  CHECK(counted == static_cast<int>(bank.size()));
}

TEST_CASE("unmatched log is durable and thread safe") {
  const auto path =
      std::filesystem::path(CONVXAI_TEST_VAR) / "nlu_unmatched.jsonl";
  std::filesystem::remove(path);
  nlu::MatchResult r;
  r.question.original_text = "qwzx";
  r.question.canonical_text = "qwzx";
  {
    nlu::UnmatchedLog log(path);
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t) {
      threads.emplace_back([&] {
        for (int i = 0; i < 25; ++i) log.Append(r);
      });
    }
    for (auto& t : threads) t.join();
  }
  nlu::UnmatchedLog reopened(path);
  const auto records = reopened.ReadAll();
  CHECK(records.size() == 200);
  CHECK(records.front()["original"] == "qwzx");
  CHECK(records.front().contains("timestamp"));
  CHECK(nlu::UnmatchedLog(std::filesystem::path(CONVXAI_TEST_VAR) / "none.jsonl")
            .ReadAll()
            .empty());
}

}  // TEST_SUITE

}  // namespace
