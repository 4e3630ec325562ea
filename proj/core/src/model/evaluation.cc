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

#include "convxai/model/evaluation.h"

#include <algorithm>
#include <chrono>
#include <map>

#include "convxai/error.h"
#include "convxai/random.h"

namespace convxai::model {

Json CvMetrics::ToJson() const {
  return {{"k", k},
          {"accuracy", {{"mean", accuracy.mean}, {"sd", accuracy.sd}}},
          {"macro_f1", {{"mean", macro_f1.mean}, {"sd", macro_f1.sd}}},
          {"fold_accuracy", fold_accuracy},
          {"confusion", confusion},
          {"precision", precision},
          {"recall", recall},
          {"seconds", seconds}};
}

CvMetrics CvMetrics::FromJson(const Json& j) {
  CvMetrics m;
  m.k = j.at("k").get<int>();
  m.accuracy = {j.at("accuracy").at("mean").get<double>(),
                j.at("accuracy").at("sd").get<double>()};
  m.macro_f1 = {j.at("macro_f1").at("mean").get<double>(),
                j.at("macro_f1").at("sd").get<double>()};
  m.fold_accuracy = j.at("fold_accuracy").get<std::vector<double>>();
  m.confusion = j.at("confusion").get<std::vector<std::vector<long>>>();
  m.precision = j.at("precision").get<std::vector<double>>();
  m.recall = j.at("recall").get<std::vector<double>>();
  m.seconds = j.value("seconds", 0.0);
  return m;
}

std::vector<std::vector<std::size_t>> StratifiedRowFolds(
    const std::vector<int>& labels, int k, std::uint64_t seed) {
  if (k < 2) throw PreconditionError("k must be at least 2");
  if (static_cast<std::size_t>(k) > labels.size()) {
    throw PreconditionError("more folds than rows");
  }
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t pos = 0;
  for (auto& [label, rows] : by_class) {
    Rng rng(MixSeed(seed, 0xf0 + static_cast<std::uint64_t>(label)));
    Shuffle(rows.begin(), rows.end(), rng);
    for (std::size_t r : rows) folds[pos++ % k].push_back(r);
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

CvMetrics EvaluateCv(const tabular::Dataset& dataset,
                     const ForestConfig& config, int k) {
  const auto start = std::chrono::steady_clock::now();
  const auto folds = StratifiedRowFolds(dataset.labels, k, config.seed);
  const std::size_t n_classes = dataset.schema.num_classes();
  CvMetrics m;
  m.k = k;
  m.confusion.assign(n_classes, std::vector<long>(n_classes, 0));
  std::vector<double> fold_f1;
  for (int f = 0; f < k; ++f) {
    std::vector<std::size_t> train_rows;
    for (int g = 0; g < k; ++g) {
      if (g != f) train_rows.insert(train_rows.end(), folds[g].begin(), folds[g].end());
    }
    std::sort(train_rows.begin(), train_rows.end());
    const tabular::Dataset train = tabular::Subset(dataset, train_rows);
    RandomForest rf;
    try {
      ForestConfig fold_config = config;
      fold_config.seed = MixSeed(config.seed, 0xcf + static_cast<std::uint64_t>(f));
      rf = RandomForest::Train(train, fold_config);
    } catch (const PreconditionError& e) {
      throw PreconditionError("fold " + std::to_string(f + 1) + ": " + e.what());
    }
    std::vector<int> truth;
    std::vector<int> predicted;
    for (std::size_t r : folds[f]) {
      truth.push_back(dataset.labels[r]);
      predicted.push_back(rf.Predict(dataset.rows[r]));
      ++m.confusion[truth.back()][predicted.back()];
    }
    long correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) correct += truth[i] == predicted[i];
    m.fold_accuracy.push_back(static_cast<double>(correct) / truth.size());
    fold_f1.push_back(MacroF1(truth, predicted));
  }
  m.accuracy = Summarize(m.fold_accuracy);
  m.macro_f1 = Summarize(fold_f1);
  for (std::size_t c = 0; c < n_classes; ++c) {
    long tp = m.confusion[c][c];
    long pred = 0;
    long actual = 0;
    for (std::size_t o = 0; o < n_classes; ++o) {
      pred += m.confusion[o][c];
      actual += m.confusion[c][o];
    }
    m.precision.push_back(pred > 0 ? static_cast<double>(tp) / pred : 0.0);
    m.recall.push_back(actual > 0 ? static_cast<double>(tp) / actual : 0.0);
  }
  m.seconds = std::chrono::duration<double>(
                  std::chrono::steady_clock::now() - start).count();
  return m;
}

}  // namespace convxai::model
