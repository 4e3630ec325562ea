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
#include <memory>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "convxai/corpus/phrase_bank.h"
#include "convxai/explain/attribution.h"
#include "convxai/explain/counterfactual.h"
#include "convxai/model/random_forest.h"
#include "convxai/nlg/render.h"
#include "convxai/nlg/templates.h"
#include "convxai/nlu/matcher.h"
#include "convxai/policy/policy.h"
#include "convxai/tabular/dataset.h"
#include "convxai/tabular/sampler.h"

namespace {

using namespace convxai;

std::string Data(const std::string& rel) {
  return std::string(CONVXAI_DATA_DIR) + "/" + rel;
}

// Adult data and a forest, built once for every benchmark.
struct World {
  tabular::Dataset data;
  model::RandomForest forest;
  std::unique_ptr<tabular::PerturbationSampler> sampler;
  nlu::Matcher matcher;
  nlg::TemplateSet templates;

  World() {
    data = tabular::LoadCsv(Data("adult/adult.csv"),
                            tabular::LoadSchema(Data("adult/schema.json")));
    forest = model::RandomForest::Train(data, model::ForestConfig{});
    sampler = std::make_unique<tabular::PerturbationSampler>(data, 1);
    const auto bank = corpus::MergeLabels(
        corpus::LoadPhraseBank(Data("phrase_bank/bank.jsonl")),
        corpus::LoadMergeSpec(Data("phrase_bank/merge_spec.json")));
    matcher = nlu::Matcher::Train(bank, nlu::MatcherConfig{});
    templates = nlg::LoadTemplates(Data("templates.jsonl"));
  }

  const tabular::Instance& RowPredicted(int cls) const {
    for (const auto& r : data.rows) {
      if (forest.Predict(r) == cls) return r;
    }
    return data.rows.front();
  }
};

const World& W() {
  static const World w;
  return w;
}

void BM_MatcherMatch(benchmark::State& state) {
  const auto& w = W();
  const std::vector<std::string> questions = {
      "Give me the reason for this prediction!",
      "How could I change only Occupation to get >50K prediction?",
      "What is the scope of change permitted to still get the same prediction?",
      "qwzx vbnm plokij"};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        w.matcher.Match(questions[i++ % questions.size()], w.data.schema));
  }
}
BENCHMARK(BM_MatcherMatch);

void BM_ForestPredictProba(benchmark::State& state) {
  const auto& w = W();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(w.forest.PredictProba(w.data.rows[i++ % w.data.size()]));
  }
}
BENCHMARK(BM_ForestPredictProba);

// Arg 0 uses the tree shortcut, 1 the generic coalition loop. Second arg is
// the background size; the generic loop is far too slow on the full 100.
void BM_KernelShap(benchmark::State& state) {
  const auto& w = W();
  explain::ShapConfig config;
  config.allow_model_shortcut = state.range(0) == 0;
  const auto& full = w.sampler->background();
  const std::vector<tabular::Instance> bg(
      full.begin(), full.begin() + std::min<std::size_t>(state.range(1), full.size()));
  const auto& x = w.data.rows.front();
  for (auto _ : state) {
    benchmark::DoNotOptimize(explain::KernelShap(w.forest, x, bg, 1, config));
  }
}
BENCHMARK(BM_KernelShap)
    ->Args({0, 100})
    ->Args({0, 10})
    ->Args({1, 10})
    ->Unit(benchmark::kMillisecond);

void BM_Counterfactuals(benchmark::State& state) {
  const auto& w = W();
  const auto& x = w.RowPredicted(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(explain::Counterfactuals(w.forest, x, 1, *w.sampler));
  }
}
BENCHMARK(BM_Counterfactuals)->Unit(benchmark::kMillisecond);

void BM_ConstrainedCounterfactual(benchmark::State& state) {
  const auto& w = W();
  const auto& x = w.RowPredicted(0);
  const std::size_t feature = *w.data.schema.FeatureIndex("Capital-gain");
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        explain::ConstrainedCounterfactual(w.forest, x, 1, feature, *w.sampler));
  }
}
BENCHMARK(BM_ConstrainedCounterfactual)->Unit(benchmark::kMillisecond);

void BM_RenderAttribution(benchmark::State& state) {
  const auto& w = W();
  policy::AttributionBody body;
  body.attribution = explain::KernelShap(w.forest, w.data.rows.front(),
                                         w.sampler->background(), 1);
  body.predicted_class = w.forest.Predict(w.data.rows.front());
  const policy::AnswerPayload payload{policy::RouteKind::kFeatureImportance, 47, body};
  const nlg::Renderer renderer(w.templates, w.data.schema);
  for (auto _ : state) benchmark::DoNotOptimize(renderer.Render(payload));
}
BENCHMARK(BM_RenderAttribution);

}  // namespace

BENCHMARK_MAIN();
