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

#ifndef CONVXAI_TESTS_SUPPORT_LOAN_FIXTURE_H_
#define CONVXAI_TESTS_SUPPORT_LOAN_FIXTURE_H_

#include <memory>
#include <string>

#include "convxai/model/evaluation.h"
#include "convxai/model/model_card.h"
#include "convxai/model/random_forest.h"
#include "convxai/policy/glossary.h"
#include "convxai/policy/policy.h"
#include "convxai/tabular/dataset.h"
#include "convxai/tabular/datasheet.h"
#include "convxai/tabular/sampler.h"
#include "support/toy_models.h"

namespace convxai::testing {

// Small forest on the loan data with everything Execute needs.
struct LoanWorld {
  tabular::Dataset data;
  tabular::DataSheet sheet;
  model::RandomForest forest;
  model::ModelCard card;
  std::unique_ptr<tabular::PerturbationSampler> sampler;
  policy::Glossary glossary;

  const tabular::Schema& schema() const { return data.schema; }

  policy::ExecutionContext Context() const {
    policy::ExecutionContext ctx;
    ctx.model = &forest;
    ctx.schema = &data.schema;
    ctx.sampler = sampler.get();
    ctx.model_card = &card;
    ctx.datasheet = &sheet;
    ctx.glossary = &glossary;
    ctx.config.shap.exact_below = 12;
    ctx.config.anchor.min_samples = 200;
    ctx.config.anchor.max_samples_per_rule = 2000;
    ctx.config.anchor.coverage_samples = 500;
    return ctx;
  }

  // First row predicted as `cls`.
  const tabular::Instance& RowPredicted(int cls) const {
    for (const auto& r : data.rows) {
      if (forest.Predict(r) == cls) return r;
    }
    return data.rows.front();
  }
};

inline const LoanWorld& Loan() {
  static const LoanWorld world = [] {
    LoanWorld w;
    const std::string dir = SourcePath("tests/data/loan/").string();
    w.data = tabular::LoadCsv(dir + "loan.csv", tabular::LoadSchema(dir + "schema.json"));
    w.sheet = tabular::LoadDataSheet(dir + "datasheet.json");
    model::ForestConfig fc;
    fc.n_trees = 30;
    w.forest = model::RandomForest::Train(w.data, fc);
    const auto cv = model::EvaluateCv(w.data, fc, 3);
    w.card = model::BuildModelCard(w.forest, cv, w.sheet, "loan", w.data.size());
    w.sampler = std::make_unique<tabular::PerturbationSampler>(w.data, 1, 50);
    w.glossary = policy::LoadGlossary(DataPath("glossary.jsonl"));
    return w;
  }();
  return world;
}

}  // namespace convxai::testing

#endif  // CONVXAI_TESTS_SUPPORT_LOAN_FIXTURE_H_
