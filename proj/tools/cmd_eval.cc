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

// eval-nlu, train and eval-model.

#include <cstdio>
#include <iostream>

#include "common.h"
#include "convxai/corpus/phrase_bank.h"
#include "convxai/model/evaluation.h"
#include "convxai/model/model_card.h"
#include "convxai/nlu/matcher.h"
#include "convxai/tabular/dataset.h"
#include "convxai/tabular/datasheet.h"

namespace convxai::cli {
namespace {

struct NluOptions {
  CommonOptions common;
  std::string bank;
  std::string merge_spec;
  std::string backend = "KernelSvm";
  int k = 3;
  bool sanity = false;
  bool json = false;
};

std::string PlusMinus(const MeanSd& m) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f \xC2\xB1 %.2f", m.mean, m.sd);
  return buf;
}

int RunEvalNlu(const NluOptions& o) {
  if (o.k < 2) throw UsageError("-k must be at least 2");
  auto config = LoadConfig(o.common);
  const std::string bank_path = o.bank.empty() ? config.phrase_bank.string() : o.bank;
  std::string merge = o.merge_spec;
  if (merge.empty() && o.bank.empty()) merge = config.merge_spec.string();
  auto bank = corpus::LoadPhraseBank(bank_path);
  if (!merge.empty()) bank = corpus::MergeLabels(bank, corpus::LoadMergeSpec(merge));
  auto mc = config.matcher;
  mc.backend = nlu::ParseBackend(o.backend);
  if (o.common.seed) mc.seed = *o.common.seed;
  const std::string approach =
      mc.backend == nlu::Backend::kKernelSvm ? "SVM + TF-IDF" : "Cosine + TF-IDF";

  Json report = Json::array();
  std::printf("%-16s %-6s %8s %8s  %-13s %-13s %8s\n", "Approach", "Set", "Entries",
              "Labels", "Accuracy", "Macro-F1", "Seconds");
  const auto xai = corpus::XaiSubset(bank);
  for (const auto& [name, b] : {std::pair<std::string, const corpus::PhraseBank*>{"full", &bank},
                                {"XAI", &xai}}) {
    if (o.sanity) {
      const double acc = nlu::TrainingAccuracy(*b, mc);
      std::printf("%-16s %-6s %8zu %8zu  %-13.2f %-13s %8s\n", approach.c_str(),
                  name.c_str(), b->size(), b->num_labels(), acc, "-", "-");
      report.push_back({{"set", name}, {"training_accuracy", acc}});
      continue;
    }
    const auto folds = corpus::StratifiedFolds(*b, o.k, mc.seed);
    const auto r = nlu::CrossValidate(*b, mc, folds);
    std::printf("%-16s %-6s %8zu %8zu  %-13s %-13s %8.2f\n", approach.c_str(),
                name.c_str(), b->size(), b->num_labels(),
                PlusMinus(r.accuracy).c_str(), PlusMinus(r.macro_f1).c_str(),
                r.seconds);
    report.push_back({{"set", name},
                      {"entries", b->size()},
                      {"labels", b->num_labels()},
                      {"accuracy", {{"mean", r.accuracy.mean}, {"sd", r.accuracy.sd}}},
                      {"macro_f1", {{"mean", r.macro_f1.mean}, {"sd", r.macro_f1.sd}}},
                      {"fold_accuracy", r.fold_accuracy},
                      {"seconds", r.seconds}});
  }
  if (o.json) std::cout << report.dump(2) << "\n";
  return kOk;
}

struct ModelOptions {
  CommonOptions common;
  int k = 0;
  std::string out;
  std::string card;
};

void PrintCv(const model::CvMetrics& cv, const tabular::Schema& schema) {
  std::printf("%d-fold cross-validation: accuracy %.4f (sd %.4f), macro F1 %.4f, %.1f s\n",
              cv.k, cv.accuracy.mean, cv.accuracy.sd, cv.macro_f1.mean, cv.seconds);
  for (std::size_t c = 0; c < schema.num_classes(); ++c) {
    std::printf("  %-8s precision %.3f recall %.3f  confusion", schema.class_name(c).c_str(),
                cv.precision[c], cv.recall[c]);
    for (long v : cv.confusion[c]) std::printf(" %ld", v);
    std::printf("\n");
  }
}

int RunModel(const ModelOptions& o, bool train) {
  auto config = LoadConfig(o.common);
  if (o.common.seed) config.forest.seed = *o.common.seed;
  const int k = o.k > 0 ? o.k : config.cv_folds;
  if (k < 2) throw UsageError("-k must be at least 2");
  const auto registry = service::LoadRegistry(config.registry);
  const auto& entry = registry.Get(o.common.dataset);
  const auto schema = tabular::LoadSchema(entry.schema);
  const auto data = tabular::LoadCsv(entry.csv, schema);
  const auto cv = model::EvaluateCv(data, config.forest, k);
  PrintCv(cv, schema);
  if (!train) return kOk;
  const auto forest = model::RandomForest::Train(data, config.forest);
  const auto sheet = tabular::LoadDataSheet(entry.datasheet);
  const auto card = model::BuildModelCard(forest, cv, sheet, entry.id, data.size(), entry.notes);
  const std::string out = o.out.empty() ? entry.id + ".forest" : o.out;
  forest.Save(out);
  std::printf("model written to %s (fingerprint %016llx)\n", out.c_str(),
              static_cast<unsigned long long>(forest.Fingerprint()));
  if (!o.card.empty()) {
    std::FILE* f = std::fopen(o.card.c_str(), "w");
    if (f == nullptr) throw UsageError("cannot write " + o.card);
    std::fputs(card.ToJson().dump(2).c_str(), f);
    std::fclose(f);
    std::printf("model card written to %s\n", o.card.c_str());
  }
  return kOk;
}

}  // namespace

void RegisterEval(CLI::App& app, int& code) {
  auto nlu = std::make_shared<NluOptions>();
  auto* e = app.add_subcommand("eval-nlu", "Cross-validate the question matcher");
  AddCommonOptions(e, nlu->common);
  e->add_option("--bank", nlu->bank, "Phrase bank (JSON lines); default from config");
  e->add_option("--merge-spec", nlu->merge_spec, "Label merge spec");
  e->add_option("--backend", nlu->backend, "KernelSvm or CosineNearest")->capture_default_str();
  e->add_option("-k,--folds", nlu->k, "Number of folds")->capture_default_str();
  e->add_flag("--sanity", nlu->sanity, "Test on the training data");
  e->add_flag("--json", nlu->json, "Also print the results as JSON");
  e->callback([nlu, &code] { code = RunEvalNlu(*nlu); });

  for (bool train : {true, false}) {
    auto m = std::make_shared<ModelOptions>();
    auto* cmd = app.add_subcommand(train ? "train" : "eval-model",
                                   train ? "Train the random forest and save it"
                                         : "Cross-validate the random forest");
    AddCommonOptions(cmd, m->common);
    cmd->add_option("-k,--folds", m->k, "Number of folds (default from config)");
    if (train) {
      cmd->add_option("--out", m->out, "Model file");
      cmd->add_option("--card", m->card, "Model card JSON file");
    }
    cmd->callback([m, train, &code] { code = RunModel(*m, train); });
  }
}

}  // namespace convxai::cli
