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

#include "convxai/model/model_card.h"

#include <cmath>
#include <cstdio>

#include "convxai/error.h"

namespace convxai::model {
namespace {

std::string Fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string JoinOr(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += i + 1 == items.size() ? " or " : ", ";
    out += items[i];
  }
  return out;
}

// Worst off-diagonal cell of the confusion matrix, (truth, predicted).
std::pair<int, int> WorstConfusion(const CvMetrics& cv) {
  std::pair<int, int> worst{-1, -1};
  long most = -1;
  for (std::size_t t = 0; t < cv.confusion.size(); ++t) {
    for (std::size_t p = 0; p < cv.confusion[t].size(); ++p) {
      if (t != p && cv.confusion[t][p] > most) {
        most = cv.confusion[t][p];
        worst = {static_cast<int>(t), static_cast<int>(p)};
      }
    }
  }
  return worst;
}

long RowTotal(const CvMetrics& cv, int t) {
  long s = 0;
  for (long v : cv.confusion[t]) s += v;
  return s;
}

}  // namespace

const std::vector<std::string>& ModelCard::FieldNames() {
  static const std::vector<std::string> names = {
      "algorithm",          "hyperparameters",      "training_data",
      "accuracy",           "error_rate",           "class_metrics",
      "confusion",          "mistakes",             "correct_situations",
      "incorrect_situations", "limitations",        "capability",
      "output_kind",        "output_meaning",       "usage",
      "excluded_data"};
  return names;
}

std::optional<std::string> ModelCard::Field(std::string_view name) const {
  const std::string folds = std::to_string(cv.k) + "-fold cross-validation";
  if (name == "algorithm") return algorithm;
  if (name == "hyperparameters") {
    const auto& h = hyperparameters;
    return std::to_string(h.n_trees) + " trees, " +
           (h.max_depth > 0 ? "maximum depth " + std::to_string(h.max_depth)
                            : std::string("unlimited depth")) +
           ", at least " + std::to_string(h.min_leaf) + " training row" +
           (h.min_leaf == 1 ? "" : "s") + " per leaf, " +
           (h.max_features > 0 ? std::to_string(h.max_features)
                               : std::string("the square root of the number of")) +
           " features tried per split, random seed " + std::to_string(h.seed);
  }
  if (name == "training_data") {
    return "the " + dataset_id + " data set with " + std::to_string(n_rows) +
           " rows and " + std::to_string(n_features) +
           " features; after cross-validation the model is retrained on all rows";
  }
  if (name == "accuracy") {
    return Fixed(cv.accuracy.mean) + " (standard deviation " +
           Fixed(cv.accuracy.sd, 3) + ") in " + folds;
  }
  if (name == "error_rate") {
    return Fixed(1.0 - cv.accuracy.mean) + " in " + folds;
  }
  if (name == "class_metrics") {
    std::string s;
    for (std::size_t c = 0; c < classes.size(); ++c) {
      if (c > 0) s += "; ";
      s += "precision " + Fixed(cv.precision[c]) + " and recall " +
           Fixed(cv.recall[c]) + " for " + classes[c];
    }
    return s;
  }
  if (name == "confusion") {
    std::string s;
    for (std::size_t t = 0; t < classes.size(); ++t) {
      if (t > 0) s += "; ";
      s += "of " + std::to_string(RowTotal(cv, static_cast<int>(t))) +
           " rows labelled " + classes[t] + ", " +
           std::to_string(cv.confusion[t][t]) + " were predicted correctly";
    }
    return s;
  }
  if (name == "mistakes") {
    const auto [t, p] = WorstConfusion(cv);
    if (t < 0) return std::string("it made no mistakes in ") + folds;
    return "predicting " + classes[p] + " when the true " + target_name +
           " is " + classes[t] + " (" + std::to_string(cv.confusion[t][p]) +
           " of " + std::to_string(RowTotal(cv, t)) + " such rows in " +
           folds + ")";
  }
  if (name == "correct_situations" || name == "incorrect_situations") {
    const bool best = name == "correct_situations";
    std::size_t pick = 0;
    for (std::size_t c = 1; c < cv.recall.size(); ++c) {
      if (best ? cv.recall[c] > cv.recall[pick] : cv.recall[c] < cv.recall[pick]) {
        pick = c;
      }
    }
    return "profiles whose true " + target_name + " is " + classes[pick] +
           " (recall " + Fixed(cv.recall[pick]) + " in " + folds + ")";
  }
  if (name == "limitations") return limitations;
  if (name == "capability") {
    return "predicting " + target_name + " (" + JoinOr(classes) + ") from " +
           std::to_string(n_features) + " profile features";
  }
  if (name == "output_kind") {
    return "one " + target_name + " class out of " + JoinOr(classes) +
           ", together with a probability for each class";
  }
  if (name == "output_meaning") {
    return "the " + target_name +
           " class that most trees of the forest vote for, given the profile";
  }
  if (name == "usage") return usage;
  if (name == "excluded_data") return excluded_data;
  return std::nullopt;
}

Json ModelCard::ToJson() const {
  return Json{{"format", "convxai.model_card/1"},
              {"algorithm", algorithm},
              {"hyperparameters", hyperparameters.ToJson()},
              {"dataset_id", dataset_id},
              {"n_rows", n_rows},
              {"n_features", n_features},
              {"target_name", target_name},
              {"classes", classes},
              {"cv", cv.ToJson()},
              {"limitations", limitations},
              {"usage", usage},
              {"excluded_data", excluded_data}};
}

ModelCard ModelCard::FromJson(const Json& json) {
  ModelCard c;
  try {
    c.algorithm = json.at("algorithm").get<std::string>();
    c.hyperparameters = ForestConfig::FromJson(json.at("hyperparameters"));
    c.dataset_id = json.at("dataset_id").get<std::string>();
    c.n_rows = json.at("n_rows").get<std::size_t>();
    c.n_features = json.at("n_features").get<std::size_t>();
    c.target_name = json.at("target_name").get<std::string>();
    c.classes = json.at("classes").get<std::vector<std::string>>();
    c.cv = CvMetrics::FromJson(json.at("cv"));
    c.limitations = json.at("limitations").get<std::string>();
    c.usage = json.at("usage").get<std::string>();
    c.excluded_data = json.value("excluded_data", std::string());
  } catch (const Json::exception& e) {
    throw ParseError(std::string("model card: ") + e.what());
  }
  return c;
}

ModelCard BuildModelCard(const RandomForest& model, const CvMetrics& cv,
                         const tabular::DataSheet& datasheet,
                         std::string dataset_id, std::size_t n_rows,
                         const ModelCardNotes& notes) {
  if (!model.trained()) throw PreconditionError("model card needs a trained model");
  if (cv.k == 0) throw PreconditionError("model card needs cross-validation metrics");
  const auto& schema = model.schema();
  std::vector<std::string> problems;
  auto unit = [&](double v, const std::string& what) {
    if (!(v >= 0.0 && v <= 1.0)) problems.push_back(what + " outside [0, 1]");
  };
  unit(cv.accuracy.mean, "accuracy");
  unit(cv.macro_f1.mean, "macro F1");
  for (double v : cv.precision) unit(v, "precision");
  for (double v : cv.recall) unit(v, "recall");
  if (cv.confusion.size() != schema.num_classes() ||
      cv.precision.size() != schema.num_classes() ||
      cv.recall.size() != schema.num_classes()) {
    problems.push_back("metrics do not cover the model's classes");
  }
  if (!problems.empty()) throw ValidationError("E_MODEL_CARD", problems);

  ModelCard card;
  card.algorithm = "random forest";
  card.hyperparameters = model.config();
  card.dataset_id = std::move(dataset_id);
  card.n_rows = n_rows;
  card.n_features = schema.num_features();
  card.target_name = schema.target_name();
  card.classes = schema.classes();
  card.cv = cv;
  card.limitations =
      notes.limitations.empty() ? datasheet.biases_limitations : notes.limitations;
  card.usage = notes.usage.empty()
                   ? "exploring how the model behaves on individual profiles; "
                     "it is not meant for decisions about real people"
                   : notes.usage;
  card.excluded_data = datasheet.excluded_data;
  return card;
}

}  // namespace convxai::model
