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

#ifndef CONVXAI_NLU_MATCHER_H_
#define CONVXAI_NLU_MATCHER_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "convxai/corpus/phrase_bank.h"
#include "convxai/io.h"
#include "convxai/nlu/preprocess.h"
#include "convxai/nlu/svm.h"
#include "convxai/nlu/tfidf.h"
#include "convxai/stats.h"
#include "convxai/tabular/schema.h"

namespace convxai::nlu {

enum class Backend { kCosineNearest, kKernelSvm };

std::string_view BackendName(Backend backend);
Backend ParseBackend(std::string_view name);

struct MatcherConfig {
  Backend backend = Backend::kKernelSvm;
  double theta = 0.5;
  TfidfParams tfidf;
  SvmParams svm;
  // Fit a softmax temperature on out-of-fold decision values. When off the
  // temperature stays at 1.
  bool calibrate = true;
  int calibration_folds = 3;
  std::uint64_t seed = 7;

  Json ToJson() const;
  static MatcherConfig FromJson(const Json& json);
};

struct ScoredLabel {
  int label = 0;
  double confidence = 0.0;
};

struct MatchResult {
  bool matched = false;
  int label = 0;
  double confidence = 0.0;
  std::string reference_text;
  PreprocessedQuestion question;
  // Best three labels, highest confidence first.
  std::vector<ScoredLabel> top;

  bool IsNoMatch() const { return !matched; }
};

class Matcher {
 public:
  Matcher() = default;

  // Fits TF-IDF on the bank phrases and trains the configured backend.
  static Matcher Train(const corpus::PhraseBank& bank,
                       const MatcherConfig& config);
  // Trains on a given TF-IDF model. Throws PreconditionError for fewer than
  // two labels, ValidationError naming entries whose vectors are all zero.
  static Matcher Train(const corpus::PhraseBank& bank, const TfidfModel& tfidf,
                       const MatcherConfig& config);
  // As above for a bare entry list, e.g. the training folds of a split.
  // `references` maps labels to their canonical text.
  static Matcher TrainOnEntries(const std::vector<corpus::Entry>& entries,
                                const std::map<int, std::string>& references,
                                const MatcherConfig& config);
  static Matcher TrainOnEntries(const std::vector<corpus::Entry>& entries,
                                const std::map<int, std::string>& references,
                                const TfidfModel& tfidf,
                                const MatcherConfig& config);

  // Confidence for every label, best first; equal confidences are ordered
  // by ascending label (lowest question id wins).
  std::vector<ScoredLabel> Score(std::string_view canonical_text) const;
  // Raw per-label decision values in label order (cosine similarities for
  // the nearest-neighbour backend).
  std::vector<double> DecisionValues(std::string_view canonical_text) const;
  int Predict(std::string_view canonical_text) const;

  MatchResult Match(std::string_view question, const tabular::Schema& schema,
                    double theta) const;
  MatchResult Match(std::string_view question,
                    const tabular::Schema& schema) const {
    return Match(question, schema, config_.theta);
  }

  const MatcherConfig& config() const { return config_; }
  const TfidfModel& tfidf() const { return tfidf_; }
  const std::vector<int>& labels() const { return labels_; }
  double temperature() const { return temperature_; }
  const std::string& ReferenceText(int label) const;

  void Save(const std::filesystem::path& path) const;
  static Matcher Load(const std::filesystem::path& path);

 private:
  std::vector<double> KernelRow(const SparseVector& x) const;
  std::vector<double> RawScores(const SparseVector& x) const;

  MatcherConfig config_;
  TfidfModel tfidf_;
  std::vector<int> labels_;
  std::map<int, std::string> reference_text_;
  std::vector<SparseVector> vectors_;
  std::vector<int> vector_labels_;
  // One solution per label (kernel backend only).
  std::vector<BinarySvm> svms_;
  double temperature_ = 1.0;
};

struct ReliabilityBin {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
  int correct = 0;
};

struct CvResult {
  MeanSd accuracy;
  MeanSd macro_f1;
  std::vector<double> fold_accuracy;
  std::vector<double> fold_macro_f1;
  // Micro-averaged F1 per fold; equals fold_accuracy for single-label
  // predictions.
  std::vector<double> fold_micro_f1;
  // Confidence of the top label against correctness, ten equal-width bins.
  std::vector<ReliabilityBin> reliability;
  double seconds = 0.0;
};

// Trains on k-1 folds (TF-IDF refit per fold) and tests on the held-out one.
CvResult CrossValidate(const corpus::PhraseBank& bank,
                       const MatcherConfig& config,
                       const corpus::FoldSplit& folds);

// Accuracy of a matcher trained and tested on the whole bank.
double TrainingAccuracy(const corpus::PhraseBank& bank,
                        const MatcherConfig& config);

}  // namespace convxai::nlu

#endif  // CONVXAI_NLU_MATCHER_H_
