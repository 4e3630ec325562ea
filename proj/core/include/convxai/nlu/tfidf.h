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

#ifndef CONVXAI_NLU_TFIDF_H_
#define CONVXAI_NLU_TFIDF_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "convxai/io.h"

namespace convxai::nlu {

// Sparse vector with strictly increasing indices.
struct SparseVector {
  std::vector<std::pair<int, double>> items;

  bool empty() const { return items.empty(); }
  double Dot(const SparseVector& other) const;
  double SquaredNorm() const;
};

struct TfidfParams {
  // Tokens in more than max_df * N documents are dropped.
  double max_df = 0.8;
  // Tokens in fewer than min_df documents are dropped.
  int min_df = 1;
};

class TfidfModel {
 public:
  TfidfModel() = default;

  // Each document is a token list as produced by TokenizeAndStem. Throws
  // PreconditionError for an empty corpus and ValidationError when the
  // thresholds leave no tokens.
  static TfidfModel Fit(const std::vector<std::vector<std::string>>& documents,
                        const TfidfParams& params);

  // Raw term counts times idf, L2-normalised. Unknown tokens are ignored, so
  // the result may be the zero vector.
  SparseVector Transform(const std::vector<std::string>& tokens) const;

  const std::map<std::string, int>& vocabulary() const { return vocabulary_; }
  const std::vector<double>& idf() const { return idf_; }
  const TfidfParams& params() const { return params_; }

  Json ToJson() const;
  static TfidfModel FromJson(const Json& json);

 private:
  TfidfParams params_;
  std::map<std::string, int> vocabulary_;
  std::vector<double> idf_;
};

}  // namespace convxai::nlu

#endif  // CONVXAI_NLU_TFIDF_H_
