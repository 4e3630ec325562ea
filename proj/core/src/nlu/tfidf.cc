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

#include "convxai/nlu/tfidf.h"

#include <cmath>
#include <set>

#include "convxai/error.h"

namespace convxai::nlu {

double SparseVector::Dot(const SparseVector& other) const {
  double sum = 0.0;
  auto a = items.begin();
  auto b = other.items.begin();
  while (a != items.end() && b != other.items.end()) {
    if (a->first == b->first) {
      sum += a->second * b->second;
      ++a;
      ++b;
    } else if (a->first < b->first) {
      ++a;
    } else {
      ++b;
    }
  }
  return sum;
}

double SparseVector::SquaredNorm() const {
  double sum = 0.0;
  for (const auto& [i, v] : items) sum += v * v;
  return sum;
}

TfidfModel TfidfModel::Fit(
    const std::vector<std::vector<std::string>>& documents,
    const TfidfParams& params) {
  if (documents.empty()) throw PreconditionError("empty TF-IDF corpus");
  if (!(params.max_df > 0.0 && params.max_df <= 1.0)) {
    throw PreconditionError("max_df must lie in (0, 1]");
  }
  std::map<std::string, int> df;
  for (const auto& doc : documents) {
    const std::set<std::string> unique(doc.begin(), doc.end());
    for (const auto& t : unique) ++df[t];
  }
  const double n = static_cast<double>(documents.size());
  const double max_count = params.max_df * n;
  TfidfModel model;
  model.params_ = params;
  for (const auto& [token, count] : df) {
    if (count > max_count || count < params.min_df) continue;
    model.vocabulary_.emplace(token, static_cast<int>(model.idf_.size()));
    model.idf_.push_back(std::log((1.0 + n) / (1.0 + count)) + 1.0);
  }
  if (model.vocabulary_.empty()) {
    throw ValidationError("E_TFIDF",
                          {"no token survives max_df/min_df filtering"});
  }
  return model;
}

SparseVector TfidfModel::Transform(
    const std::vector<std::string>& tokens) const {
  std::map<int, double> counts;
  for (const auto& t : tokens) {
    auto it = vocabulary_.find(t);
    if (it != vocabulary_.end()) counts[it->second] += 1.0;
  }
  SparseVector v;
  double norm = 0.0;
  for (const auto& [idx, c] : counts) {
    const double w = c * idf_[idx];
    v.items.emplace_back(idx, w);
    norm += w * w;
  }
  if (norm > 0) {
    norm = std::sqrt(norm);
    for (auto& item : v.items) item.second /= norm;
  }
  return v;
}

Json TfidfModel::ToJson() const {
  Json vocab = Json::object();
  for (const auto& [t, i] : vocabulary_) vocab[t] = i;
  return {{"max_df", params_.max_df},
          {"min_df", params_.min_df},
          {"vocabulary", vocab},
          {"idf", idf_}};
}

TfidfModel TfidfModel::FromJson(const Json& json) {
  TfidfModel m;
  m.params_.max_df = json.at("max_df").get<double>();
  m.params_.min_df = json.at("min_df").get<int>();
  for (const auto& [t, i] : json.at("vocabulary").items()) {
    m.vocabulary_[t] = i.get<int>();
  }
  m.idf_ = json.at("idf").get<std::vector<double>>();
  for (const auto& [t, i] : m.vocabulary_) {
    if (i < 0 || static_cast<std::size_t>(i) >= m.idf_.size()) {
      throw ParseError("tfidf vocabulary index out of range for '" + t + "'");
    }
  }
  return m;
}

}  // namespace convxai::nlu
