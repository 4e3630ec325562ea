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

#include "convxai/stats.h"

#include <cmath>
#include <numeric>
#include <set>

namespace convxai {

MeanSd Summarize(const std::vector<double>& values) {
  MeanSd r;
  if (values.empty()) return r;
  r.mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  double var = 0.0;
  for (double v : values) var += (v - r.mean) * (v - r.mean);
  r.sd = std::sqrt(var / values.size());
  return r;
}

double MacroF1(const std::vector<int>& truth, const std::vector<int>& predicted) {
  std::set<int> labels(truth.begin(), truth.end());
  labels.insert(predicted.begin(), predicted.end());
  if (labels.empty()) return 0.0;
  double sum = 0.0;
  for (int l : labels) {
    int tp = 0;
    int fp = 0;
    int fn = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      if (predicted[i] == l && truth[i] == l) ++tp;
      else if (predicted[i] == l) ++fp;
      else if (truth[i] == l) ++fn;
    }
    const int denom = 2 * tp + fp + fn;
    sum += denom > 0 ? 2.0 * tp / denom : 0.0;
  }
  return sum / static_cast<double>(labels.size());
}

double MicroF1(const std::vector<int>& truth, const std::vector<int>& predicted) {
  // Pooled counts over all labels.
  long tp = 0;
  long fp = 0;
  long fn = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (predicted[i] == truth[i]) {
      ++tp;
    } else {
      ++fp;
      ++fn;
    }
  }
  const long denom = 2 * tp + fp + fn;
  return denom > 0 ? 2.0 * tp / denom : 0.0;
}

}  // namespace convxai
