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

#ifndef CONVXAI_STATS_H_
#define CONVXAI_STATS_H_

#include <vector>

namespace convxai {

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

// Mean and population standard deviation.
MeanSd Summarize(const std::vector<double>& values);

// Unweighted mean of per-label F1 over the labels occurring in either list.
double MacroF1(const std::vector<int>& truth, const std::vector<int>& predicted);
// F1 from pooled true/false positives and false negatives.
double MicroF1(const std::vector<int>& truth, const std::vector<int>& predicted);

}  // namespace convxai

#endif  // CONVXAI_STATS_H_
