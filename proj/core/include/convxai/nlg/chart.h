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

#ifndef CONVXAI_NLG_CHART_H_
#define CONVXAI_NLG_CHART_H_

#include <string>
#include <vector>

#include "convxai/explain/attribution.h"
#include "convxai/io.h"
#include "convxai/tabular/schema.h"

namespace convxai::nlg {

struct ChartItem {
  std::string feature;
  // The profile's value as text.
  std::string display;
  double value = 0.0;
  // +1 pushes towards the attribution's target class (red), -1 away (blue).
  int sign = 0;
};

struct ChartSpec {
  std::string kind = "bar";
  // Sorted by |value|, largest first. Zero contributions are left out.
  std::vector<ChartItem> items;
  std::string target_class;
  // Non-zero features cut by top_n and the sum of their |value|.
  std::size_t dropped_count = 0;
  double dropped_mass = 0.0;

  Json ToJson() const;
};

ChartSpec MakeChartSpec(const explain::Attribution& attribution,
                        const tabular::Schema& schema, std::size_t top_n = 10);

}  // namespace convxai::nlg

#endif  // CONVXAI_NLG_CHART_H_
