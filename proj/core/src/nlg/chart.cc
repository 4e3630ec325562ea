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

#include "convxai/nlg/chart.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace convxai::nlg {

Json ChartSpec::ToJson() const {
  Json items_json = Json::array();
  for (const auto& it : items) {
    items_json.push_back({{"feature", it.feature},
                          {"display", it.display},
                          {"value", it.value},
                          {"sign", it.sign}});
  }
  return Json{{"kind", kind},
              {"items", items_json},
              {"target_class", target_class},
              {"dropped_count", dropped_count},
              {"dropped_mass", dropped_mass}};
}

ChartSpec MakeChartSpec(const explain::Attribution& attribution,
                        const tabular::Schema& schema, std::size_t top_n) {
  ChartSpec spec;
  spec.target_class = schema.class_name(attribution.target_class);
  const auto& phi = attribution.phi;
  std::vector<std::size_t> order;
  for (std::size_t f = 0; f < phi.size(); ++f) {
    if (phi[f] != 0.0) order.push_back(f);
  }
  // Ties keep feature order.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(phi[a]) > std::abs(phi[b]);
  });
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t f = order[i];
    if (i >= top_n) {
      ++spec.dropped_count;
      spec.dropped_mass += std::abs(phi[f]);
      continue;
    }
    ChartItem item;
    item.feature = schema.feature(f).name;
    if (attribution.instance.size() == phi.size()) {
      item.display = schema.FormatValue(f, attribution.instance[f]);
    }
    item.value = phi[f];
    item.sign = phi[f] > 0 ? 1 : -1;
    spec.items.push_back(std::move(item));
  }
  return spec;
}

}  // namespace convxai::nlg
