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

#ifndef CONVXAI_NLG_RENDER_H_
#define CONVXAI_NLG_RENDER_H_

#include <optional>
#include <string>
#include <vector>

#include "convxai/io.h"
#include "convxai/nlg/chart.h"
#include "convxai/nlg/templates.h"
#include "convxai/policy/policy.h"

namespace convxai::nlg {

struct DiffRow {
  std::string feature;
  std::string original;
  // One entry per counterfactual.
  std::vector<std::string> proposed;
  std::vector<bool> changed;
};

struct RenderedAnswer {
  std::string text;
  std::optional<ChartSpec> chart;
  // Second profile's chart for two-profile comparisons.
  std::optional<ChartSpec> second_chart;
  std::vector<DiffRow> diff_table;

  Json ToJson() const;
};

// Up to one decimal place, trailing ".0" removed: 66.34 -> "66.3", 39 -> "39".
std::string FormatDisplay(double value);
std::string FormatValue(const tabular::Schema& schema, std::size_t feature,
                        double value);
// "a", "a and b", "a, b and c"
std::string JoinAnd(const std::vector<std::string>& items);

class Renderer {
 public:
  Renderer(const TemplateSet& templates, const tabular::Schema& schema,
           std::size_t chart_top_n = 10)
      : templates_(templates), schema_(schema), top_n_(chart_top_n) {}

  // Deterministic. Throws Error("E_TEMPLATE") for a missing template or an
  // unfilled placeholder.
  RenderedAnswer Render(const policy::AnswerPayload& payload) const;

  // "I recorded the profile: [...]. With this profile, ..."
  std::string ProfileAnnouncement(const tabular::Instance& instance,
                                  int predicted_class) const;
  std::string NoMatch() const;
  // Text for a turn that failed outside the explainers.
  std::string InternalError(const std::string& code) const;

 private:
  std::string ClassFields(int c, Fields& f) const;
  std::string Profile(const tabular::Instance& x) const;

  RenderedAnswer Attribution(const policy::AttributionBody& b,
                             const std::string& route) const;
  RenderedAnswer TwoAttributions(const policy::TwoAttributionBody& b,
                                 const std::string& route) const;
  RenderedAnswer Counterfactual(const policy::CounterfactualBody& b,
                                const std::string& route) const;
  RenderedAnswer Anchor(const policy::AnchorBody& b,
                        const std::string& route) const;
  RenderedAnswer Prediction(const policy::PredictionBody& b,
                            const std::string& route) const;
  RenderedAnswer Metadata(const policy::MetadataBody& b,
                          const std::string& route) const;
  RenderedAnswer Clarification(const policy::ClarificationBody& b,
                               const std::string& route) const;
  RenderedAnswer Notice(const policy::NoticeBody& b,
                        const std::string& route) const;

  const TemplateSet& templates_;
  const tabular::Schema& schema_;
  std::size_t top_n_;
};

}  // namespace convxai::nlg

#endif  // CONVXAI_NLG_RENDER_H_
