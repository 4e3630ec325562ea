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

#ifndef CONVXAI_NLG_RELATIONS_H_
#define CONVXAI_NLG_RELATIONS_H_

#include <string>
#include <string_view>
#include <vector>

#include "convxai/tabular/dataset.h"

namespace convxai::nlg {

enum class RelationKind { kTooLow, kTooHigh, kNotSuitable };

std::string_view RelationName(RelationKind kind);

// How a profile feature relates to the counterfactual that flips it, e.g.
// "Age is too low" when the counterfactual needs a higher age.
struct Relation {
  std::size_t feature = 0;
  RelationKind kind = RelationKind::kNotSuitable;
  double current = 0.0;
  double target = 0.0;
};

// One relation per differing feature, in feature order. Numeric features
// give too_low / too_high, categorical ones not_suitable. Throws
// PreconditionError when either instance has the wrong width.
std::vector<Relation> DiffRelations(const tabular::Instance& original,
                                    const tabular::Instance& cf,
                                    const tabular::Schema& schema);

}  // namespace convxai::nlg

#endif  // CONVXAI_NLG_RELATIONS_H_
