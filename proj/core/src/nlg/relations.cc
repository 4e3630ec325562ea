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

#include "convxai/nlg/relations.h"

#include "convxai/error.h"

namespace convxai::nlg {

std::string_view RelationName(RelationKind kind) {
  switch (kind) {
    case RelationKind::kTooLow:
      return "too_low";
    case RelationKind::kTooHigh:
      return "too_high";
    case RelationKind::kNotSuitable:
      return "not_suitable";
  }
  return "unknown";
}

std::vector<Relation> DiffRelations(const tabular::Instance& original,
                                    const tabular::Instance& cf,
                                    const tabular::Schema& schema) {
  if (original.size() != schema.num_features() ||
      cf.size() != schema.num_features()) {
    throw PreconditionError("relations need two instances of the schema's width");
  }
  std::vector<Relation> out;
  for (std::size_t f = 0; f < schema.num_features(); ++f) {
    if (original[f] == cf[f]) continue;
    Relation r{f, RelationKind::kNotSuitable, original[f], cf[f]};
    if (schema.feature(f).numeric()) {
      r.kind = cf[f] > original[f] ? RelationKind::kTooLow : RelationKind::kTooHigh;
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace convxai::nlg
