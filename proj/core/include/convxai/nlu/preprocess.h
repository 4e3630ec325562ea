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

#ifndef CONVXAI_NLU_PREPROCESS_H_
#define CONVXAI_NLU_PREPROCESS_H_

#include <string>
#include <string_view>
#include <vector>

#include "convxai/io.h"
#include "convxai/tabular/schema.h"

namespace convxai::nlu {

inline constexpr std::string_view kFeatureToken = "<feature>";
inline constexpr std::string_view kClassToken = "<class>";
inline constexpr std::string_view kValueToken = "<value>";

// Slot values in the order they occur, each exactly as typed by the user.
struct Slots {
  std::vector<std::string> features;
  std::vector<std::string> classes;
  std::vector<std::string> values;

  bool empty() const {
    return features.empty() && classes.empty() && values.empty();
  }
  Json ToJson() const;
};

struct PreprocessedQuestion {
  std::string canonical_text;
  Slots slots;
  std::string original_text;
};

// Replaces schema feature names with <feature>, class labels with <class>
// and literal values with <value>. Matching is case-insensitive and
// longest-first; an alphanumeric edge of a name must sit on a word
// boundary. Values are numeric literals and category names of the features
// mentioned in the question, plus hyphenated category names of any feature.
PreprocessedQuestion SubstitutePlaceholders(std::string_view text,
                                            const tabular::Schema& schema);

// Puts the recorded slot texts back in place of the placeholders.
std::string ReinsertSlots(const PreprocessedQuestion& question);

// Lowercases, splits on anything that is not a letter or digit, drops
// tokens shorter than two characters and Porter-stems the rest.
// Placeholders stay atomic.
std::vector<std::string> TokenizeAndStem(std::string_view text);

}  // namespace convxai::nlu

#endif  // CONVXAI_NLU_PREPROCESS_H_
