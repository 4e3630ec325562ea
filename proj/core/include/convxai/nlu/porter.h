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

#ifndef CONVXAI_NLU_PORTER_H_
#define CONVXAI_NLU_PORTER_H_

#include <string>
#include <string_view>

namespace convxai::nlu {

// Porter (1980) suffix-stripping stemmer for lowercase ASCII words. Words of
// one or two letters are returned unchanged.
std::string PorterStem(std::string_view word);

}  // namespace convxai::nlu

#endif  // CONVXAI_NLU_PORTER_H_
