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

#ifndef CONVXAI_NLU_UNMATCHED_LOG_H_
#define CONVXAI_NLU_UNMATCHED_LOG_H_

#include <filesystem>
#include <mutex>
#include <vector>

#include "convxai/io.h"
#include "convxai/nlu/matcher.h"

namespace convxai::nlu {

// Append-only JSON-lines store of questions that found no match. Every
// append is flushed and synced before returning, so records survive a
// restart. Appends from several threads are serialised.
class UnmatchedLog {
 public:
  explicit UnmatchedLog(std::filesystem::path path);

  // Appends {timestamp, original, preprocessed, candidates}. Throws IoError
  // when the file cannot be written.
  Json Append(const MatchResult& result);

  // All records in append order. A missing file reads as empty.
  std::vector<Json> ReadAll() const;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  mutable std::mutex mu_;
};

// UTC time in ISO-8601 with milliseconds.
std::string UtcTimestamp();

}  // namespace convxai::nlu

#endif  // CONVXAI_NLU_UNMATCHED_LOG_H_
