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

#include "convxai/nlu/unmatched_log.h"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include <unistd.h>

#include "convxai/error.h"

namespace convxai::nlu {

std::string UtcTimestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec, static_cast<int>(ms));
  return buf;
}

UnmatchedLog::UnmatchedLog(std::filesystem::path path) : path_(std::move(path)) {}

Json UnmatchedLog::Append(const MatchResult& result) {
  Json candidates = Json::array();
  for (const auto& c : result.top) {
    candidates.push_back({{"label", c.label}, {"confidence", c.confidence}});
  }
  Json record = {{"timestamp", UtcTimestamp()},
                 {"original", result.question.original_text},
                 {"preprocessed", result.question.canonical_text},
                 {"candidates", candidates}};
  const std::string line = record.dump() + "\n";

  std::lock_guard<std::mutex> lock(mu_);
  std::error_code ec;
  if (path_.has_parent_path()) {
    std::filesystem::create_directories(path_.parent_path(), ec);
  }
  std::FILE* f = std::fopen(path_.c_str(), "a");
  if (f == nullptr) throw IoError("cannot open unmatched log " + path_.string());
  const bool ok = std::fwrite(line.data(), 1, line.size(), f) == line.size() &&
                  std::fflush(f) == 0 && ::fsync(::fileno(f)) == 0;
  std::fclose(f);
  if (!ok) throw IoError("cannot append to unmatched log " + path_.string());
  return record;
}

std::vector<Json> UnmatchedLog::ReadAll() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<Json> out;
  if (!std::filesystem::exists(path_)) return out;
  ForEachJsonLine(path_, [&](const Json& j, int) { out.push_back(j); });
  return out;
}

}  // namespace convxai::nlu
