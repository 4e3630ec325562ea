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

#include "convxai/corpus/phrase_bank.h"

#include <algorithm>
#include <array>

#include "convxai/error.h"
#include "convxai/random.h"

namespace convxai::corpus {
namespace {

constexpr std::array<std::string_view, 10> kCategoryNames = {
    "How",     "HowToBe", "HowToStill", "Input",  "Output",
    "Performance", "WhatIf", "Why",     "WhyNot", "Others"};

}  // namespace

std::string_view CategoryName(Category c) {
  return kCategoryNames[static_cast<std::size_t>(c)];
}

Category ParseCategory(std::string_view name) {
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
    if (kCategoryNames[i] == name) return static_cast<Category>(i);
  }
  throw ParseError("unknown question category '" + std::string(name) + "'");
}

PhraseBank::PhraseBank(std::vector<ReferenceQuestion> references,
                       std::vector<Entry> entries)
    : entries_(std::move(entries)) {
  std::vector<std::string> problems;
  for (auto& r : references) {
    if (r.text.empty()) {
      problems.push_back("question " + std::to_string(r.id) + ": empty text");
    }
    const int id = r.id;
    if (!references_.emplace(id, std::move(r)).second) {
      problems.push_back("duplicate reference id " + std::to_string(id));
    }
  }
  std::set<int> reference_seen;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Entry& e = entries_[i];
    const std::string where = "entry " + std::to_string(i + 1);
    auto ref = references_.find(e.question_id);
    if (ref == references_.end()) {
      problems.push_back(where + ": unknown question id " +
                         std::to_string(e.question_id));
      continue;
    }
    if (e.phrase.empty()) problems.push_back(where + ": empty phrase");
    if (!references_.count(e.label)) {
      problems.push_back(where + ": unknown label " + std::to_string(e.label));
      continue;
    }
    auto [it, inserted] = label_of_.emplace(e.question_id, e.label);
    if (!inserted && it->second != e.label) {
      problems.push_back(where + ": question " + std::to_string(e.question_id) +
                         " carries two labels");
    }
    if (e.phrase == ref->second.text) reference_seen.insert(e.question_id);
    label_map_[e.label].insert(e.question_id);
  }
  for (const auto& [id, r] : references_) {
    if (!reference_seen.count(id)) {
      problems.push_back("reference question " + std::to_string(id) +
                         " is not an entry of its own question");
    }
  }
  if (!problems.empty()) throw ValidationError("E_BANK", std::move(problems));
}

const ReferenceQuestion& PhraseBank::reference(int question_id) const {
  auto it = references_.find(question_id);
  if (it == references_.end()) {
    throw NotFoundError("no reference question " + std::to_string(question_id));
  }
  return it->second;
}

std::vector<int> PhraseBank::labels() const {
  std::vector<int> out;
  for (const auto& [label, ids] : label_map_) out.push_back(label);
  return out;
}

int PhraseBank::LabelOf(int question_id) const {
  auto it = label_of_.find(question_id);
  if (it == label_of_.end()) {
    throw NotFoundError("question " + std::to_string(question_id) +
                        " has no entries");
  }
  return it->second;
}

const std::string& PhraseBank::ReferenceText(int label) const {
  return reference(label).text;
}

PhraseBank LoadPhraseBank(const std::filesystem::path& path) {
  std::vector<ReferenceQuestion> refs;
  std::vector<Entry> entries;
  ForEachJsonLine(path, [&](const Json& j, int line) {
    Entry e;
    e.question_id = j.at("question_id").get<int>();
    e.phrase = j.at("phrase").get<std::string>();
    e.label = j.value("label", e.question_id);
    if (j.value("reference", false)) {
      ReferenceQuestion r;
      r.id = e.question_id;
      r.text = e.phrase;
      r.requires_xai = j.value("requires_xai", false);
      try {
        r.category = ParseCategory(j.value("category", "Others"));
      } catch (const ParseError& err) {
        throw ParseError(path.string() + ":" + std::to_string(line) + ": " +
                         err.what());
      }
      refs.push_back(std::move(r));
    }
    entries.push_back(std::move(e));
  });
  return PhraseBank(std::move(refs), std::move(entries));
}

double AnnotatedPair::MeanScore() const {
  if (scores.empty()) return 0.0;
  double sum = 0.0;
  for (int s : scores) sum += s;
  return sum / static_cast<double>(scores.size());
}

std::vector<AnnotatedPair> LoadAnnotations(const std::filesystem::path& path) {
  std::vector<AnnotatedPair> pairs;
  std::vector<std::string> problems;
  ForEachJsonLine(path, [&](const Json& j, int line) {
    AnnotatedPair p;
    p.pair_id = j.at("pair_id").get<int>();
    p.question_id = j.at("question_id").get<int>();
    p.phrase = j.at("phrase").get<std::string>();
    p.scores = j.at("scores").get<std::vector<int>>();
    p.is_negative = j.value("negative", false);
    const std::string where = path.string() + ":" + std::to_string(line);
    if (p.scores.size() < 2) {
      problems.push_back(where + ": pair " + std::to_string(p.pair_id) +
                         " has fewer than 2 scores");
    }
    for (int s : p.scores) {
      if (s < 1 || s > 6) {
        problems.push_back(where + ": score " + std::to_string(s) +
                           " outside 1..6");
      }
    }
    pairs.push_back(std::move(p));
  });
  if (!problems.empty()) {
    throw ValidationError("E_ANNOTATIONS", std::move(problems));
  }
  return pairs;
}

std::vector<AnnotatedPair> FilterCandidates(
    const std::vector<AnnotatedPair>& pairs, double threshold) {
  if (!(threshold >= 1.0 && threshold <= 6.0)) {
    throw PreconditionError("threshold must lie in [1, 6]");
  }
  std::vector<AnnotatedPair> kept;
  for (const auto& p : pairs) {
    if (p.scores.empty()) {
      throw ValidationError("E_ANNOTATIONS",
                            {"pair " + std::to_string(p.pair_id) +
                             " (question " + std::to_string(p.question_id) +
                             ") has no scores"});
    }
    if (p.MeanScore() >= threshold) kept.push_back(p);
  }
  return kept;
}

MergeSpec LoadMergeSpec(const std::filesystem::path& path) {
  const Json j = ReadJsonFile(path);
  MergeSpec spec;
  try {
    for (const auto& g : j.at("groups")) {
      const auto ids = g.at("ids").get<std::vector<int>>();
      spec.emplace_back(ids.begin(), ids.end());
    }
  } catch (const Json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return spec;
}

PhraseBank MergeLabels(const PhraseBank& bank, const MergeSpec& spec) {
  std::vector<std::string> problems;
  std::map<int, int> new_label;
  for (const auto& group : spec) {
    if (group.empty()) continue;
    const int label = *group.begin();
    for (int id : group) {
      if (!bank.has_question(id)) {
        problems.push_back("merge group names unknown question " +
                           std::to_string(id));
      }
      auto [it, inserted] = new_label.emplace(id, label);
      if (!inserted) {
        problems.push_back("merge groups overlap at question " +
                           std::to_string(id) + " (groups " +
                           std::to_string(it->second) + " and " +
                           std::to_string(label) + ")");
      }
    }
  }
  if (!problems.empty()) throw ValidationError("E_MERGE", std::move(problems));
  std::vector<ReferenceQuestion> refs;
  for (const auto& [id, r] : bank.references()) refs.push_back(r);
  std::vector<Entry> entries = bank.entries();
  for (auto& e : entries) {
    auto it = new_label.find(e.question_id);
    e.label = it == new_label.end() ? e.question_id : it->second;
  }
  return PhraseBank(std::move(refs), std::move(entries));
}

PhraseBank XaiSubset(const PhraseBank& bank) {
  std::vector<ReferenceQuestion> refs;
  for (const auto& [id, r] : bank.references()) {
    if (r.requires_xai) refs.push_back(r);
  }
  std::vector<Entry> entries;
  for (const auto& e : bank.entries()) {
    if (bank.reference(e.question_id).requires_xai) entries.push_back(e);
  }
  return PhraseBank(std::move(refs), std::move(entries));
}

std::vector<std::size_t> FoldSplit::TestIndices(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldSplit::TrainIndices(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] != fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldSplit::FoldSizes() const {
  std::vector<std::size_t> sizes(k, 0);
  for (int a : assignments) ++sizes[a];
  return sizes;
}

FoldSplit StratifiedFolds(const PhraseBank& bank, int k, std::uint64_t seed) {
  if (k < 2) throw PreconditionError("k must be at least 2");
  if (bank.empty()) throw PreconditionError("cannot fold an empty bank");
  if (static_cast<std::size_t>(k) > bank.size()) {
    throw PreconditionError("k = " + std::to_string(k) + " exceeds the " +
                            std::to_string(bank.size()) + " entries");
  }
  std::map<int, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < bank.size(); ++i) {
    by_label[bank.entries()[i].label].push_back(i);
  }
  FoldSplit split{k, seed, std::vector<int>(bank.size(), 0)};
  std::size_t position = 0;
  for (auto& [label, members] : by_label) {
    Rng rng(MixSeed(seed, static_cast<std::uint64_t>(label)));
    Shuffle(members.begin(), members.end(), rng);
    for (std::size_t idx : members) {
      split.assignments[idx] = static_cast<int>(position % k);
      ++position;
    }
  }
  return split;
}

}  // namespace convxai::corpus
