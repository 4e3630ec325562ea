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

#ifndef CONVXAI_CORPUS_PHRASE_BANK_H_
#define CONVXAI_CORPUS_PHRASE_BANK_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "convxai/io.h"

namespace convxai::corpus {

enum class Category {
  kHow,
  kHowToBe,
  kHowToStill,
  kInput,
  kOutput,
  kPerformance,
  kWhatIf,
  kWhy,
  kWhyNot,
  kOthers,
};

std::string_view CategoryName(Category c);
// Throws ParseError for unknown names.
Category ParseCategory(std::string_view name);

struct ReferenceQuestion {
  int id = 0;
  Category category = Category::kOthers;
  std::string text;
  bool requires_xai = false;
};

// One training phrase. `label` is the intent label: the smallest question id
// of the merged group the question belongs to.
struct Entry {
  int question_id = 0;
  std::string phrase;
  int label = 0;
};

class PhraseBank {
 public:
  PhraseBank() = default;
  // Validates the invariants and throws ValidationError listing every
  // problem: unique reference ids, non-empty texts, each reference present
  // as an entry of its own question, labels naming known questions, one
  // label per question.
  PhraseBank(std::vector<ReferenceQuestion> references,
             std::vector<Entry> entries);

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const std::map<int, ReferenceQuestion>& references() const {
    return references_;
  }
  const ReferenceQuestion& reference(int question_id) const;
  bool has_question(int question_id) const {
    return references_.count(question_id) > 0;
  }

  // Intent label -> question ids sharing it. Only labels with entries.
  const std::map<int, std::set<int>>& label_map() const { return label_map_; }
  std::size_t num_labels() const { return label_map_.size(); }
  std::vector<int> labels() const;
  // Label currently assigned to a question id.
  int LabelOf(int question_id) const;
  // Canonical reference text of a label (its lowest question id).
  const std::string& ReferenceText(int label) const;

 private:
  std::map<int, ReferenceQuestion> references_;
  std::vector<Entry> entries_;
  std::map<int, std::set<int>> label_map_;
  std::map<int, int> label_of_;
};

// Line-delimited bank: {question_id, phrase, label, category, requires_xai,
// reference}. Exactly one record per question has reference=true.
PhraseBank LoadPhraseBank(const std::filesystem::path& path);

struct AnnotatedPair {
  int pair_id = 0;
  int question_id = 0;
  std::string phrase;
  std::vector<int> scores;
  bool is_negative = false;

  double MeanScore() const;
};

// Line-delimited annotations: {pair_id, question_id, phrase, scores,
// negative}. Scores must lie in 1..6 and each pair needs at least two.
std::vector<AnnotatedPair> LoadAnnotations(const std::filesystem::path& path);

// Pairs whose mean score is >= threshold, order preserved. Throws
// ValidationError naming a pair without scores, PreconditionError for a
// threshold outside [1, 6].
std::vector<AnnotatedPair> FilterCandidates(
    const std::vector<AnnotatedPair>& pairs, double threshold);

using MergeSpec = std::vector<std::set<int>>;

MergeSpec LoadMergeSpec(const std::filesystem::path& path);

// Relabels every question to the smallest id of its merge group (or to
// itself). Labels are recomputed from question ids, so an empty spec undoes
// any earlier merge. Throws ValidationError on overlapping groups or ids
// missing from the bank.
PhraseBank MergeLabels(const PhraseBank& bank, const MergeSpec& spec);

// Entries of questions that require an XAI method.
PhraseBank XaiSubset(const PhraseBank& bank);

struct FoldSplit {
  int k = 0;
  std::uint64_t seed = 0;
  // Fold id per entry index.
  std::vector<int> assignments;

  std::vector<std::size_t> TestIndices(int fold) const;
  std::vector<std::size_t> TrainIndices(int fold) const;
  std::vector<std::size_t> FoldSizes() const;
};

// Shuffles each label's entries with a seeded stream, lays labels out in
// ascending order and deals entries round-robin into k folds. Per-label
// counts differ by at most one across folds.
FoldSplit StratifiedFolds(const PhraseBank& bank, int k, std::uint64_t seed);

}  // namespace convxai::corpus

#endif  // CONVXAI_CORPUS_PHRASE_BANK_H_
