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

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <string>

#include "doctest.h"
#include "convxai/corpus/phrase_bank.h"
#include "convxai/error.h"
#include "support/toy_models.h"

namespace {

using namespace convxai;
using convxai::testing::DataPath;

corpus::PhraseBank MergedBank() {
  return corpus::MergeLabels(
      corpus::LoadPhraseBank(DataPath("phrase_bank/bank.jsonl")),
      corpus::LoadMergeSpec(DataPath("phrase_bank/merge_spec.json")));
}

TEST_SUITE("corpus") {

TEST_CASE("merged bank has 329 entries over 52 labels") {
  const auto bank = MergedBank();
  CHECK(bank.size() == 329);
  CHECK(bank.num_labels() == 52);
  CHECK(bank.references().size() == 73);
}

TEST_CASE("xai subset has 111 entries over 14 labels") {
  const auto xai = corpus::XaiSubset(MergedBank());
  CHECK(xai.size() == 111);
  CHECK(xai.num_labels() == 14);
  for (const auto& e : xai.entries()) {
    CHECK(xai.reference(e.question_id).requires_xai);
  }
}

TEST_CASE("empty merge spec undoes the merge") {
  const auto bank = corpus::MergeLabels(MergedBank(), {});
  CHECK(bank.num_labels() == 73);
  for (const auto& e : bank.entries()) CHECK(e.label == e.question_id);
}

TEST_CASE("merged label is the smallest id of its group") {
  const auto bank = MergedBank();
  for (const auto& [label, ids] : bank.label_map()) {
    CHECK(label == *ids.begin());
    for (int id : ids) CHECK(bank.LabelOf(id) == label);
  }
}

TEST_CASE("overlapping merge groups are rejected") {
  const auto bank = corpus::LoadPhraseBank(DataPath("phrase_bank/bank.jsonl"));
  CHECK_THROWS_AS(corpus::MergeLabels(bank, {{1, 2}, {2, 3}}),
                  ValidationError);
  CHECK_THROWS_AS(corpus::MergeLabels(bank, {{1, 999}}), ValidationError);
}

TEST_CASE("filter keeps exactly the pairs with mean score of at least 4") {
  const auto path = DataPath("phrase_bank/annotations.jsonl");
  const auto pairs = corpus::LoadAnnotations(path);
  const auto kept = corpus::FilterCandidates(pairs, 4.0);

  // Independent recompute straight from the file.
  std::set<int> expected;
  std::ifstream in(path);
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    const auto j = Json::parse(line);
    double sum = 0;
    for (int s : j["scores"]) sum += s;
    if (sum / j["scores"].size() >= 4.0) expected.insert(j["pair_id"].get<int>());
  }
  std::set<int> got;
  for (const auto& p : kept) got.insert(p.pair_id);
  CHECK(got == expected);
  CHECK(kept.size() < pairs.size());
  CHECK(!kept.empty());
}

TEST_CASE("filter boundary and errors") {
  std::vector<corpus::AnnotatedPair> pairs(3);
  pairs[0] = {1, 1, "a", {4, 4}};
  pairs[1] = {2, 1, "b", {3, 5, 4}};
  pairs[2] = {3, 1, "c", {4, 3}};
  const auto kept = corpus::FilterCandidates(pairs, 4.0);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].pair_id == 1);
  CHECK(kept[1].pair_id == 2);
  CHECK_THROWS_AS(corpus::FilterCandidates(pairs, 0.5), PreconditionError);
  pairs[1].scores.clear();
  CHECK_THROWS_AS(corpus::FilterCandidates(pairs, 4.0), ValidationError);
}

TEST_CASE("filter is idempotent") {
  const auto pairs =
      corpus::LoadAnnotations(DataPath("phrase_bank/annotations.jsonl"));
  for (double t : {1.0, 3.5, 4.0, 5.0, 6.0}) {
    const auto once = corpus::FilterCandidates(pairs, t);
    const auto twice = corpus::FilterCandidates(once, t);
    REQUIRE(once.size() == twice.size());
    for (std::size_t i = 0; i < once.size(); ++i) {
      CHECK(once[i].pair_id == twice[i].pair_id);
    }
  }
}

TEST_CASE("merge keeps the entries and accounts for every removed label") {
  const auto raw = corpus::LoadPhraseBank(DataPath("phrase_bank/bank.jsonl"));
  const auto spec = corpus::LoadMergeSpec(DataPath("phrase_bank/merge_spec.json"));
  const auto merged = corpus::MergeLabels(raw, spec);

  std::multiset<std::pair<int, std::string>> before, after;
  for (const auto& e : raw.entries()) before.insert({e.question_id, e.phrase});
  for (const auto& e : merged.entries()) after.insert({e.question_id, e.phrase});
  CHECK(before == after);

  const auto unmerged = corpus::MergeLabels(raw, {});
  std::size_t removed = 0;
  for (const auto& group : spec) removed += group.size() - 1;
  CHECK(merged.num_labels() + removed == unmerged.num_labels());
}

TEST_CASE("xai subset is idempotent") {
  const auto once = corpus::XaiSubset(MergedBank());
  const auto twice = corpus::XaiSubset(once);
  REQUIRE(once.size() == twice.size());
  for (std::size_t i = 0; i < once.size(); ++i) {
    CHECK(once.entries()[i].phrase == twice.entries()[i].phrase);
    CHECK(once.entries()[i].label == twice.entries()[i].label);
  }
  CHECK(once.label_map() == twice.label_map());
}

TEST_CASE("stratified folds partition the bank") {
  const auto bank = MergedBank();
  const auto folds = corpus::StratifiedFolds(bank, 3, 1);
  REQUIRE(folds.assignments.size() == bank.size());
  std::multiset<std::size_t> all;
  for (int f = 0; f < 3; ++f) {
    const auto test = folds.TestIndices(f);
    const auto train = folds.TrainIndices(f);
    CHECK(test.size() + train.size() == bank.size());
    all.insert(test.begin(), test.end());
  }
  CHECK(all.size() == bank.size());
  CHECK(std::set<std::size_t>(all.begin(), all.end()).size() == bank.size());

  // Per-label counts differ by at most one across folds.
  std::map<int, std::vector<int>> per_label;
  for (std::size_t i = 0; i < bank.size(); ++i) {
    auto& v = per_label[bank.entries()[i].label];
    v.resize(3);
    ++v[folds.assignments[i]];
  }
  for (const auto& [label, counts] : per_label) {
    const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
    CHECK_MESSAGE(*hi - *lo <= 1, "label " << label);
  }
  const auto sizes = folds.FoldSizes();
  CHECK(*std::max_element(sizes.begin(), sizes.end()) -
            *std::min_element(sizes.begin(), sizes.end()) <= 1);
}

TEST_CASE("folds are reproducible per seed") {
  const auto bank = MergedBank();
  CHECK(corpus::StratifiedFolds(bank, 3, 5).assignments ==
        corpus::StratifiedFolds(bank, 3, 5).assignments);
  CHECK(corpus::StratifiedFolds(bank, 3, 5).assignments !=
        corpus::StratifiedFolds(bank, 3, 6).assignments);
}

TEST_CASE("bank validation reports bad input") {
  std::vector<corpus::ReferenceQuestion> refs = {
      {1, corpus::Category::kHow, "How?", false},
      {1, corpus::Category::kWhy, "Why?", true}};
  CHECK_THROWS_AS(corpus::PhraseBank(refs, {{1, "How?", 1}}), ValidationError);
  refs.pop_back();
  CHECK_THROWS_AS(corpus::PhraseBank(refs, {{1, "How?", 7}}), ValidationError);
  CHECK_NOTHROW(corpus::PhraseBank(refs, {{1, "How?", 1}}));
  CHECK_THROWS_AS(corpus::ParseCategory("Whence"), ParseError);
}

}  // TEST_SUITE

}  // namespace
