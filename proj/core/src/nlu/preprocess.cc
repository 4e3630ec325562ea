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

#include "convxai/nlu/preprocess.h"

#include <algorithm>
#include <cctype>
#include <set>

#include "convxai/nlu/porter.h"

namespace convxai::nlu {
namespace {

enum class SlotKind { kFeature, kClass, kValue };

struct Span {
  std::size_t begin;
  std::size_t end;
  SlotKind kind;
};

struct Name {
  std::string text;
  SlotKind kind;
};

bool IsAlnum(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || u >= 0x80;
}

bool IsDigit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

// Case-insensitive match of `name` at `pos` honouring word boundaries on the
// alphanumeric edges of the name.
bool MatchesAt(std::string_view text, std::size_t pos, std::string_view name) {
  if (name.empty() || pos + name.size() > text.size()) return false;
  if (!tabular::EqualsIgnoreCase(text.substr(pos, name.size()), name)) {
    return false;
  }
  if (IsAlnum(name.front()) && pos > 0 && IsAlnum(text[pos - 1])) return false;
  const std::size_t end = pos + name.size();
  if (IsAlnum(name.back()) && end < text.size() && IsAlnum(text[end])) {
    return false;
  }
  return true;
}

// Length of a numeric literal at `pos` ("40", "66.3"), or 0.
std::size_t NumberAt(std::string_view text, std::size_t pos) {
  if (!IsDigit(text[pos])) return 0;
  if (pos > 0 && IsAlnum(text[pos - 1])) return 0;
  std::size_t end = pos;
  while (end < text.size() && IsDigit(text[end])) ++end;
  if (end + 1 < text.size() && text[end] == '.' && IsDigit(text[end + 1])) {
    ++end;
    while (end < text.size() && IsDigit(text[end])) ++end;
  }
  if (end < text.size() && IsAlnum(text[end])) return 0;
  return end - pos;
}

void SortLongestFirst(std::vector<Name>& names) {
  std::stable_sort(names.begin(), names.end(), [](const Name& a, const Name& b) {
    return a.text.size() > b.text.size();
  });
}

bool Overlaps(const std::vector<Span>& spans, std::size_t begin,
              std::size_t end) {
  for (const auto& s : spans) {
    if (begin < s.end && s.begin < end) return true;
  }
  return false;
}

// Left-to-right scan; at each position the longest matching name wins.
void Scan(std::string_view text, const std::vector<Name>& names,
          bool with_numbers, std::vector<Span>& spans) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t len = 0;
    SlotKind kind = SlotKind::kValue;
    for (const auto& n : names) {
      if (MatchesAt(text, pos, n.text) &&
          !Overlaps(spans, pos, pos + n.text.size())) {
        len = n.text.size();
        kind = n.kind;
        break;
      }
    }
    if (len == 0 && with_numbers) {
      const std::size_t num = NumberAt(text, pos);
      if (num > 0 && !Overlaps(spans, pos, pos + num)) {
        len = num;
        kind = SlotKind::kValue;
      }
    }
    if (len > 0) {
      spans.push_back({pos, pos + len, kind});
      pos += len;
    } else {
      ++pos;
    }
  }
}

std::string_view TokenFor(SlotKind kind) {
  switch (kind) {
    case SlotKind::kFeature:
      return kFeatureToken;
    case SlotKind::kClass:
      return kClassToken;
    case SlotKind::kValue:
      return kValueToken;
  }
  return kValueToken;
}

}  // namespace

Json Slots::ToJson() const {
  return {{"features", features}, {"classes", classes}, {"values", values}};
}

PreprocessedQuestion SubstitutePlaceholders(std::string_view text,
                                            const tabular::Schema& schema) {
  std::vector<Name> names;
  for (const auto& f : schema.features()) {
    names.push_back({f.name, SlotKind::kFeature});
  }
  for (const auto& c : schema.classes()) names.push_back({c, SlotKind::kClass});
  SortLongestFirst(names);

  std::vector<Span> spans;
  Scan(text, names, /*with_numbers=*/true, spans);

  std::set<std::string> mentioned;
  for (const auto& s : spans) {
    if (s.kind != SlotKind::kFeature) continue;
    const auto idx = schema.FeatureIndex(text.substr(s.begin, s.end - s.begin));
    if (idx) mentioned.insert(schema.feature(*idx).name);
  }
  std::vector<Name> values;
  for (const auto& f : schema.features()) {
    if (f.numeric()) continue;
    const bool is_mentioned = mentioned.count(f.name) > 0;
    for (const auto& c : f.categories) {
      if (is_mentioned || c.find('-') != std::string::npos) {
        values.push_back({c, SlotKind::kValue});
      }
    }
  }
  SortLongestFirst(values);
  Scan(text, values, /*with_numbers=*/false, spans);
  std::sort(spans.begin(), spans.end(),
            [](const Span& a, const Span& b) { return a.begin < b.begin; });

  PreprocessedQuestion out;
  out.original_text = std::string(text);
  std::size_t pos = 0;
  for (const auto& s : spans) {
    out.canonical_text.append(text.substr(pos, s.begin - pos));
    out.canonical_text.append(TokenFor(s.kind));
    std::string original(text.substr(s.begin, s.end - s.begin));
    switch (s.kind) {
      case SlotKind::kFeature:
        out.slots.features.push_back(std::move(original));
        break;
      case SlotKind::kClass:
        out.slots.classes.push_back(std::move(original));
        break;
      case SlotKind::kValue:
        out.slots.values.push_back(std::move(original));
        break;
    }
    pos = s.end;
  }
  out.canonical_text.append(text.substr(pos));
  return out;
}

std::string ReinsertSlots(const PreprocessedQuestion& question) {
  const std::string& t = question.canonical_text;
  std::string out;
  std::size_t next_feature = 0;
  std::size_t next_class = 0;
  std::size_t next_value = 0;
  std::size_t pos = 0;
  while (pos < t.size()) {
    auto try_token = [&](std::string_view token,
                         const std::vector<std::string>& slot,
                         std::size_t& next) {
      if (t.compare(pos, token.size(), token) != 0 || next >= slot.size()) {
        return false;
      }
      out += slot[next++];
      pos += token.size();
      return true;
    };
    if (try_token(kFeatureToken, question.slots.features, next_feature) ||
        try_token(kClassToken, question.slots.classes, next_class) ||
        try_token(kValueToken, question.slots.values, next_value)) {
      continue;
    }
    out += t[pos++];
  }
  return out;
}

std::vector<std::string> TokenizeAndStem(std::string_view text) {
  static constexpr std::string_view kPlaceholders[] = {kFeatureToken,
                                                       kClassToken, kValueToken};
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  while (pos < text.size()) {
    bool placeholder = false;
    for (auto p : kPlaceholders) {
      if (pos + p.size() <= text.size() &&
          tabular::EqualsIgnoreCase(text.substr(pos, p.size()), p)) {
        tokens.emplace_back(p);
        pos += p.size();
        placeholder = true;
        break;
      }
    }
    if (placeholder) continue;
    if (!IsAlnum(text[pos])) {
      ++pos;
      continue;
    }
    std::string word;
    while (pos < text.size() && IsAlnum(text[pos])) {
      word += static_cast<char>(
          std::tolower(static_cast<unsigned char>(text[pos])));
      ++pos;
    }
    if (word.size() < 2) continue;
    const bool alpha = std::all_of(word.begin(), word.end(), [](char c) {
      return c >= 'a' && c <= 'z';
    });
    tokens.push_back(alpha ? PorterStem(word) : word);
  }
  return tokens;
}

}  // namespace convxai::nlu
