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

#include "convxai/tabular/dataset.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "convxai/error.h"

namespace convxai::tabular {
namespace {

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

bool ParseDouble(std::string_view text, double& out) {
  const std::string t = Trim(text);
  if (t.empty()) return false;
  const char* first = t.data();
  if (*first == '+') ++first;
  auto res = std::from_chars(first, t.data() + t.size(), out);
  return res.ec == std::errc() && res.ptr == t.data() + t.size() &&
         std::isfinite(out);
}

// Splits one CSV record. Supports double-quoted cells with "" escapes.
std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(Trim(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  cells.push_back(Trim(cell));
  return cells;
}

std::string QuoteCsv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Converts the text of one cell. Returns an error message or empty.
std::string ParseCell(const FeatureSpec& f, std::string_view text,
                      double& out) {
  if (f.numeric()) {
    if (!ParseDouble(text, out)) {
      return f.name + ": not a number: '" + std::string(text) + "'";
    }
    return {};
  }
  const int idx = f.CategoryIndex(Trim(text));
  if (idx < 0) {
    return f.name + ": unknown category '" + std::string(text) + "'";
  }
  out = idx;
  return {};
}

}  // namespace

ValidatedInstance ValidateInstance(const Schema& schema,
                                   const NamedValues& named_values) {
  std::vector<std::string> problems;
  ValidatedInstance result;
  result.instance.values.assign(schema.num_features(), 0.0);
  std::vector<bool> seen(schema.num_features(), false);
  for (const auto& [name, value] : named_values) {
    const auto idx = schema.FeatureIndex(name);
    if (!idx) {
      problems.push_back("unknown: " + name);
      continue;
    }
    if (seen[*idx]) {
      problems.push_back("duplicate: " + schema.feature(*idx).name);
      continue;
    }
    seen[*idx] = true;
    const auto& f = schema.feature(*idx);
    double v = 0.0;
    std::string err = ParseCell(f, value, v);
    if (!err.empty()) {
      problems.push_back(std::move(err));
      continue;
    }
    if (f.numeric() && (v < f.min || v > f.max)) {
      result.warnings.push_back(f.name + ": " + FormatNumber(v) +
                                " is outside the training range [" +
                                FormatNumber(f.min) + ", " +
                                FormatNumber(f.max) + "]");
    }
    result.instance.values[*idx] = v;
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) problems.push_back("missing: " + schema.feature(i).name);
  }
  if (!problems.empty()) throw ValidationError("E_INSTANCE", std::move(problems));
  return result;
}

ValidatedInstance ValidateInstance(
    const Schema& schema,
    const std::map<std::string, std::string>& named_values) {
  return ValidateInstance(
      schema, NamedValues(named_values.begin(), named_values.end()));
}

std::vector<std::string> CheckInstance(const Schema& schema,
                                       const Instance& instance) {
  if (instance.size() != schema.num_features()) {
    throw ValidationError(
        "E_INSTANCE",
        {"instance has " + std::to_string(instance.size()) +
         " values, schema has " + std::to_string(schema.num_features())});
  }
  std::vector<std::string> problems;
  std::vector<std::string> warnings;
  for (std::size_t i = 0; i < instance.size(); ++i) {
    const auto& f = schema.feature(i);
    const double v = instance[i];
    if (!std::isfinite(v)) {
      problems.push_back(f.name + ": not finite");
    } else if (f.numeric()) {
      if (v < f.min || v > f.max) {
        warnings.push_back(f.name + ": " + FormatNumber(v) +
                           " is outside the training range");
      }
    } else if (v < 0 || v != std::floor(v) ||
               v >= static_cast<double>(f.categories.size())) {
      problems.push_back(f.name + ": category index out of domain");
    }
  }
  if (!problems.empty()) throw ValidationError("E_INSTANCE", std::move(problems));
  return warnings;
}

NamedValues Describe(const Schema& schema, const Instance& instance) {
  NamedValues out;
  for (std::size_t i = 0; i < schema.num_features(); ++i) {
    out.emplace_back(schema.feature(i).name,
                     schema.FormatValue(i, instance[i]));
  }
  return out;
}

Dataset ParseCsv(std::istream& in, const Schema& schema,
                 const std::string& source_name) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError("E_CSV", {source_name + ": missing header row"});
  }
  const auto header = SplitCsv(line);
  std::vector<std::string> problems;
  // Column of each feature, and of the target.
  std::vector<int> feature_col(schema.num_features(), -1);
  int target_col = -1;
  std::set<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (!names.insert(header[c]).second) {
      problems.push_back("header: duplicate column " + header[c]);
    }
    if (header[c] == schema.target_name()) {
      target_col = static_cast<int>(c);
      continue;
    }
    const auto idx = schema.FeatureIndex(header[c]);
    if (!idx || schema.feature(*idx).name != header[c]) {
      problems.push_back("header: unexpected column " + header[c]);
    } else {
      feature_col[*idx] = static_cast<int>(c);
    }
  }
  for (std::size_t i = 0; i < feature_col.size(); ++i) {
    if (feature_col[i] < 0) {
      problems.push_back("header: missing column " + schema.feature(i).name);
    }
  }
  if (target_col < 0) {
    problems.push_back("header: missing target column " + schema.target_name());
  }
  if (!problems.empty()) {
    for (auto& p : problems) p = source_name + ": " + p;
    throw ValidationError("E_CSV", std::move(problems));
  }

  Dataset ds{schema, {}, {}};
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto cells = SplitCsv(line);
    const std::string where = source_name + ":" + std::to_string(line_no);
    if (cells.size() != header.size()) {
      problems.push_back(where + ": expected " + std::to_string(header.size()) +
                         " cells, got " + std::to_string(cells.size()));
      continue;
    }
    Instance row;
    row.values.resize(schema.num_features());
    bool ok = true;
    for (std::size_t i = 0; i < schema.num_features(); ++i) {
      std::string err =
          ParseCell(schema.feature(i), cells[feature_col[i]], row.values[i]);
      if (!err.empty()) {
        problems.push_back(where + ": " + err);
        ok = false;
      }
    }
    const auto label = schema.ClassIndex(cells[target_col]);
    if (!label) {
      problems.push_back(where + ": unknown class '" + cells[target_col] + "'");
      ok = false;
    }
    if (ok) {
      ds.rows.push_back(std::move(row));
      ds.labels.push_back(*label);
    }
  }
  if (problems.empty() && ds.rows.empty()) {
    problems.push_back(source_name + ": no data rows");
  }
  if (!problems.empty()) throw ValidationError("E_CSV", std::move(problems));
  return ds;
}

Dataset LoadCsv(const std::filesystem::path& path, const Schema& schema) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return ParseCsv(in, schema, path.string());
}

void WriteCsv(const Dataset& dataset, std::ostream& out) {
  const Schema& schema = dataset.schema;
  for (const auto& f : schema.features()) out << QuoteCsv(f.name) << ',';
  out << QuoteCsv(schema.target_name()) << '\n';
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    for (std::size_t i = 0; i < schema.num_features(); ++i) {
      out << QuoteCsv(schema.FormatValue(i, dataset.rows[r][i])) << ',';
    }
    out << QuoteCsv(schema.class_name(dataset.labels[r])) << '\n';
  }
}

Dataset Subset(const Dataset& dataset, const std::vector<std::size_t>& rows) {
  Dataset out{dataset.schema, {}, {}};
  out.rows.reserve(rows.size());
  out.labels.reserve(rows.size());
  for (std::size_t r : rows) {
    out.rows.push_back(dataset.rows.at(r));
    out.labels.push_back(dataset.labels.at(r));
  }
  return out;
}

}  // namespace convxai::tabular
