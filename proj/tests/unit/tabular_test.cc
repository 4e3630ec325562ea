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
#include <set>
#include <sstream>
#include <string>

#include "doctest.h"
#include "convxai/error.h"
#include "convxai/tabular/dataset.h"
#include "convxai/tabular/datasheet.h"
#include "convxai/tabular/sampler.h"
#include "convxai/tabular/schema.h"
#include "support/toy_models.h"

namespace {

using namespace convxai;
using namespace convxai::tabular;

const std::string kLoanDir = std::string(CONVXAI_SOURCE_DIR) + "/tests/data/loan/";

Dataset Loan() {
  return LoadCsv(kLoanDir + "loan.csv", LoadSchema(kLoanDir + "schema.json"));
}

TEST_SUITE("tabular") {

TEST_CASE("schema invariants") {
  FeatureSpec a;
  a.name = "a";
  CHECK_THROWS_AS(Schema({a}, {"only"}, "y"), ValidationError);
  CHECK_THROWS_AS(Schema({a, a}, {"n", "p"}, "y"), ValidationError);
  FeatureSpec c;
  c.name = "c";
  c.kind = FeatureKind::kCategorical;
  CHECK_THROWS_AS(Schema({c}, {"n", "p"}, "y"), ValidationError);
  a.min = 2;
  a.max = 1;
  CHECK_THROWS_AS(Schema({a}, {"n", "p"}, "y"), ValidationError);
  CHECK_THROWS_AS(Schema({}, {"n", "p"}, "y"), ValidationError);
}

TEST_CASE("schema lookups and json round trip") {
  const auto schema = LoadSchema(kLoanDir + "schema.json");
  CHECK(schema.num_features() == 5);
  CHECK(schema.FeatureIndex("housing") == std::optional<std::size_t>(2));
  CHECK(!schema.FeatureIndex("Salary"));
  CHECK(schema.ClassIndex("APPROVED") == std::optional<int>(1));
  CHECK(!schema.feature(1).is_mutable);
  CHECK(schema.feature(0).precision == std::optional<int>(0));
  const auto back = Schema::FromJson(schema.ToJson());
  CHECK(back.Fingerprint() == schema.Fingerprint());
  CHECK(schema.PhraseFor(1).to_get == "an approved loan");
  CHECK(FormatNumber(0.1) == "0.1");
  CHECK(FormatNumber(40) == "40");
}

TEST_CASE("validation collects every problem") {
  const auto schema = LoadSchema(kLoanDir + "schema.json");
  try {
    ValidateInstance(schema, NamedValues{{"Income", "lots"},
                                         {"Housing", "castle"},
                                         {"Salary", "1"},
                                         {"Debt", "3"},
                                         {"Debt", "4"}});
    FAIL("expected a ValidationError");
  } catch (const ValidationError& e) {
    const auto& p = e.problems();
    // bad number, bad category, unknown feature, duplicate, two missing
    CHECK(p.size() >= 6);
    std::string all;
    for (const auto& s : p) all += s + "\n";
    for (const char* word : {"Income", "castle", "Salary", "Debt", "Age", "Job"}) {
      CHECK_MESSAGE(all.find(word) != std::string::npos, word);
    }
  }
}

TEST_CASE("out of range numerics warn") {
  const auto schema = LoadSchema(kLoanDir + "schema.json");
  const auto v = ValidateInstance(
      schema, NamedValues{{"Income", "500"}, {"Age", "30"}, {"Housing", "Own"},
                          {"Job", "clerk"}, {"Debt", "10"}});
  CHECK(v.warnings.size() == 1);
  CHECK(v.instance[0] == 500);
  CHECK(v.instance[2] == 1);
  const auto named = Describe(schema, v.instance);
  CHECK(named[2].second == "own");
  CHECK(ValidateInstance(schema, named).instance == v.instance);
  CHECK_THROWS_AS(CheckInstance(schema, Instance{{1, 2}}), ValidationError);
  CHECK_THROWS_AS(CheckInstance(schema, Instance{{1, 30, 9, 0, 1}}),
                  ValidationError);
}

TEST_CASE("csv load, write and subset") {
  const auto data = Loan();
  CHECK(data.size() == 240);
  int approved = 0;
  for (int l : data.labels) approved += l;
  CHECK(approved == 133);
  std::ostringstream out;
  WriteCsv(data, out);
  std::istringstream in(out.str());
  const auto back = ParseCsv(in, data.schema);
  CHECK(back.rows == data.rows);
  CHECK(back.labels == data.labels);
  const auto sub = Subset(data, {3, 1});
  CHECK(sub.rows[0] == data.rows[3]);
  CHECK(sub.labels[1] == data.labels[1]);

  std::istringstream bad("Income,Age,Housing,Job,Debt,Loan\n1,30,rent,clerk,2,maybe\n"
                         "x,30,rent,clerk,2,approved\n");
  CHECK_THROWS_AS(ParseCsv(bad, data.schema), ValidationError);
}

TEST_CASE("datasheet sample size must match") {
  const auto data = Loan();
  auto sheet = LoadDataSheet(kLoanDir + "datasheet.json");
  CHECK_NOTHROW(CheckDataSheet(sheet, data));
  CHECK(sheet.Field("sample_size") == std::optional<std::string>("240"));
  CHECK(!sheet.Field("colour"));
  sheet.sample_size = 7;
  CHECK_THROWS_AS(CheckDataSheet(sheet, data), ValidationError);
}

TEST_CASE("sampler draws from the marginals") {
  const auto data = Loan();
  PerturbationSampler sampler(data, 3, 50);
  CHECK(sampler.background().size() == 50);
  std::set<std::vector<double>> distinct;
  for (const auto& b : sampler.background()) distinct.insert(b.values);
  CHECK(distinct.size() == 50);

  auto a = sampler.Stream(4), b = sampler.Stream(4);
  for (int i = 0; i < 20; ++i) CHECK(sampler.Draw(a) == sampler.Draw(b));

  // Every drawn value is a training value of that column.
  auto rng = sampler.Stream(9);
  for (int i = 0; i < 100; ++i) {
    const auto x = sampler.Draw(rng);
    for (std::size_t f = 0; f < x.size(); ++f) {
      const auto& col = sampler.column(f);
      CHECK(std::binary_search(col.begin(), col.end(), x[f]));
    }
  }
  double total = 0;
  for (int c = 0; c < 3; ++c) total += sampler.Frequency(2, c);
  CHECK(total == doctest::Approx(1.0));
  const auto edges = sampler.QuartileEdges(0);
  CHECK(!edges.empty());
  CHECK(std::is_sorted(edges.begin(), edges.end()));
  CHECK(sampler.Scale(0) > 0);

  const double v = sampler.DrawFeatureInInterval(0, 50, 60, -1, rng);
  CHECK(((v > 50 && v <= 60) || v == -1));
  CHECK(sampler.DrawFeatureInInterval(0, 1000, 2000, -1, rng) == -1);
}

}  // TEST_SUITE

}  // namespace
