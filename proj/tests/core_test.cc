// Copyright 2026 The Authors.
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
#include <random>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "igfair/core.h"
#include "igfair/io.h"
#include "igfair/rational.h"
#include "test_support.h"

namespace igfair {
namespace {

using Catch::Matchers::ContainsSubstring;
using testing::CommitteeDataset;
using testing::Items;
using testing::MakeDataset;
using testing::SortedIds;
using testing::Value;

TEST_CASE("decimal literals parse exactly", "[rational]") {
  CHECK(ParseRational("91") == 91);
  CHECK(ParseRational("0.25") == Rational(1, 4));
  CHECK(ParseRational("-3.5") == Rational(-7, 2));
  CHECK_THROWS_AS(ParseRational("1e2"), Error);  // plain decimals only
  CHECK(ParseRational(" 2.50 ") == Rational(5, 2));
  const Decimal d = ParseDecimal("12.340");
  CHECK(Rational(d.mantissa, Pow10(d.decimals)) == Rational(1234, 100));
  CHECK_THROWS_AS(ParseRational("abc"), Error);
  CHECK_THROWS_AS(ParseRational(""), Error);
  CHECK_THROWS_AS(ParseRational("1.2.3"), Error);
}

TEST_CASE("rational formatting", "[rational]") {
  CHECK(ToFractionString(Rational(90, 272)) == "45/136");
  CHECK(ToFractionString(Rational(3)) == "3");
  CHECK(ToDecimalString(Rational(1, 4)) == "0.25");
  CHECK(ToDecimalString(Rational(2, 3), 4) == "0.6667");
  CHECK(Floor(Rational(7, 2)) == 3);
  CHECK(Floor(Rational(-7, 2)) == -4);
}

TEST_CASE("committee dataset loads with sorted groups", "[core]") {
  const Dataset ds = CommitteeDataset();
  CHECK(ds.size() == 12);
  CHECK(SortedIds(ds, ds.group(Value(ds, "Female"))) ==
        std::vector<std::string>{"C", "D", "G", "H", "K", "L"});
  // Descending score, ties by ascending id.
  CHECK(testing::IdsOf(ds, ds.group(Value(ds, "Black"))) ==
        std::vector<std::string>{"E", "F", "G", "H"});
  CHECK(testing::IdsOf(ds, ds.group(Value(ds, "Asian"))) ==
        std::vector<std::string>{"I", "J", "K", "L"});
  for (int a = 0; a < ds.schema().num_attributes(); ++a) {
    std::size_t total = 0;
    for (ValueId v : ds.schema().values_of(a)) total += ds.group(v).size();
    CHECK(total == 12u);
  }
}

TEST_CASE("singleton dataset", "[core]") {
  const Dataset ds = MakeDataset({{"race", {"White", "Black", "Asian"}},
                                  {"gender", {"Male", "Female"}}},
                                 {{"x", "1", "White", "Male"}});
  CHECK(ds.size() == 1);
  int non_empty = 0;
  for (ValueId v = 0; v < ds.schema().num_values(); ++v) non_empty += !ds.group(v).empty();
  CHECK(non_empty == 2);
  CHECK(ds.schema().num_values() - non_empty == 3);
}

TEST_CASE("load errors", "[core]") {
  const std::vector<Attribute> attrs = {{"gender", {"Male", "Female"}}};
  CHECK_THROWS_WITH(MakeDataset(attrs, {{"a", "-3", "Male"}}),
                    ContainsSubstring("non-positive score"));
  CHECK_THROWS_WITH(MakeDataset(attrs, {{"a", "0", "Male"}}),
                    ContainsSubstring("non-positive score"));
  CHECK_THROWS_WITH(MakeDataset(attrs, {{"a", "x1", "Male"}}),
                    ContainsSubstring("non-numeric score"));
  CHECK_THROWS_WITH(MakeDataset(attrs, {{"a", "1", "Male"}, {"a", "2", "Female"}}),
                    ContainsSubstring("duplicate id"));
  CHECK_THROWS_WITH(MakeDataset(attrs, {{"a", "1", "Other"}}), ContainsSubstring("not in the schema"));
  CHECK_THROWS_WITH(MakeDataset(attrs, {{"a", "1", ""}}), ContainsSubstring("missing a value"));
  CHECK_THROWS_AS(AttributeSchema::Create({{"a", {"x"}}, {"b", {"x"}}}), Error);
  CHECK_THROWS_AS(AttributeSchema::Create({}), Error);
}

TEST_CASE("dataset statistics", "[core]") {
  const DatasetStats stats = ComputeStats(CommitteeDataset());
  CHECK(stats.s_max == 99);
  CHECK(stats.s_min == 83);
  CHECK(stats.lambda == Rational(99, 83));

  const std::vector<Attribute> attrs = {{"g", {"u"}}};
  CHECK(ComputeStats(MakeDataset(attrs, {{"a", "7", "u"}, {"b", "7", "u"}})).lambda == 1);
  CHECK(ComputeStats(MakeDataset(attrs, {{"a", "2", "u"}, {"b", "10", "u"}})).lambda == 5);
  CHECK(ComputeStats(MakeDataset(attrs, {{"a", "0.5", "u"}, {"b", "1.25", "u"}})).lambda ==
        Rational(5, 2));
}

TEST_CASE("statistics ignore item order", "[core]") {
  std::vector<std::vector<std::string>> rows = {
      {"a", "3.5", "u"}, {"b", "1.25", "u"}, {"c", "9", "u"}, {"d", "4", "u"}};
  const DatasetStats base = ComputeStats(MakeDataset({{"g", {"u"}}}, rows));
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(rows.begin(), rows.end(), rng);
    const DatasetStats s = ComputeStats(MakeDataset({{"g", {"u"}}}, rows));
    CHECK(s.s_max == base.s_max);
    CHECK(s.s_min == base.s_min);
    CHECK(s.lambda == base.lambda);
  }
}

TEST_CASE("better-or-equal sets", "[core]") {
  const Dataset ds = CommitteeDataset();
  auto set = [&](const char* v, const char* id) {
    return SortedIds(ds, BetterOrEqualSet(ds, Value(ds, v), ds.ItemIndex(id)));
  };
  CHECK(set("Black", "G") == std::vector<std::string>{"E", "F", "G"});
  CHECK(set("White", "A") == std::vector<std::string>{"A"});
  CHECK(set("Asian", "L") == std::vector<std::string>{"I", "J", "K", "L"});
  // Ties are included regardless of id order.
  CHECK(set("Black", "E") == std::vector<std::string>{"E", "F"});
  CHECK(set("Asian", "I") == std::vector<std::string>{"I", "J"});
  CHECK_THROWS_AS(BetterOrEqualSet(ds, Value(ds, "White"), ds.ItemIndex("E")), Error);
}

TEST_CASE("better-or-equal matches a direct scan", "[core]") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = testing::MakeRandomInstance(rng, 4, 12, 4);
    const Dataset& ds = inst.dataset;
    for (ValueId v = 0; v < ds.schema().num_values(); ++v) {
      for (int i : ds.group(v)) {
        std::vector<int> expected;
        for (int h = 0; h < ds.size(); ++h) {
          if (ds.HasLabel(h, v) && ds.score(h) >= ds.score(i)) expected.push_back(h);
        }
        std::vector<int> got = BetterOrEqualSet(ds, v, i);
        std::sort(got.begin(), got.end());
        CHECK(got == expected);
        CHECK(std::find(got.begin(), got.end(), i) != got.end());
      }
    }
  }
}

TEST_CASE("outcome partitions and utility", "[core]") {
  const Dataset ds = CommitteeDataset();
  const Outcome o = testing::OutcomeOf(ds, {"A", "B", "G", "K"});
  CHECK(o.k() == 4);
  CHECK(o.utility() == 373);
  CHECK(testing::OutcomeOf(ds, {"A", "C", "E", "K"}).utility() == 372);
  for (ValueId v = 0; v < ds.schema().num_values(); ++v) {
    CHECK(o.accepted(v).size() + o.rejected(v).size() == ds.group(v).size());
  }
  const ValueId female = Value(ds, "Female");
  CHECK(Rational(*o.lowest_accepted(female), ds.scale()) == 86);
  CHECK(Rational(*o.highest_rejected(female), ds.scale()) == 96);
  CHECK_FALSE(o.highest_rejected(Value(ds, "White")) == std::nullopt);
  CHECK_THROWS_AS(Outcome::Create(ds, Items(ds, {"A", "A"})), Error);
}

TEST_CASE("scores are scaled to a common denominator", "[core]") {
  const Dataset ds =
      MakeDataset({{"g", {"u"}}}, {{"a", "1.5", "u"}, {"b", "2.25", "u"}, {"c", "3", "u"}});
  CHECK(ds.scale() == 100);
  CHECK(ds.scaled_score(ds.ItemIndex("a")) == 150);
  CHECK(ds.score(ds.ItemIndex("b")) == Rational(9, 4));
}

TEST_CASE("csv round trip", "[io]") {
  std::istringstream in(
      "\xEF\xBB\xBFid,score,gender\r\n"
      "\"a,1\",2.5,Male\n"
      "b,\"3\",\"Fe\"\"male\"\n");
  const Table t = ReadCsv(in);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.header[0] == "id");
  CHECK(t.rows[0][0] == "a,1");
  CHECK(t.rows[1][2] == "Fe\"male");
  std::ostringstream out;
  WriteCsv(t, out);
  std::istringstream again(out.str());
  const Table t2 = ReadCsv(again);
  CHECK(t2.header == t.header);
  CHECK(t2.rows == t.rows);

  std::istringstream bad("id,score\n\"open,1\n");
  CHECK_THROWS_AS(ReadCsv(bad), Error);
}

TEST_CASE("dataset csv export reloads identically", "[io]") {
  const Dataset ds = CommitteeDataset();
  const std::string csv = DatasetToCsv(ds);
  std::istringstream in(csv);
  const Dataset again = LoadDataset(ReadCsv(in), ds.schema());
  CHECK(DatasetToCsv(again) == csv);
}

TEST_CASE("schema json", "[io]") {
  const Json json = Json::parse(
      R"({"attributes":[{"name":"race","values":["White","Black"]},
                         {"name":"gender","values":["Male","Female"]}]})");
  const AttributeSchema schema = SchemaFromJson(json);
  CHECK(schema.num_attributes() == 2);
  CHECK(schema.num_values() == 4);
  CHECK(schema.attribute_of(*schema.FindValue("Female")) == 1);
  CHECK(SchemaToJson(schema) == json);
  CHECK_THROWS_AS(SchemaFromJson(Json::parse(R"({"attrs":[]})")), Error);
}

TEST_CASE("constraint spec json", "[io]") {
  const Dataset ds = CommitteeDataset();
  const ConstraintSpec spec = ConstraintSpecFromJson(Json::parse(
      R"({"k":4,"mode":"explicit","bounds":[{"value":"Female","position":4,"min":2}]})"));
  const DiversityConstraints c = ResolveConstraints(spec, ds, 4);
  CHECK(c.bound(Value(ds, "Female"), 4) == 2);
  CHECK(c.bound(Value(ds, "Female"), 3) == 0);

  const ConstraintSpec prop =
      ConstraintSpecFromJson(Json::parse(R"({"mode":"proportional","alpha":1,"checkpoints":[4]})"));
  const DiversityConstraints p = ResolveConstraints(prop, ds, 4);
  CHECK(p.bound(Value(ds, "Male"), 4) == 2);
  CHECK(p.bound(Value(ds, "Asian"), 4) == 1);

  CHECK_THROWS_AS(ConstraintSpecFromJson(Json::parse(R"({"mode":"fancy"})")), Error);
  CHECK_THROWS_AS(
      ResolveConstraints(ConstraintSpecFromJson(Json::parse(
                             R"({"mode":"explicit","bounds":[{"value":"Nope","position":1,"min":1}]})")),
                         ds, 4),
      Error);
}

TEST_CASE("ranking json round trip", "[io]") {
  const Dataset ds = CommitteeDataset();
  const Outcome o = testing::OutcomeOf(ds, {"G", "A", "K", "B"});
  const Json json = OutcomeToJson(ds, o);
  const std::vector<int> back = RankingFromJson(json, ds);
  CHECK(back == std::vector<int>(o.ranking().begin(), o.ranking().end()));
  CHECK(RankingFromJson(Json::parse(R"(["A","B"])"), ds) == Items(ds, {"A", "B"}));
  CHECK_THROWS_AS(RankingFromJson(Json::parse(R"(["A","Z"])"), ds), Error);
}

}  // namespace
}  // namespace igfair
