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

#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "igfair/constraints.h"
#include "test_support.h"

namespace igfair {
namespace {

using Catch::Matchers::ContainsSubstring;
using testing::CommitteeDataset;
using testing::MakeDataset;
using testing::Value;

Dataset HalfAndHalf() {
  std::vector<std::vector<std::string>> rows;
  for (int i = 0; i < 20; ++i) {
    rows.push_back({"r" + std::to_string(i), std::to_string(100 - i), i % 2 ? "F" : "M"});
  }
  return MakeDataset({{"gender", {"F", "M"}}}, rows);
}

TEST_CASE("proportional bounds on an even split", "[constraints]") {
  const Dataset ds = HalfAndHalf();
  const std::vector<int> checkpoints = {10};
  const DiversityConstraints c = ProportionalBounds(ds, 10, checkpoints, 1);
  CHECK(c.bound(Value(ds, "F"), 10) == 5);
  CHECK(c.bound(Value(ds, "M"), 10) == 5);
  CHECK(c.bound(Value(ds, "F"), 9) == 0);
}

TEST_CASE("proportional bounds reproduce the committee constraints", "[constraints]") {
  const Dataset ds = CommitteeDataset();
  const std::vector<int> checkpoints = {4};
  const DiversityConstraints c = ProportionalBounds(ds, 4, checkpoints, 1);
  CHECK(c.bound(Value(ds, "Male"), 4) == 2);
  CHECK(c.bound(Value(ds, "Female"), 4) == 2);
  for (const char* race : {"White", "Black", "Asian"}) CHECK(c.bound(Value(ds, race), 4) == 1);
  const DiversityConstraints expected = testing::CommitteeConstraints(ds);
  for (ValueId v = 0; v < ds.schema().num_values(); ++v) {
    for (int p = 1; p <= 4; ++p) CHECK(c.bound(v, p) == expected.bound(v, p));
  }
  CHECK(ValidateConstraints(c, ds).ok());
}

TEST_CASE("proportional bound arguments", "[constraints]") {
  const Dataset ds = CommitteeDataset();
  const std::vector<int> four = {4};
  CHECK_THROWS_AS(ProportionalBounds(ds, 4, four, 0), Error);
  CHECK_THROWS_AS(ProportionalBounds(ds, 4, four, Rational(3, 2)), Error);
  CHECK_THROWS_AS(ProportionalBounds(ds, 13, four, 1), Error);
  CHECK_THROWS_AS(ProportionalBounds(ds, 4, std::vector<int>{}, 1), Error);
  CHECK_THROWS_AS(ProportionalBounds(ds, 4, std::vector<int>{5}, 1), Error);
  // A tiny alpha leaves nothing to enforce.
  const DiversityConstraints tiny = ProportionalBounds(ds, 4, four, Rational(1, 1000));
  CHECK(tiny.empty());
}

TEST_CASE("checkpoint bounds carry forward, never backward", "[constraints]") {
  const Dataset ds = HalfAndHalf();
  const std::vector<int> checkpoints = {4, 8};
  const DiversityConstraints c = ProportionalBounds(ds, 10, checkpoints, 1);
  const ValueId f = Value(ds, "F");
  CHECK(c.bound(f, 3) == 0);
  CHECK(c.bound(f, 4) == 2);
  CHECK(c.bound(f, 7) == 2);
  CHECK(c.bound(f, 8) == 4);
  CHECK(c.bound(f, 10) == 4);
}

TEST_CASE("raw bounds are normalized to be monotone", "[constraints]") {
  const std::vector<BoundEntry> entries = {{0, 2, 2}, {0, 4, 1}};
  const DiversityConstraints c = DiversityConstraints::Create(5, 2, entries);
  CHECK(c.bound(0, 1) == 0);
  CHECK(c.bound(0, 2) == 2);
  CHECK(c.bound(0, 4) == 2);
  CHECK(c.bound(0, 5) == 2);
  CHECK(c.was_normalized());
  CHECK_THROWS_AS(DiversityConstraints::Create(5, 2, std::vector<BoundEntry>{{0, 6, 1}}), Error);
  CHECK_THROWS_AS(DiversityConstraints::Create(5, 2, std::vector<BoundEntry>{{3, 1, 1}}), Error);
  CHECK_THROWS_AS(DiversityConstraints::Create(5, 2, std::vector<BoundEntry>{{0, 1, -1}}), Error);
}

TEST_CASE("validation diagnostics", "[constraints]") {
  const Dataset ds = CommitteeDataset();
  const int nv = ds.schema().num_values();
  const ValueId female = Value(ds, "Female");
  const ValueId male = Value(ds, "Male");

  const DiversityConstraints too_deep =
      DiversityConstraints::Create(4, nv, std::vector<BoundEntry>{{female, 2, 3}});
  const ValidationReport r1 = ValidateConstraints(too_deep, ds);
  REQUIRE_FALSE(r1.ok());
  CHECK(r1.violations[0].kind == Violation::Kind::kBoundExceedsPrefix);
  CHECK_THAT(r1.violations[0].message, ContainsSubstring("bound exceeds prefix"));

  const DiversityConstraints oversubscribed = DiversityConstraints::Create(
      4, nv, std::vector<BoundEntry>{{male, 4, 3}, {female, 4, 2}});
  const ValidationReport r2 = ValidateConstraints(oversubscribed, ds);
  REQUIRE_FALSE(r2.ok());
  bool found = false;
  for (const Violation& v : r2.violations) {
    if (v.kind != Violation::Kind::kAttributeOversubscribed) continue;
    found = true;
    CHECK(v.demand == 5);
    CHECK(v.limit == 4);
    CHECK_THAT(v.message, ContainsSubstring("demand 5 > 4"));
    CHECK_THAT(v.message, ContainsSubstring("gender"));
  }
  CHECK(found);

  const Dataset small = MakeDataset({{"g", {"u", "w"}}}, {{"a", "1", "u"}, {"b", "2", "w"}});
  const DiversityConstraints greedy =
      DiversityConstraints::Create(2, 2, std::vector<BoundEntry>{{0, 2, 2}});
  const ValidationReport r3 = ValidateConstraints(greedy, small);
  REQUIRE_FALSE(r3.ok());
  CHECK(r3.violations[0].kind == Violation::Kind::kBoundExceedsGroup);

  const DiversityConstraints shrinking =
      DiversityConstraints::Create(4, nv, std::vector<BoundEntry>{{female, 2, 2}, {female, 4, 1}});
  const ValidationReport r4 = ValidateConstraints(shrinking, ds);
  CHECK(r4.ok());
  CHECK_FALSE(r4.warnings.empty());
}

TEST_CASE("proportional output passes single-attribute checks", "[constraints]") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = testing::MakeRandomInstance(rng, 2, 30, 12);
    const Dataset& ds = inst.dataset;
    const int k = inst.constraints.k();
    std::vector<int> checkpoints;
    for (int p = 1; p <= k; ++p) {
      if (p == k || std::uniform_int_distribution<int>(0, 2)(rng) == 0) checkpoints.push_back(p);
    }
    const Rational alpha(std::uniform_int_distribution<int>(1, 10)(rng), 10);
    const DiversityConstraints c = ProportionalBounds(ds, k, checkpoints, alpha);
    CHECK(ValidateConstraints(c, ds).ok());
    const DiversityConstraints again = ProportionalBounds(ds, k, checkpoints, alpha);
    for (ValueId v = 0; v < ds.schema().num_values(); ++v) {
      for (int p = 1; p <= k; ++p) {
        CHECK(c.bound(v, p) == again.bound(v, p));
        CHECK(c.bound(v, p) <= p);
        if (p > 1) CHECK(c.bound(v, p - 1) <= c.bound(v, p));
      }
    }
  }
}

}  // namespace
}  // namespace igfair
