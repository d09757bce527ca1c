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
#include <numeric>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "igfair/core.h"
#include "igfair/io.h"
#include "igfair/metrics.h"
#include "igfair/report.h"
#include "test_support.h"

namespace igfair {
namespace {

using testing::CommitteeDataset;
using testing::MakeDataset;
using testing::OutcomeOf;
using testing::Value;

std::vector<bool> Mask(const Dataset& ds, const Outcome& o) {
  std::vector<bool> mask(ds.size());
  for (int i = 0; i < ds.size(); ++i) mask[i] = o.selected(i);
  return mask;
}

TEST_CASE("committee goldens", "[metrics]") {
  const Dataset ds = CommitteeDataset();
  const Outcome o = OutcomeOf(ds, {"A", "B", "G", "K"});
  const ValueId black = Value(ds, "Black");
  const ValueId female = Value(ds, "Female");

  // S for G in Black is 91 + 91 + 90.
  Rational mass = 0;
  for (int h : BetterOrEqualSet(ds, black, ds.ItemIndex("G"))) mass += ds.score(h);
  CHECK(mass == 272);
  CHECK(IgfAggregated(ds, o, black) == Rational(90, 272));
  CHECK(IgfRatio(ds, o, female) == Rational(86, 96));
  CHECK(IgfRatio(ds, o, Value(ds, "White")) == 1);
  CHECK(IgfAggregated(ds, o, female) == Rational(90, 281));
  CHECK(Igf(IgfMode::kAggregated, ds, o, female) == testing::OracleAggregated(ds, Mask(ds, o), female));
}

TEST_CASE("committee ratio vector", "[metrics]") {
  const Dataset ds = CommitteeDataset();
  const IgfVector vec = ComputeIgfVector(ds, OutcomeOf(ds, {"A", "B", "G", "K"}), IgfMode::kRatio);
  CHECK(vec.values.at(Value(ds, "Male")) == 1);
  CHECK(vec.values.at(Value(ds, "Female")) == Rational(86, 96));
  CHECK(vec.values.at(Value(ds, "White")) == 1);
  CHECK(vec.values.at(Value(ds, "Black")) == Rational(90, 91));
  CHECK(vec.values.at(Value(ds, "Asian")) == Rational(86, 87));
  CHECK(vec.Min() == Rational(86, 96));
}

TEST_CASE("top four is fair in both modes", "[metrics]") {
  const Dataset ds = CommitteeDataset();
  const Outcome top = OutcomeOf(ds, {"A", "B", "C", "D"});
  for (IgfMode mode : {IgfMode::kRatio, IgfMode::kAggregated}) {
    const IgfVector vec = ComputeIgfVector(ds, top, mode);
    CHECK(vec.values.size() == 5u);
    for (const auto& [v, q] : vec.values) CHECK(q == 1);
  }
}

TEST_CASE("singleton dataset measures", "[metrics]") {
  const Dataset ds = MakeDataset({{"race", {"White", "Black"}}, {"gender", {"Male", "Female"}}},
                                 {{"x", "1", "White", "Male"}});
  for (IgfMode mode : {IgfMode::kRatio, IgfMode::kAggregated}) {
    const IgfVector vec = ComputeIgfVector(ds, OutcomeOf(ds, {"x"}), mode);
    CHECK(vec.values.size() == 2u);
    for (const auto& [v, q] : vec.values) CHECK(q == 1);
  }
}

TEST_CASE("selecting a whole group or nothing of it", "[metrics]") {
  const Dataset ds = CommitteeDataset();
  const Outcome o = OutcomeOf(ds, {"I", "J", "K", "L"});
  const ValueId asian = Value(ds, "Asian");
  CHECK(IgfRatio(ds, o, asian) == 1);
  CHECK(IgfAggregated(ds, o, asian) == 1);
  // No White member selected: vacuously fair.
  CHECK(IgfRatio(ds, o, Value(ds, "White")) == 1);
  CHECK(IgfAggregated(ds, o, Value(ds, "White")) == 1);
}

TEST_CASE("unknown or empty groups are rejected", "[metrics]") {
  const Dataset ds = MakeDataset({{"g", {"u", "w"}}}, {{"a", "1", "u"}});
  const Outcome o = OutcomeOf(ds, {"a"});
  CHECK_THROWS_AS(IgfRatio(ds, o, 7), Error);
  CHECK_THROWS_AS(IgfAggregated(ds, o, Value(ds, "w")), Error);
  CHECK(ComputeIgfVector(ds, o, IgfMode::kRatio).values.size() == 1u);
  CHECK(ParseMode("agg") == IgfMode::kAggregated);
  CHECK(ParseMode("aggregated") == IgfMode::kAggregated);
  CHECK(ModeName(IgfMode::kRatio) == "ratio");
  CHECK_THROWS_AS(ParseMode("nash"), Error);
}

TEST_CASE("measures agree with the definitions on random outcomes", "[metrics]") {
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = testing::MakeRandomInstance(rng, 3, 12, 6);
    const Dataset& ds = inst.dataset;
    std::vector<int> order(ds.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(inst.constraints.k());
    const Outcome o = Outcome::Create(ds, order);
    const std::vector<bool> mask = Mask(ds, o);
    for (IgfMode mode : {IgfMode::kRatio, IgfMode::kAggregated}) {
      const IgfVector vec = ComputeIgfVector(ds, o, mode);
      const auto expected = testing::OracleVector(ds, mask, mode);
      REQUIRE(vec.values.size() == expected.size());
      for (const auto& [v, q] : expected) {
        CHECK(vec.values.at(v) == q);
        CHECK(q >= 0);
        CHECK(q <= 1);
      }
    }
  }
}

TEST_CASE("scaling scores leaves measures unchanged", "[metrics]") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = testing::MakeRandomInstance(rng, 4, 10, 4);
    const Dataset& ds = inst.dataset;
    Table table = DatasetToTable(ds);
    for (auto& row : table.rows) row[1] = ToDecimalString(ParseRational(row[1]) * Rational(5, 2));
    const Dataset scaled = LoadDataset(table, ds.schema());
    const std::vector<int> pick = TopK(ds, inst.constraints.k());
    std::vector<int> reversed(ds.size());
    for (int i = 0; i < ds.size(); ++i) reversed[i] = i;
    std::reverse(reversed.begin(), reversed.end());
    reversed.resize(inst.constraints.k());
    for (const auto& items : {pick, reversed}) {
      const Outcome a = Outcome::Create(ds, items);
      std::vector<int> mapped;
      for (int i : items) mapped.push_back(scaled.ItemIndex(ds.item(i).id));
      const Outcome b = Outcome::Create(scaled, mapped);
      for (IgfMode mode : {IgfMode::kRatio, IgfMode::kAggregated}) {
        const IgfVector va = ComputeIgfVector(ds, a, mode);
        const IgfVector vb = ComputeIgfVector(scaled, b, mode);
        for (const auto& [v, q] : va.values) CHECK(vb.values.at(v) == q);
      }
    }
  }
}

TEST_CASE("top prefix of a group scores one", "[metrics]") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = testing::MakeRandomInstance(rng, 4, 12, 4);
    const Dataset& ds = inst.dataset;
    for (ValueId v = 0; v < ds.schema().num_values(); ++v) {
      const auto group = ds.group(v);
      if (group.empty()) continue;
      int take = std::uniform_int_distribution<int>(1, static_cast<int>(group.size()))(rng);
      // A cut inside a tie leaves an equal-score member out.
      while (take < static_cast<int>(group.size()) &&
             ds.score(group[take]) == ds.score(group[take - 1])) {
        ++take;
      }
      const Outcome o = Outcome::Create(ds, std::vector<int>(group.begin(), group.begin() + take));
      CHECK(IgfRatio(ds, o, v) == 1);
      CHECK(IgfAggregated(ds, o, v) == 1);
    }
  }
}

TEST_CASE("measures equal one only without a skipped member", "[metrics]") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = testing::MakeRandomInstance(rng, 3, 10, 5);
    const Dataset& ds = inst.dataset;
    std::vector<int> order(ds.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(inst.constraints.k());
    const Outcome o = Outcome::Create(ds, order);
    for (ValueId v = 0; v < ds.schema().num_values(); ++v) {
      if (ds.group(v).empty()) continue;
      bool skipped = false;  // a rejected member scores strictly higher
      bool skipped_or_tied = false;
      for (int i : ds.group(v)) {
        for (int h : ds.group(v)) {
          if (!o.selected(i) || o.selected(h)) continue;
          skipped = skipped || ds.score(h) > ds.score(i);
          skipped_or_tied = skipped_or_tied || ds.score(h) >= ds.score(i);
        }
      }
      CHECK((IgfAggregated(ds, o, v) == 1) == !skipped_or_tied);
      CHECK((IgfRatio(ds, o, v) == 1) == !skipped);
    }
  }
}

// Swapping an accepted member for a better rejected one never lowers the
// group's ratio measure.
TEST_CASE("ratio swap monotonicity", "[metrics]") {
  std::mt19937_64 rng(17);
  int swaps = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const auto inst = testing::MakeRandomInstance(rng, 4, 12, 6);
    const Dataset& ds = inst.dataset;
    std::vector<int> order(ds.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(inst.constraints.k());
    const Outcome o = Outcome::Create(ds, order);
    for (ValueId v = 0; v < ds.schema().num_values(); ++v) {
      for (int in : o.accepted(v)) {
        for (int out : o.rejected(v)) {
          if (ds.score(out) <= ds.score(in)) continue;
          std::vector<int> swapped = order;
          std::replace(swapped.begin(), swapped.end(), in, out);
          CHECK(IgfRatio(ds, Outcome::Create(ds, swapped), v) >= IgfRatio(ds, o, v));
          ++swaps;
        }
      }
    }
  }
  CHECK(swaps > 100);
}

TEST_CASE("aggregated measure can drop after an upward swap of equal labels", "[metrics]") {
  const Dataset ds = MakeDataset({{"team", {"all"}}, {"side", {"p", "q"}}}, {{"a", "9", "all", "p"},
                                                                             {"b", "4", "all", "q"},
                                                                             {"c", "3", "all", "p"},
                                                                             {"d", "3", "all", "q"}});
  const ValueId all = Value(ds, "all");
  // b and d carry the same labels; taking b instead of d exposes b to a.
  CHECK(IgfAggregated(ds, OutcomeOf(ds, {"c", "d"}), all) == Rational(6, 19));
  CHECK(IgfAggregated(ds, OutcomeOf(ds, {"b", "c"}), all) == Rational(4, 13));
  CHECK(IgfRatio(ds, OutcomeOf(ds, {"c", "d"}), all) == Rational(3, 9));
  CHECK(IgfRatio(ds, OutcomeOf(ds, {"b", "c"}), all) == Rational(3, 9));
}

// With distinct scores, an upward swap between items carrying the same
// labels never lowers an aggregated measure.
TEST_CASE("aggregated swap monotonicity without ties", "[metrics]") {
  std::mt19937_64 rng(23);
  int swaps = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const int n = std::uniform_int_distribution<int>(3, 10)(rng);
    std::vector<int> scores(n);
    std::iota(scores.begin(), scores.end(), 1);
    std::shuffle(scores.begin(), scores.end(), rng);
    std::vector<std::vector<std::string>> rows;
    for (int i = 0; i < n; ++i) {
      rows.push_back({"i" + std::to_string(i), std::to_string(scores[i]),
                      rng() % 2 ? "p" : "q", rng() % 2 ? "x" : "y"});
    }
    const Dataset ds = MakeDataset({{"side", {"p", "q"}}, {"kind", {"x", "y"}}}, rows);
    const int k = std::uniform_int_distribution<int>(1, n - 1)(rng);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(k);
    const Outcome o = Outcome::Create(ds, order);
    for (int in : order) {
      for (int out = 0; out < n; ++out) {
        if (o.selected(out) || ds.score(out) <= ds.score(in)) continue;
        if (ds.item(out).labels != ds.item(in).labels) continue;
        std::vector<int> swapped = order;
        std::replace(swapped.begin(), swapped.end(), in, out);
        const Outcome s = Outcome::Create(ds, swapped);
        for (ValueId v = 0; v < ds.schema().num_values(); ++v) {
          if (!ds.group(v).empty()) CHECK(IgfAggregated(ds, s, v) >= IgfAggregated(ds, o, v));
        }
        ++swaps;
      }
    }
  }
  CHECK(swaps > 300);
}

// Items with identical labels form a cell. Replacing a cell's selected
// members by the same number of its best members keeps or raises every
// ratio measure. The solver's equal-label dominance rule relies on this.
TEST_CASE("cell prefix monotonicity of the ratio measure", "[metrics]") {
  std::mt19937_64 rng(19);
  int moves = 0;
  for (int trial = 0; trial < 1500; ++trial) {
    const auto inst = testing::MakeRandomInstance(rng, 4, 12, 6);
    const Dataset& ds = inst.dataset;
    const int n = ds.size();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(inst.constraints.k());
    std::vector<bool> selected(n, false);
    for (int i : order) selected[i] = true;
    std::vector<bool> seen(n, false);
    for (int first = 0; first < n; ++first) {
      if (seen[first]) continue;
      std::vector<int> cell;
      for (int i = first; i < n; ++i) {
        if (ds.item(i).labels == ds.item(first).labels) {
          cell.push_back(i);
          seen[i] = true;
        }
      }
      std::stable_sort(cell.begin(), cell.end(),
                       [&](int a, int b) { return ds.score(a) > ds.score(b); });
      std::vector<bool> moved = selected;
      const auto count = std::count_if(cell.begin(), cell.end(), [&](int i) { return selected[i]; });
      for (size_t r = 0; r < cell.size(); ++r) moved[cell[r]] = static_cast<long>(r) < count;
      if (moved == selected) continue;
      ++moves;
      const auto a = testing::OracleVector(ds, selected, IgfMode::kRatio);
      const auto b = testing::OracleVector(ds, moved, IgfMode::kRatio);
      for (const auto& [v, q] : a) CHECK(b.at(v) >= q);
    }
  }
  CHECK(moves > 200);
}

}  // namespace
}  // namespace igfair
