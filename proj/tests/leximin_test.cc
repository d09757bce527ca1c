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
#include <set>

#include <catch2/catch_amalgamated.hpp>

#include "igfair/leximin.h"
#include "igfair/solver.h"
#include "test_support.h"

namespace igfair {
namespace {

using testing::CommitteeConstraints;
using testing::CommitteeDataset;
using testing::MakeDataset;
using testing::Value;

const Rational kEpsilon(1, 1000);

// Largest achievable minimum over every feasible outcome.
Rational BestMinimum(const std::vector<testing::EnumeratedOutcome>& all) {
  Rational best = -1;
  for (const auto& e : all) best = std::max(best, testing::SortedValues(e.igf).front());
  return best;
}

// Sorted vector `a` is at least `b` lexicographically, with `slack` per coordinate.
bool DominatesWithin(const std::vector<Rational>& a, const std::vector<Rational>& b,
                     const Rational& slack) {
  for (size_t j = 0; j < a.size(); ++j) {
    if (a[j] + slack < b[j]) return false;
    if (a[j] > b[j] + slack) return true;
  }
  return true;
}

void CheckTraceShape(const Dataset& ds, const LeximinTrace& trace) {
  REQUIRE(trace.final_solution.status == SolveStatus::kOptimal);
  std::multiset<ValueId> frozen;
  Rational previous = 0;
  for (const LeximinRound& round : trace.rounds) {
    CHECK_FALSE(round.frozen.empty());
    CHECK(round.q_star >= previous);
    previous = round.q_star;
    frozen.insert(round.frozen.begin(), round.frozen.end());
  }
  for (ValueId v = 0; v < ds.schema().num_values(); ++v) {
    CHECK(frozen.count(v) == (ds.group(v).empty() ? 0u : 1u));
  }
  for (const auto& [v, entry] : trace.final_bounds.entries()) {
    CHECK(entry.status == IgfBounds::Status::kFrozen);
  }
  const IgfVector igf = ComputeIgfVector(ds, *trace.final_solution.outcome, trace.mode);
  for (const auto& [v, entry] : trace.final_bounds.entries()) CHECK(igf.values.at(v) >= entry.q);
}

TEST_CASE("committee leximin dominates every feasible committee", "[leximin]") {
  const Dataset ds = CommitteeDataset();
  const DiversityConstraints c = CommitteeConstraints(ds);
  for (IgfMode mode : {IgfMode::kRatio, IgfMode::kAggregated}) {
    const LeximinTrace trace = LeximinSolve(ds, c, mode);
    CheckTraceShape(ds, trace);
    const auto all = testing::EnumerateFeasible(ds, c, mode);
    REQUIRE_FALSE(all.empty());
    const IgfVector got = ComputeIgfVector(ds, *trace.final_solution.outcome, mode);
    std::map<ValueId, Rational> values(got.values.begin(), got.values.end());
    const std::vector<Rational> sorted = testing::SortedValues(values);
    for (const auto& e : all) {
      CHECK(DominatesWithin(sorted, testing::SortedValues(e.igf), 2 * kEpsilon));
    }
    // Round one converges to the best achievable minimum.
    const Rational best = BestMinimum(all);
    CHECK(trace.rounds.front().q_star <= best);
    CHECK(trace.rounds.front().q_star > best - kEpsilon);
    CHECK(trace.final_solution.objective <= 373);
  }
}

TEST_CASE("committee aggregated leximin lifts the worst group", "[leximin]") {
  const Dataset ds = CommitteeDataset();
  const LeximinTrace trace = LeximinSolve(ds, CommitteeConstraints(ds), IgfMode::kAggregated);
  const IgfVector after = ComputeIgfVector(ds, *trace.final_solution.outcome, IgfMode::kAggregated);
  const IgfVector before =
      ComputeIgfVector(ds, testing::OutcomeOf(ds, {"A", "B", "G", "K"}), IgfMode::kAggregated);
  CHECK(before.Min() == Rational(90, 281));
  CHECK(after.Min() > Rational(90, 281));
}

TEST_CASE("no diversity bounds reach the ceiling in one round", "[leximin]") {
  const Dataset ds = CommitteeDataset();
  const DiversityConstraints none = DiversityConstraints::None(4, ds.schema().num_values());
  for (IgfMode mode : {IgfMode::kRatio, IgfMode::kAggregated}) {
    CHECK(MaximinQ(ds, none, IgfBounds(ds, mode), kEpsilon, {}) == 1);
    const LeximinTrace trace = LeximinSolve(ds, none, mode);
    REQUIRE(trace.rounds.size() == 1u);
    CHECK(trace.rounds[0].q_star == 1);
    CHECK(trace.rounds[0].frozen.size() == 5u);
    CHECK(trace.rounds[0].method == "ceiling");
    CHECK(trace.final_solution.objective == 388);
  }
}

TEST_CASE("single group leximin equals its best measure", "[leximin]") {
  const Dataset ds = MakeDataset(
      {{"team", {"all"}}},
      {{"a", "10", "all"}, {"b", "9", "all"}, {"c", "7", "all"}, {"d", "4", "all"}});
  const DiversityConstraints none = DiversityConstraints::None(2, 1);
  for (IgfMode mode : {IgfMode::kRatio, IgfMode::kAggregated}) {
    const LeximinTrace trace = LeximinSolve(ds, none, mode);
    CHECK(trace.rounds.size() == 1u);
    CHECK(trace.rounds[0].q_star == 1);
  }
}

TEST_CASE("forced bottom member sets the maximin value", "[leximin]") {
  const Dataset ds = MakeDataset({{"team", {"all"}}, {"badge", {"tag", "plain"}}},
                                 {{"a", "10", "all", "plain"},
                                  {"b", "9", "all", "plain"},
                                  {"c", "7", "all", "plain"},
                                  {"d", "4", "all", "tag"}});
  const DiversityConstraints c =
      DiversityConstraints::Create(2, 3, std::vector<BoundEntry>{{Value(ds, "tag"), 2, 1}});
  for (IgfMode mode : {IgfMode::kRatio, IgfMode::kAggregated}) {
    const Rational best = BestMinimum(testing::EnumerateFeasible(ds, c, mode));
    const Rational q = MaximinQ(ds, c, IgfBounds(ds, mode), kEpsilon, {});
    CHECK(q <= best);
    CHECK(q > best - kEpsilon);
  }
  // Ratio: {a, d} gives 4/9 for the team.
  CHECK(BestMinimum(testing::EnumerateFeasible(ds, c, IgfMode::kRatio)) == Rational(4, 9));
}

TEST_CASE("symmetric groups freeze together", "[leximin]") {
  const Dataset ds = MakeDataset({{"side", {"u", "w"}}, {"badge", {"t", "o"}}},
                                 {{"u1", "10", "u", "o"},
                                  {"u2", "9", "u", "o"},
                                  {"u3", "8", "u", "t"},
                                  {"w1", "10", "w", "o"},
                                  {"w2", "9", "w", "o"},
                                  {"w3", "8", "w", "t"}});
  const DiversityConstraints c =
      DiversityConstraints::Create(2, 4, std::vector<BoundEntry>{{Value(ds, "t"), 2, 2}});
  const LeximinTrace trace = LeximinSolve(ds, c, IgfMode::kRatio);
  REQUIRE_FALSE(trace.rounds.empty());
  const LeximinRound& first = trace.rounds.front();
  CHECK(first.q_star > Rational(8, 10) - kEpsilon);
  CHECK(first.q_star <= Rational(8, 10));
  CHECK(std::count(first.frozen.begin(), first.frozen.end(), Value(ds, "u")) == 1);
  CHECK(std::count(first.frozen.begin(), first.frozen.end(), Value(ds, "w")) == 1);
  CheckTraceShape(ds, trace);
}

TEST_CASE("maximin matches enumeration on random instances", "[leximin]") {
  std::mt19937_64 rng(71);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto inst = testing::MakeRandomInstance(rng, 5, 9, 3);
    const Dataset& ds = inst.dataset;
    const IgfMode mode = trial % 2 ? IgfMode::kAggregated : IgfMode::kRatio;
    const auto all = testing::EnumerateFeasible(ds, inst.constraints, mode);
    if (all.empty()) {
      CHECK_THROWS_AS(MaximinQ(ds, inst.constraints, IgfBounds(ds, mode), kEpsilon, {}), Error);
      continue;
    }
    const Rational best = BestMinimum(all);
    LeximinRound round;
    const Rational q = MaximinQ(ds, inst.constraints, IgfBounds(ds, mode), kEpsilon, {}, &round);
    CHECK(q <= best);
    CHECK(q > best - kEpsilon);
    for (const BisectionStep& step : round.steps) CHECK(step.lo <= step.hi);
    ++checked;
  }
  CHECK(checked > 10);
}

TEST_CASE("epsilon must be a fraction", "[leximin]") {
  const Dataset ds = CommitteeDataset();
  LeximinOptions options;
  options.epsilon = 0;
  CHECK_THROWS_AS(LeximinSolve(ds, CommitteeConstraints(ds), IgfMode::kRatio, options), Error);
  options.epsilon = 2;
  CHECK_THROWS_AS(LeximinSolve(ds, CommitteeConstraints(ds), IgfMode::kRatio, options), Error);
}

TEST_CASE("leximin is stable across worker counts", "[leximin]") {
  const Dataset ds = CommitteeDataset();
  LeximinOptions four;
  four.solver.workers = 4;
  for (IgfMode mode : {IgfMode::kRatio, IgfMode::kAggregated}) {
    const LeximinTrace a = LeximinSolve(ds, CommitteeConstraints(ds), mode);
    const LeximinTrace b = LeximinSolve(ds, CommitteeConstraints(ds), mode, four);
    REQUIRE(a.rounds.size() == b.rounds.size());
    for (size_t r = 0; r < a.rounds.size(); ++r) {
      CHECK(a.rounds[r].q_star == b.rounds[r].q_star);
      CHECK(a.rounds[r].frozen == b.rounds[r].frozen);
    }
    CHECK(std::equal(a.final_solution.outcome->ranking().begin(),
                     a.final_solution.outcome->ranking().end(),
                     b.final_solution.outcome->ranking().begin(),
                     b.final_solution.outcome->ranking().end()));
  }
}

}  // namespace
}  // namespace igfair
