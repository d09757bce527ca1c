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

#include "igfair/metrics.h"

#include <cstdint>

namespace igfair {
namespace {

void CheckGroup(const Dataset& dataset, ValueId v) {
  if (v < 0 || v >= dataset.schema().num_values()) throw Error("unknown attribute value");
  if (dataset.group(v).empty()) {
    throw Error("group '" + dataset.schema().value_name(v) + "' has no members");
  }
}

}  // namespace

std::string ModeName(IgfMode mode) { return mode == IgfMode::kRatio ? "ratio" : "agg"; }

IgfMode ParseMode(std::string_view text) {
  if (text == "ratio") return IgfMode::kRatio;
  if (text == "agg" || text == "aggregated") return IgfMode::kAggregated;
  throw Error("unknown mode '" + std::string(text) + "' (expected ratio or agg)");
}

Rational IgfRatio(const Dataset& dataset, const Outcome& outcome, ValueId v) {
  CheckGroup(dataset, v);
  const auto a = outcome.lowest_accepted(v);
  const auto b = outcome.highest_rejected(v);
  if (!a || !b || *a >= *b) return Rational(1);
  return Rational(*a, *b);
}

Rational IgfAggregated(const Dataset& dataset, const Outcome& outcome, ValueId v) {
  CheckGroup(dataset, v);
  const auto members = dataset.group(v);
  Rational worst(1);
  // Walk the group in descending score order, keeping prefix sums over the
  // whole group and over its accepted part. Items tied with s_i all belong to
  // I_{i,v}, so sums are taken at the end of each run of equal scores.
  std::int64_t group_mass = 0;
  std::int64_t accepted_mass = 0;
  std::size_t pos = 0;
  while (pos < members.size()) {
    const std::int64_t s = dataset.scaled_score(members[pos]);
    std::size_t end = pos;
    bool any_accepted = false;
    while (end < members.size() && dataset.scaled_score(members[end]) == s) {
      group_mass += s;
      if (outcome.selected(members[end])) {
        accepted_mass += s;
        any_accepted = true;
      }
      ++end;
    }
    if (any_accepted) {
      const Rational ratio(accepted_mass, group_mass);
      if (ratio < worst) worst = ratio;
    }
    pos = end;
  }
  return worst;
}

Rational Igf(IgfMode mode, const Dataset& dataset, const Outcome& outcome, ValueId v) {
  return mode == IgfMode::kRatio ? IgfRatio(dataset, outcome, v)
                                 : IgfAggregated(dataset, outcome, v);
}

Rational IgfVector::Min() const {
  Rational lowest(1);
  for (const auto& [v, value] : values) {
    if (value < lowest) lowest = value;
  }
  return lowest;
}

IgfVector ComputeIgfVector(const Dataset& dataset, const Outcome& outcome, IgfMode mode) {
  IgfVector result;
  result.mode = mode;
  for (ValueId v = 0; v < dataset.schema().num_values(); ++v) {
    if (dataset.group(v).empty()) continue;
    result.values.emplace(v, Igf(mode, dataset, outcome, v));
  }
  return result;
}

}  // namespace igfair
