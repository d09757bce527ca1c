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

// Ordering a fixed selection so that every prefix meets its diversity bounds.

#ifndef IGFAIR_PREFIX_H_
#define IGFAIR_PREFIX_H_

#include <optional>
#include <span>
#include <vector>

#include "igfair/constraints.h"
#include "igfair/core.h"

namespace igfair {

// Returns an ordering of `selected` (item indices) that meets every bound of
// `constraints`, or nullopt if none exists. Among feasible orderings the one
// returned is lexicographically smallest by item id, position by position.
//
// Items with identical label vectors are interchangeable, so the search runs
// over count vectors of label types: a depth-first search that always tries
// the type closest to missing a deadline first, memoizing dead states. The
// first descent is the usual earliest-deadline greedy; backtracking makes
// the answer exact.
//
// Throws Error if selected.size() != constraints.k() or an index repeats.
std::optional<std::vector<int>> CheckPrefixFeasible(const Dataset& dataset,
                                                    std::span<const int> selected,
                                                    const DiversityConstraints& constraints);

// True when the ranking meets bound(v, p) for every v and p <= k.
bool SatisfiesPrefixBounds(const Dataset& dataset, std::span<const int> ranking,
                           const DiversityConstraints& constraints);

}  // namespace igfair

#endif  // IGFAIR_PREFIX_H_
