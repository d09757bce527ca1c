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

#include <chrono>
#include <numeric>

#include "igfair/metrics.h"
#include "igfair/prefix.h"
#include "igfair/solver.h"

namespace igfair {

Solution BruteForceSolve(const Dataset& dataset, const DiversityConstraints& constraints,
                         const IgfBounds& bounds, double budget) {
  const auto start = std::chrono::steady_clock::now();
  const int n = dataset.size();
  const int k = constraints.k();
  if (k > n) throw Error("k exceeds the pool size");
  if (constraints.num_values() != dataset.schema().num_values()) {
    throw Error("constraints were built for a different schema");
  }
  // C(n, k) * k! = n! / (n - k)!.
  double work = 1.0;
  for (int j = 0; j < k; ++j) work *= n - j;
  if (work > budget) {
    throw Error("instance too large for enumeration: C(n, k) * k! = " + std::to_string(work));
  }

  Solution sol;
  std::optional<std::int64_t> best;
  std::vector<int> pick(k);
  std::iota(pick.begin(), pick.end(), 0);
  std::vector<int> selection(k);
  const auto by_id = dataset.by_id();
  while (true) {
    ++sol.nodes;
    std::int64_t utility = 0;
    for (int j = 0; j < k; ++j) {
      selection[j] = by_id[pick[j]];
      utility += dataset.scaled_score(selection[j]);
    }
    // Subsets arrive in lexicographic id order, so the first maximum wins.
    if (!best || utility > *best) {
      const Outcome as_set = Outcome::Create(dataset, selection);
      bool fair = true;
      for (const auto& [v, entry] : bounds.entries()) {
        if (entry.q == 0) continue;
        if (Igf(bounds.mode(), dataset, as_set, v) < entry.q) {
          fair = false;
          break;
        }
      }
      if (fair) {
        std::optional<std::vector<int>> ordering =
            CheckPrefixFeasible(dataset, selection, constraints);
        if (ordering) {
          best = utility;
          sol.outcome = Outcome::Create(dataset, *ordering);
        }
      }
    }
    int j = k - 1;
    while (j >= 0 && pick[j] == n - k + j) --j;
    if (j < 0) break;
    ++pick[j];
    for (int t = j + 1; t < k; ++t) pick[t] = pick[t - 1] + 1;
  }

  sol.status = best ? SolveStatus::kOptimal : SolveStatus::kInfeasible;
  if (sol.outcome) sol.objective = sol.outcome->utility();
  sol.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

}  // namespace igfair
