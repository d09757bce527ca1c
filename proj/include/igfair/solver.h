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

// Exact branch-and-bound over the selection variables of an IntegerProgram,
// plus a brute-force enumerator used as an oracle in tests.
//
// Results follow one tie-break everywhere: among maximum-utility feasible
// selections the one whose ascending id list is lexicographically smallest
// wins, and it is ordered by CheckPrefixFeasible's canonical ordering.

#ifndef IGFAIR_SOLVER_H_
#define IGFAIR_SOLVER_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "igfair/constraints.h"
#include "igfair/core.h"
#include "igfair/model.h"
#include "igfair/rational.h"

namespace igfair {

struct SolverOptions {
  std::optional<double> time_limit_seconds;
  std::optional<std::int64_t> node_limit;
  double integrality_tolerance = 1e-6;
  int workers = 1;
  // Return the first verified feasible selection (status kFeasible) instead
  // of proving optimality. Used for pure feasibility queries.
  bool stop_at_first_feasible = false;
  // One line per 1000 nodes: open-node bound, incumbent, depth.
  std::ostream* node_log = nullptr;

  void Validate() const;  // throws Error
};

// Raised when a caller needs a decided answer and the solver stopped at a
// time or node limit first.
class SolverLimitError : public Error {
 public:
  using Error::Error;
};

enum class SolveStatus { kOptimal, kFeasible, kInfeasible, kLimitReached };

std::string StatusName(SolveStatus status);

struct Solution {
  SolveStatus status = SolveStatus::kInfeasible;
  std::optional<Outcome> outcome;  // present whenever an incumbent exists
  Rational objective;              // utility of `outcome`
  std::int64_t nodes = 0;
  std::int64_t lp_iterations = 0;
  double wall_seconds = 0.0;

  bool has_outcome() const { return outcome.has_value(); }
};

// Throws Error if the program does not have the layout produced by the model
// module for this dataset (dimension mismatch, foreign objective, unknown
// variables in rows).
Solution SolveIp(const Dataset& dataset, const IntegerProgram& program,
                 const SolverOptions& options = {});

// Builds the model for (constraints, bounds) and solves it.
Solution SolveInstance(const Dataset& dataset, const DiversityConstraints& constraints,
                       const IgfBounds& bounds, const SolverOptions& options = {});

struct LpRelaxation {
  bool feasible = false;
  double bound = 0.0;          // utility units
  std::vector<double> values;  // one per program variable
};

// Relaxation of the full program (every row, every variable) with binaries in
// [0, 1] and the given 0/1 fixings. Throws Error for inconsistent fixings.
LpRelaxation SolveLpRelaxation(const Dataset& dataset, const IntegerProgram& program,
                               const std::vector<std::pair<int, int>>& fixings = {});

// Enumerates every k-subset in id order. IGF floors are checked with the
// metrics module and orderings with CheckPrefixFeasible; the program is not
// consulted. Throws Error when C(n, k) * k! exceeds `budget`.
Solution BruteForceSolve(const Dataset& dataset, const DiversityConstraints& constraints,
                         const IgfBounds& bounds, double budget = 5e7);

}  // namespace igfair

#endif  // IGFAIR_SOLVER_H_
