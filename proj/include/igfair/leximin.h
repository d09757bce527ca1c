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

// Leximin balancing of per-group IGF: raise a common floor on all floating
// groups by bisection, freeze the groups that block any further raise, and
// repeat until every group is frozen.

#ifndef IGFAIR_LEXIMIN_H_
#define IGFAIR_LEXIMIN_H_

#include <string>
#include <vector>

#include "igfair/constraints.h"
#include "igfair/core.h"
#include "igfair/metrics.h"
#include "igfair/model.h"
#include "igfair/rational.h"
#include "igfair/solver.h"

namespace igfair {

struct LeximinOptions {
  Rational epsilon = Rational(1, 1000);
  SolverOptions solver;
};

struct BisectionStep {
  Rational lo;
  Rational hi;
  Rational q;  // probed value
  bool feasible = false;
};

struct LeximinRound {
  std::vector<ValueId> floating;
  std::vector<BisectionStep> steps;
  Rational q_star;
  std::vector<ValueId> frozen;
  // "probe": found by per-group probes; "fallback": smallest achieved IGF;
  // "ceiling": q* reached 1.
  std::string method;
};

struct LeximinTrace {
  IgfMode mode = IgfMode::kRatio;
  Rational epsilon;
  std::vector<LeximinRound> rounds;
  IgfBounds final_bounds;
  Solution final_solution;
};

// True when some selection meets every bound. Throws Error if the solver
// hits a limit before deciding.
bool IsFeasible(const Dataset& dataset, const DiversityConstraints& constraints,
                const IgfBounds& bounds, const SolverOptions& options);

// Largest q (within epsilon, from below) such that raising every floating
// group of `frozen` to q stays feasible. Throws Error when even q = 0 is
// infeasible.
Rational MaximinQ(const Dataset& dataset, const DiversityConstraints& constraints,
                  const IgfBounds& frozen, const Rational& epsilon,
                  const SolverOptions& options, LeximinRound* round = nullptr);

// Floating groups that cannot reach q* + epsilon while the others hold q*.
// Falls back to the floating group with the smallest IGF in the optimal
// outcome at q* (ties by value order) when no single group is blocking.
std::vector<ValueId> BindingGroups(const Dataset& dataset, const DiversityConstraints& constraints,
                                   const IgfBounds& frozen, const Rational& q_star,
                                   const Rational& epsilon, const SolverOptions& options,
                                   std::string* method = nullptr);

LeximinTrace LeximinSolve(const Dataset& dataset, const DiversityConstraints& constraints,
                          IgfMode mode, const LeximinOptions& options = {});

}  // namespace igfair

#endif  // IGFAIR_LEXIMIN_H_
