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

#include "igfair/leximin.h"

#include <algorithm>

namespace igfair {
namespace {

std::vector<ValueId> Floating(const IgfBounds& bounds) {
  std::vector<ValueId> out;
  for (const auto& [v, entry] : bounds.entries()) {
    if (entry.status == IgfBounds::Status::kFloating) out.push_back(v);
  }
  return out;
}

// Feasibility query that also returns the witness outcome when one exists.
std::optional<Outcome> FindFeasible(const Dataset& dataset,
                                    const DiversityConstraints& constraints,
                                    const IgfBounds& bounds, const SolverOptions& options) {
  SolverOptions query = options;
  query.stop_at_first_feasible = true;
  Solution sol = SolveInstance(dataset, constraints, bounds, query);
  switch (sol.status) {
    case SolveStatus::kOptimal:
    case SolveStatus::kFeasible:
      return std::move(sol.outcome);
    case SolveStatus::kInfeasible:
      return std::nullopt;
    case SolveStatus::kLimitReached:
      break;
  }
  throw SolverLimitError("solver limit reached during a feasibility query");
}

// The search starts from the exact optimum with every floating group at
// `floor`, a level known to be feasible. Its weakest floating group sets the
// lower end, so the answer never drops below an outcome already in hand.
Rational Bisect(const Dataset& dataset, const DiversityConstraints& constraints,
                const IgfBounds& frozen, const Rational& floor, const Rational& epsilon,
                const SolverOptions& options, LeximinRound* round,
                std::optional<Outcome>* witness_out) {
  if (epsilon <= 0 || epsilon > 1) throw Error("epsilon must lie in (0, 1]");
  IgfBounds bounds = frozen;
  bounds.SetAll(floor);
  SolverOptions exact = options;
  exact.stop_at_first_feasible = false;
  Solution start = SolveInstance(dataset, constraints, bounds, exact);
  if (start.status == SolveStatus::kLimitReached) {
    throw SolverLimitError("solver limit reached during a feasibility query");
  }
  if (start.status == SolveStatus::kInfeasible) {
    throw Error(floor == 0 ? "constraints are infeasible even without IGF floors"
                           : "the previous floor is no longer feasible");
  }
  std::optional<Outcome> witness = std::move(start.outcome);

  Rational lo = 1;
  const IgfVector achieved = ComputeIgfVector(dataset, *witness, frozen.mode());
  for (const ValueId v : Floating(frozen)) lo = std::min(lo, achieved.values.at(v));
  Rational hi = 1;
  bool hi_tested = false;
  auto probe = [&](const Rational& q) {
    bounds.SetAll(q);
    std::optional<Outcome> found = FindFeasible(dataset, constraints, bounds, options);
    const bool ok = found.has_value();
    if (round) round->steps.push_back({lo, hi, q, ok});
    if (ok) witness = std::move(found);
    return ok;
  };
  while (hi - lo >= epsilon) {
    const Rational mid = (lo + hi) / 2;
    if (probe(mid)) {
      lo = mid;
    } else {
      hi = mid;
      hi_tested = true;
    }
  }
  if (!hi_tested && lo < 1 && probe(Rational(1))) lo = 1;
  if (witness_out) *witness_out = std::move(witness);
  if (round) round->q_star = lo;
  return lo;
}

// `witness`, when given, is an outcome feasible at the common floor q*. It
// only ever confirms feasibility of a probe, so the answer does not depend on
// which witness the solver happened to find.
std::vector<ValueId> FindBinding(const Dataset& dataset, const DiversityConstraints& constraints,
                                 const IgfBounds& frozen, const Rational& q_star,
                                 const Rational& epsilon, const SolverOptions& options,
                                 const std::optional<Outcome>& witness, std::string* method);

}  // namespace

bool IsFeasible(const Dataset& dataset, const DiversityConstraints& constraints,
                const IgfBounds& bounds, const SolverOptions& options) {
  return FindFeasible(dataset, constraints, bounds, options).has_value();
}

Rational MaximinQ(const Dataset& dataset, const DiversityConstraints& constraints,
                  const IgfBounds& frozen, const Rational& epsilon,
                  const SolverOptions& options, LeximinRound* round) {
  return Bisect(dataset, constraints, frozen, Rational(0), epsilon, options, round, nullptr);
}

std::vector<ValueId> BindingGroups(const Dataset& dataset, const DiversityConstraints& constraints,
                                   const IgfBounds& frozen, const Rational& q_star,
                                   const Rational& epsilon, const SolverOptions& options,
                                   std::string* method) {
  return FindBinding(dataset, constraints, frozen, q_star, epsilon, options, std::nullopt,
                     method);
}

namespace {

std::vector<ValueId> FindBinding(const Dataset& dataset, const DiversityConstraints& constraints,
                                 const IgfBounds& frozen, const Rational& q_star,
                                 const Rational& epsilon, const SolverOptions& options,
                                 const std::optional<Outcome>& witness, std::string* method) {
  const std::vector<ValueId> floating = Floating(frozen);
  if (q_star >= 1) {
    if (method) *method = "ceiling";
    return floating;
  }
  Rational raised = q_star + epsilon;
  if (raised > 1) raised = 1;
  IgfBounds base = frozen;
  base.SetAll(q_star);

  std::optional<IgfVector> witness_igf;
  if (witness) {
    witness_igf = ComputeIgfVector(dataset, *witness, frozen.mode());
    // The witness must satisfy the common floor for it to certify anything.
    for (ValueId v : floating) {
      if (witness_igf->values.at(v) < q_star) {
        witness_igf.reset();
        break;
      }
    }
  }

  std::vector<ValueId> binding;
  for (ValueId v : floating) {
    if (witness_igf && witness_igf->values.at(v) >= raised) continue;
    IgfBounds probe = base;
    probe.Set(v, raised, IgfBounds::Status::kFloating);
    if (!IsFeasible(dataset, constraints, probe, options)) binding.push_back(v);
  }
  if (!binding.empty()) {
    if (method) *method = "probe";
    return binding;
  }

  // No single group blocks the joint raise: freeze the weakest one in the
  // optimum at q*.
  SolverOptions exact = options;
  exact.stop_at_first_feasible = false;
  const Solution sol = SolveInstance(dataset, constraints, base, exact);
  if (sol.status == SolveStatus::kLimitReached) {
    throw SolverLimitError("solver limit reached while selecting binding groups");
  }
  if (sol.status != SolveStatus::kOptimal || !sol.outcome) {
    throw Error("q* is no longer feasible while selecting binding groups");
  }
  const IgfVector igf = ComputeIgfVector(dataset, *sol.outcome, frozen.mode());
  ValueId weakest = floating.front();
  for (ValueId v : floating) {
    if (igf.values.at(v) < igf.values.at(weakest)) weakest = v;
  }
  if (method) *method = "fallback";
  return {weakest};
}

}  // namespace

LeximinTrace LeximinSolve(const Dataset& dataset, const DiversityConstraints& constraints,
                          IgfMode mode, const LeximinOptions& options) {
  options.solver.Validate();
  LeximinTrace trace;
  trace.mode = mode;
  trace.epsilon = options.epsilon;
  IgfBounds bounds(dataset, mode);
  Rational floor = 0;

  while (true) {
    const std::vector<ValueId> floating = Floating(bounds);
    if (floating.empty()) break;
    LeximinRound round;
    round.floating = floating;
    std::optional<Outcome> witness;
    const Rational q_star = Bisect(dataset, constraints, bounds, floor, options.epsilon,
                                   options.solver, &round, &witness);
    floor = q_star;
    round.frozen = FindBinding(dataset, constraints, bounds, q_star, options.epsilon,
                               options.solver, witness, &round.method);
    for (ValueId v : round.frozen) bounds.Set(v, q_star, IgfBounds::Status::kFrozen);
    trace.rounds.push_back(std::move(round));
  }

  trace.final_bounds = bounds;
  SolverOptions exact = options.solver;
  exact.stop_at_first_feasible = false;
  trace.final_solution = SolveInstance(dataset, constraints, bounds, exact);
  if (trace.final_solution.status == SolveStatus::kInfeasible) {
    throw Error("frozen IGF floors turned out infeasible");
  }
  if (trace.final_solution.status != SolveStatus::kOptimal) {
    throw SolverLimitError("solver limit reached in the final leximin solve");
  }
  return trace;
}

}  // namespace igfair
