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

// Integer program for utility-maximizing rankings under prefix diversity
// bounds and per-group in-group fairness floors.
//
// Variables: x_i (item i selected), x_{i,p} (item i at position p), and for
// ratio-mode groups with a positive floor, a_v / b_v bracketing the lowest
// accepted and highest rejected score. All coefficients are exact rationals
// on the dataset's scaled score grid.

#ifndef IGFAIR_MODEL_H_
#define IGFAIR_MODEL_H_

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "igfair/constraints.h"
#include "igfair/core.h"
#include "igfair/metrics.h"
#include "igfair/rational.h"

namespace igfair {

// Per-group lower bounds on the in-group fairness measure.
class IgfBounds {
 public:
  enum class Status { kFloating, kFrozen };
  struct Entry {
    Rational q;
    Status status = Status::kFloating;
  };

  IgfBounds() = default;
  // Every value with a non-empty group gets q = 0, floating.
  IgfBounds(const Dataset& dataset, IgfMode mode);

  IgfMode mode() const { return mode_; }
  const std::map<ValueId, Entry>& entries() const { return entries_; }

  // q must lie in [0, 1]; v must have a non-empty group.
  void Set(ValueId v, const Rational& q, Status status = Status::kFloating);
  void SetAll(const Rational& q);  // floating entries only
  const Rational& q(ValueId v) const;
  Status status(ValueId v) const;
  bool Has(ValueId v) const { return entries_.count(v) > 0; }

 private:
  IgfMode mode_ = IgfMode::kRatio;
  std::map<ValueId, Entry> entries_;
};

enum class VarKind { kBinary, kContinuous };
enum class VarRole { kSelect, kPlace, kGroupMin, kGroupMax };

struct Variable {
  std::string name;
  VarKind kind = VarKind::kBinary;
  VarRole role = VarRole::kSelect;
  Rational lower;
  Rational upper;
  int item = -1;
  int position = -1;  // 1-based, place variables only
  ValueId group = -1;
};

enum class RowSense { kLessEqual, kGreaterEqual, kEqual };

enum class RowKind {
  kLinkage,           // x_i - sum_p x_{i,p} = 0
  kPositionCapacity,  // sum_i x_{i,p} <= 1
  kCardinality,       // sum_i x_i = k
  kDiversity,         // sum_{i in I_v} sum_{q <= p} x_{i,q} >= l_{v,p}
  kRatioMinAccepted,  // a_v + (lambda - 1) s_i x_i <= lambda s_i
  kRatioMaxRejected,  // b_v + s_i x_i >= s_i
  kRatioLink,         // a_v - q_v b_v >= 0
  kAggregated,        // sum_{h in I_{i,v}} s_h x_h - q_v S_{i,v} x_i >= 0
};

std::string RowKindName(RowKind kind);

struct Term {
  int var = 0;
  Rational coef;
};

struct Row {
  std::string name;
  RowKind kind = RowKind::kLinkage;
  std::vector<Term> terms;
  RowSense sense = RowSense::kLessEqual;
  Rational rhs;
  int item = -1;
  int position = -1;
  ValueId group = -1;
};

struct IntegerProgram {
  IgfMode mode = IgfMode::kRatio;
  int num_items = 0;
  int k = 0;
  std::vector<Variable> vars;
  std::vector<Row> rows;
  std::vector<Term> objective;  // maximize

  int select_var(int item) const { return item; }
  int place_var(int item, int position) const { return num_items + item * k + (position - 1); }

  int NumRows(RowKind kind) const;
};

IntegerProgram BuildRatioModel(const Dataset& dataset, const DiversityConstraints& constraints,
                               const IgfBounds& bounds);

IntegerProgram BuildAggregatedModel(const Dataset& dataset,
                                    const DiversityConstraints& constraints,
                                    const IgfBounds& bounds);

// Dispatches on bounds.mode().
IntegerProgram BuildModel(const Dataset& dataset, const DiversityConstraints& constraints,
                          const IgfBounds& bounds);

// Evaluates a row at an exact assignment.
bool RowSatisfied(const Row& row, const std::vector<Rational>& values);

// CPLEX-LP text format with fixed-point coefficients.
void WriteLpFormat(const IntegerProgram& program, std::ostream& out);

}  // namespace igfair

#endif  // IGFAIR_MODEL_H_
