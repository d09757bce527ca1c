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

#ifndef IGFAIR_SIMPLEX_H_
#define IGFAIR_SIMPLEX_H_

#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace igfair {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class LpStatus { kOptimal, kInfeasible, kIterationLimit };

// Bounded-variable revised primal simplex on
//
//   maximize c'x  subject to  row_lo <= A x <= row_hi,  col_lo <= x <= col_hi.
//
// Each row r gets a logical variable equal to its activity, bounded by
// [row_lo, row_hi]; the basis always has one column per row. The basis
// inverse is kept dense and updated in product form, with a periodic
// refactorization that only inverts the structural part of the basis.
//
// Bounds and rows may change between calls to Solve(); the previous basis is
// kept and repaired by the composite phase 1, which makes re-solves after a
// branching decision or a row append cheap.
class BoundedSimplex {
 public:
  explicit BoundedSimplex(int num_columns);

  int num_columns() const { return num_columns_; }
  int num_rows() const { return num_rows_; }

  void SetObjective(int col, double coef);
  void SetColumnBounds(int col, double lo, double hi);
  double column_lower(int col) const { return lower_[col]; }
  double column_upper(int col) const { return upper_[col]; }

  // Appends a row; its logical enters the basis. Returns the row index.
  int AddRow(std::span<const std::pair<int, double>> terms, double lo, double hi);

  LpStatus Solve(std::int64_t max_iterations = 1'000'000);

  double ObjectiveValue() const;
  double Value(int col) const { return x_[col]; }
  double RowActivity(int row) const { return x_[num_columns_ + row]; }

  std::int64_t iterations() const { return total_iterations_; }
  // True when the last Solve() fell back to Bland's rule.
  bool used_bland() const { return used_bland_; }

  // Discards the basis and restarts from the all-logical one.
  void ResetBasis();

 private:
  enum class Place : std::uint8_t { kBasic, kAtLower, kAtUpper, kFree };

  int total_vars() const { return num_columns_ + num_rows_; }
  bool is_logical(int var) const { return var >= num_columns_; }

  void PlaceNonbasic(int var);
  void RecomputeBasicValues();
  bool Refactor();
  void Column(int var, std::vector<double>& dense) const;
  void Ftran(int var, std::vector<double>& alpha) const;
  void Pivot(int leaving_pos, int entering, const std::vector<double>& alpha);

  int num_columns_ = 0;
  int num_rows_ = 0;
  std::vector<std::vector<std::pair<int, double>>> cols_;  // structural columns
  std::vector<std::vector<std::pair<int, double>>> rows_;  // same entries by row
  std::vector<double> cost_;                                // maximize
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> x_;
  std::vector<Place> place_;
  std::vector<int> head_;   // basis position -> variable
  std::vector<int> where_;  // variable -> basis position or -1
  std::vector<double> binv_;  // num_rows_ x num_rows_, row-major
  bool values_dirty_ = true;
  int pivots_since_refactor_ = 0;
  std::int64_t total_iterations_ = 0;
  bool used_bland_ = false;
};

}  // namespace igfair

#endif  // IGFAIR_SIMPLEX_H_
