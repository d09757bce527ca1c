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

#include "igfair/simplex.h"

#include <algorithm>
#include <cmath>

#include "igfair/rational.h"

namespace igfair {
namespace {

constexpr double kPrimalTol = 1e-9;
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kDropTol = 1e-14;
constexpr int kRefactorEvery = 100;
constexpr int kDegenerateLimit = 60;

}  // namespace

BoundedSimplex::BoundedSimplex(int num_columns)
    : num_columns_(num_columns),
      cols_(num_columns),
      cost_(num_columns, 0.0),
      lower_(num_columns, 0.0),
      upper_(num_columns, 0.0),
      x_(num_columns, 0.0),
      place_(num_columns, Place::kAtLower),
      where_(num_columns, -1) {}

void BoundedSimplex::SetObjective(int col, double coef) { cost_[col] = coef; }

void BoundedSimplex::PlaceNonbasic(int var) {
  if (std::isfinite(lower_[var])) {
    if (place_[var] == Place::kAtUpper && std::isfinite(upper_[var])) {
      x_[var] = upper_[var];
    } else {
      place_[var] = Place::kAtLower;
      x_[var] = lower_[var];
    }
  } else if (std::isfinite(upper_[var])) {
    place_[var] = Place::kAtUpper;
    x_[var] = upper_[var];
  } else {
    place_[var] = Place::kFree;
    x_[var] = 0.0;
  }
}

void BoundedSimplex::SetColumnBounds(int col, double lo, double hi) {
  if (lo > hi) throw Error("column bounds cross");
  lower_[col] = lo;
  upper_[col] = hi;
  if (place_[col] != Place::kBasic) {
    PlaceNonbasic(col);
    values_dirty_ = true;
  }
}

int BoundedSimplex::AddRow(std::span<const std::pair<int, double>> terms, double lo, double hi) {
  if (lo > hi) throw Error("row bounds cross");
  if (values_dirty_) RecomputeBasicValues();
  const int r = num_rows_;
  std::vector<std::pair<int, double>> row;
  for (const auto& [col, coef] : terms) {
    if (col < 0 || col >= num_columns_) throw Error("row refers to an unknown column");
    if (coef == 0.0) continue;
    row.emplace_back(col, coef);
    cols_[col].emplace_back(r, coef);
  }

  // Extend B^{-1}: the new logical is basic in the new row, and
  // B'^{-1} = [[B^{-1}, 0], [a_B' B^{-1}, -1]].
  const int m = num_rows_ + 1;
  std::vector<double> next(static_cast<size_t>(m) * m, 0.0);
  for (int i = 0; i < num_rows_; ++i) {
    std::copy(binv_.begin() + static_cast<size_t>(i) * num_rows_,
              binv_.begin() + static_cast<size_t>(i + 1) * num_rows_,
              next.begin() + static_cast<size_t>(i) * m);
  }
  double activity = 0.0;
  double* last = next.data() + static_cast<size_t>(num_rows_) * m;
  for (const auto& [col, coef] : row) {
    activity += coef * x_[col];
    const int pos = where_[col];
    if (pos < 0) continue;
    const double* src = binv_.data() + static_cast<size_t>(pos) * num_rows_;
    for (int j = 0; j < num_rows_; ++j) last[j] += coef * src[j];
  }
  last[num_rows_] = -1.0;
  binv_ = std::move(next);

  rows_.push_back(std::move(row));
  lower_.push_back(lo);
  upper_.push_back(hi);
  x_.push_back(activity);
  place_.push_back(Place::kBasic);
  where_.push_back(num_rows_);
  head_.push_back(num_columns_ + r);
  ++num_rows_;
  return r;
}

void BoundedSimplex::ResetBasis() {
  for (int j = 0; j < num_columns_; ++j) {
    where_[j] = -1;
    place_[j] = Place::kAtLower;
    PlaceNonbasic(j);
  }
  binv_.assign(static_cast<size_t>(num_rows_) * num_rows_, 0.0);
  for (int r = 0; r < num_rows_; ++r) {
    const int var = num_columns_ + r;
    place_[var] = Place::kBasic;
    where_[var] = r;
    head_[r] = var;
    binv_[static_cast<size_t>(r) * num_rows_ + r] = -1.0;
  }
  pivots_since_refactor_ = 0;
  values_dirty_ = true;
}

void BoundedSimplex::RecomputeBasicValues() {
  // B x_B = -N x_N, since [A, -I] (x, r) = 0.
  std::vector<double> rhs(num_rows_, 0.0);
  for (int j = 0; j < num_columns_; ++j) {
    if (place_[j] == Place::kBasic || x_[j] == 0.0) continue;
    for (const auto& [r, a] : cols_[j]) rhs[r] -= a * x_[j];
  }
  for (int r = 0; r < num_rows_; ++r) {
    const int var = num_columns_ + r;
    if (place_[var] != Place::kBasic) rhs[r] += x_[var];
  }
  for (int i = 0; i < num_rows_; ++i) {
    const double* row = binv_.data() + static_cast<size_t>(i) * num_rows_;
    double v = 0.0;
    for (int r = 0; r < num_rows_; ++r) v += row[r] * rhs[r];
    x_[head_[i]] = v;
  }
  values_dirty_ = false;
}

bool BoundedSimplex::Refactor() {
  const int m = num_rows_;
  // Rows whose logical is nonbasic pair with the structural basics.
  std::vector<int> structural_pos;
  std::vector<int> free_rows;
  std::vector<int> row_index(m, -1);
  for (int i = 0; i < m; ++i) {
    if (!is_logical(head_[i])) structural_pos.push_back(i);
  }
  for (int r = 0; r < m; ++r) {
    if (place_[num_columns_ + r] != Place::kBasic) {
      row_index[r] = static_cast<int>(free_rows.size());
      free_rows.push_back(r);
    }
  }
  const int s = static_cast<int>(structural_pos.size());
  if (s != static_cast<int>(free_rows.size())) return false;

  // K = A[free_rows, structural basics]; invert with partial pivoting.
  std::vector<double> kmat(static_cast<size_t>(s) * s, 0.0);
  std::vector<double> kinv(static_cast<size_t>(s) * s, 0.0);
  std::vector<int> col_index(num_columns_, -1);
  for (int t = 0; t < s; ++t) col_index[head_[structural_pos[t]]] = t;
  for (int t = 0; t < s; ++t) {
    const int j = head_[structural_pos[t]];
    for (const auto& [r, a] : cols_[j]) {
      if (row_index[r] >= 0) kmat[static_cast<size_t>(row_index[r]) * s + t] = a;
    }
    kinv[static_cast<size_t>(t) * s + t] = 1.0;
  }
  for (int c = 0; c < s; ++c) {
    int best = -1;
    double best_abs = 0.0;
    for (int r = c; r < s; ++r) {
      const double v = std::abs(kmat[static_cast<size_t>(r) * s + c]);
      if (v > best_abs) {
        best_abs = v;
        best = r;
      }
    }
    if (best < 0 || best_abs < 1e-12) return false;
    if (best != c) {
      std::swap_ranges(kmat.begin() + static_cast<size_t>(c) * s,
                       kmat.begin() + static_cast<size_t>(c + 1) * s,
                       kmat.begin() + static_cast<size_t>(best) * s);
      std::swap_ranges(kinv.begin() + static_cast<size_t>(c) * s,
                       kinv.begin() + static_cast<size_t>(c + 1) * s,
                       kinv.begin() + static_cast<size_t>(best) * s);
    }
    const double inv = 1.0 / kmat[static_cast<size_t>(c) * s + c];
    for (int j = 0; j < s; ++j) {
      kmat[static_cast<size_t>(c) * s + j] *= inv;
      kinv[static_cast<size_t>(c) * s + j] *= inv;
    }
    for (int r = 0; r < s; ++r) {
      if (r == c) continue;
      const double f = kmat[static_cast<size_t>(r) * s + c];
      if (f == 0.0) continue;
      for (int j = 0; j < s; ++j) {
        kmat[static_cast<size_t>(r) * s + j] -= f * kmat[static_cast<size_t>(c) * s + j];
        kinv[static_cast<size_t>(r) * s + j] -= f * kinv[static_cast<size_t>(c) * s + j];
      }
    }
  }
  // kinv maps free-row residuals to structural basics: x_S = K^{-1} rhs_F.
  binv_.assign(static_cast<size_t>(m) * m, 0.0);
  for (int t = 0; t < s; ++t) {
    double* dst = binv_.data() + static_cast<size_t>(structural_pos[t]) * m;
    for (int u = 0; u < s; ++u) dst[free_rows[u]] = kinv[static_cast<size_t>(t) * s + u];
  }
  // Logical basics: r_row = A[row, S] x_S - rhs_row.
  for (int i = 0; i < m; ++i) {
    if (!is_logical(head_[i])) continue;
    const int row = head_[i] - num_columns_;
    double* dst = binv_.data() + static_cast<size_t>(i) * m;
    for (const auto& [j, a] : rows_[row]) {
      const int t = col_index[j];
      if (t < 0) continue;
      const double* src = kinv.data() + static_cast<size_t>(t) * s;
      for (int u = 0; u < s; ++u) dst[free_rows[u]] += a * src[u];
    }
    dst[row] = -1.0;
  }
  pivots_since_refactor_ = 0;
  values_dirty_ = true;
  return true;
}

void BoundedSimplex::Ftran(int var, std::vector<double>& alpha) const {
  const int m = num_rows_;
  alpha.assign(m, 0.0);
  if (is_logical(var)) {
    const int r = var - num_columns_;
    for (int i = 0; i < m; ++i) alpha[i] = -binv_[static_cast<size_t>(i) * m + r];
    return;
  }
  for (const auto& [r, a] : cols_[var]) {
    for (int i = 0; i < m; ++i) alpha[i] += binv_[static_cast<size_t>(i) * m + r] * a;
  }
}

void BoundedSimplex::Pivot(int leaving_pos, int entering, const std::vector<double>& alpha) {
  const int m = num_rows_;
  double* prow = binv_.data() + static_cast<size_t>(leaving_pos) * m;
  const double inv = 1.0 / alpha[leaving_pos];
  for (int j = 0; j < m; ++j) prow[j] *= inv;
  for (int i = 0; i < m; ++i) {
    if (i == leaving_pos) continue;
    const double f = alpha[i];
    if (std::abs(f) < kDropTol) continue;
    double* row = binv_.data() + static_cast<size_t>(i) * m;
    for (int j = 0; j < m; ++j) row[j] -= f * prow[j];
  }
  const int leaving = head_[leaving_pos];
  where_[leaving] = -1;
  head_[leaving_pos] = entering;
  where_[entering] = leaving_pos;
  place_[entering] = Place::kBasic;
  ++pivots_since_refactor_;
}

LpStatus BoundedSimplex::Solve(std::int64_t max_iterations) {
  used_bland_ = false;
  const int m = num_rows_;
  if (values_dirty_) RecomputeBasicValues();

  double cost_scale = 0.0;
  for (double c : cost_) cost_scale = std::max(cost_scale, std::abs(c));
  if (cost_scale == 0.0) cost_scale = 1.0;

  std::vector<double> basic_cost(m);
  std::vector<double> y(m);
  std::vector<double> alpha;
  bool bland = false;
  int degenerate_run = 0;
  std::int64_t iter = 0;
  bool retried_refactor = false;

  while (true) {
    if (iter++ >= max_iterations) return LpStatus::kIterationLimit;
    ++total_iterations_;
    if (pivots_since_refactor_ >= kRefactorEvery) {
      if (!Refactor()) throw Error("simplex basis became singular");
      RecomputeBasicValues();
    }

    // Composite phase 1: minimize the sum of bound violations while any
    // basic variable is out of range, then maximize the true objective.
    bool phase1 = false;
    for (int i = 0; i < m; ++i) {
      const int var = head_[i];
      if (x_[var] < lower_[var] - kPrimalTol || x_[var] > upper_[var] + kPrimalTol) {
        phase1 = true;
        break;
      }
    }
    // Costs are for minimization.
    for (int i = 0; i < m; ++i) {
      const int var = head_[i];
      if (phase1) {
        if (x_[var] < lower_[var] - kPrimalTol) {
          basic_cost[i] = -1.0;
        } else if (x_[var] > upper_[var] + kPrimalTol) {
          basic_cost[i] = 1.0;
        } else {
          basic_cost[i] = 0.0;
        }
      } else {
        basic_cost[i] = is_logical(var) ? 0.0 : -cost_[var] / cost_scale;
      }
    }
    std::fill(y.begin(), y.end(), 0.0);
    for (int i = 0; i < m; ++i) {
      if (basic_cost[i] == 0.0) continue;
      const double* row = binv_.data() + static_cast<size_t>(i) * m;
      for (int r = 0; r < m; ++r) y[r] += basic_cost[i] * row[r];
    }

    // Pricing.
    int entering = -1;
    double best = 0.0;
    int direction = 0;
    const int total = total_vars();
    for (int j = 0; j < total; ++j) {
      const Place pl = place_[j];
      if (pl == Place::kBasic) continue;
      if (lower_[j] == upper_[j]) continue;
      double d;
      if (is_logical(j)) {
        d = y[j - num_columns_];
      } else {
        d = phase1 ? 0.0 : -cost_[j] / cost_scale;
        for (const auto& [r, a] : cols_[j]) d -= y[r] * a;
      }
      int dir = 0;
      if (pl == Place::kAtLower) {
        if (d < -kDualTol) dir = 1;
      } else if (pl == Place::kAtUpper) {
        if (d > kDualTol) dir = -1;
      } else if (std::abs(d) > kDualTol) {
        dir = d < 0 ? 1 : -1;
      }
      if (dir == 0) continue;
      if (bland) {
        entering = j;
        direction = dir;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        entering = j;
        direction = dir;
      }
    }
    if (entering < 0) {
      if (phase1) {
        // Guard against a stale factorization before declaring infeasible.
        if (!retried_refactor && pivots_since_refactor_ > 0) {
          retried_refactor = true;
          if (!Refactor()) throw Error("simplex basis became singular");
          RecomputeBasicValues();
          continue;
        }
        return LpStatus::kInfeasible;
      }
      return LpStatus::kOptimal;
    }
    retried_refactor = false;

    Ftran(entering, alpha);

    // Ratio test. Basic i moves at rate delta_i = -direction * alpha_i.
    const double range = upper_[entering] - lower_[entering];
    auto limit_of = [&](int i, double delta, double tol, double* bound) -> double {
      const int var = head_[i];
      const double v = x_[var];
      if (delta < 0) {
        double target;
        if (phase1 && v > upper_[var] + kPrimalTol) {
          target = upper_[var];
        } else if (v >= lower_[var] - kPrimalTol) {
          target = lower_[var];
        } else {
          return kInfinity;
        }
        if (!std::isfinite(target)) return kInfinity;
        *bound = target;
        return (v - target + tol) / -delta;
      }
      double target;
      if (phase1 && v < lower_[var] - kPrimalTol) {
        target = lower_[var];
      } else if (v <= upper_[var] + kPrimalTol) {
        target = upper_[var];
      } else {
        return kInfinity;
      }
      if (!std::isfinite(target)) return kInfinity;
      *bound = target;
      return (target - v + tol) / delta;
    };

    int leaving_pos = -1;
    double theta = kInfinity;
    double leaving_bound = 0.0;
    if (bland) {
      int leaving_var = -1;
      for (int i = 0; i < m; ++i) {
        const double delta = -direction * alpha[i];
        if (std::abs(alpha[i]) < kPivotTol) continue;
        double bound = 0.0;
        double t = limit_of(i, delta, 0.0, &bound);
        if (!std::isfinite(t)) continue;
        t = std::max(t, 0.0);
        if (t < theta - 1e-12 || (t <= theta + 1e-12 && head_[i] < leaving_var)) {
          theta = t;
          leaving_pos = i;
          leaving_var = head_[i];
          leaving_bound = bound;
        }
      }
    } else {
      double theta_max = kInfinity;
      for (int i = 0; i < m; ++i) {
        if (std::abs(alpha[i]) < kPivotTol) continue;
        const double delta = -direction * alpha[i];
        double bound = 0.0;
        theta_max = std::min(theta_max, limit_of(i, delta, kPrimalTol, &bound));
      }
      double best_pivot = 0.0;
      for (int i = 0; i < m; ++i) {
        if (std::abs(alpha[i]) < kPivotTol) continue;
        const double delta = -direction * alpha[i];
        double bound = 0.0;
        const double t = limit_of(i, delta, 0.0, &bound);
        if (t <= theta_max && std::abs(alpha[i]) > best_pivot) {
          best_pivot = std::abs(alpha[i]);
          leaving_pos = i;
          theta = std::max(t, 0.0);
          leaving_bound = bound;
        }
      }
    }

    if (range <= theta) {
      // Bound flip; no basis change.
      if (!std::isfinite(range)) throw Error("unbounded linear program");
      const double step = direction * range;
      x_[entering] = direction > 0 ? upper_[entering] : lower_[entering];
      place_[entering] = direction > 0 ? Place::kAtUpper : Place::kAtLower;
      for (int i = 0; i < m; ++i) x_[head_[i]] -= alpha[i] * step;
      degenerate_run = 0;
      continue;
    }
    if (leaving_pos < 0) throw Error("unbounded linear program");

    const double step = direction * theta;
    for (int i = 0; i < m; ++i) x_[head_[i]] -= alpha[i] * step;
    x_[entering] += step;
    const int leaving = head_[leaving_pos];
    x_[leaving] = leaving_bound;
    if (lower_[leaving] == upper_[leaving]) {
      place_[leaving] = Place::kAtLower;
    } else {
      place_[leaving] = leaving_bound == lower_[leaving] ? Place::kAtLower : Place::kAtUpper;
    }
    Pivot(leaving_pos, entering, alpha);

    if (theta <= 1e-12) {
      if (++degenerate_run > kDegenerateLimit && !bland) {
        bland = true;
        used_bland_ = true;
      }
    } else {
      degenerate_run = 0;
    }
  }
}

double BoundedSimplex::ObjectiveValue() const {
  double v = 0.0;
  for (int j = 0; j < num_columns_; ++j) v += cost_[j] * x_[j];
  return v;
}

}  // namespace igfair
