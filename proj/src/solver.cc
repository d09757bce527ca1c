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

#include "igfair/solver.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "igfair/prefix.h"
#include "igfair/simplex.h"

namespace igfair {
namespace {

using Clock = std::chrono::steady_clock;

constexpr double kLazyTol = 1e-7;
constexpr int kLogEvery = 1000;
constexpr std::int64_t kBestBoundEvery = 10000;

// ---------------------------------------------------------------------------
// Program analysis.

struct RatioGroup {
  ValueId value = -1;
  // Members in descending score order (the dataset's group order).
  std::vector<int> members;
  // If member t is the lowest accepted one, members [0, force_one[t]) must be
  // accepted too; if member t is the highest rejected one, members
  // [force_zero[t], end) must be rejected.
  std::vector<int> force_one;
  std::vector<int> force_zero;
};

// Aggregated rows of one group, in the dataset's group order. Selecting
// members[t] needs selected members [0, end) to carry at least `need` score
// mass, which a budget of k items may not allow.
struct AggGroup {
  struct Check {
    int t = 0;
    int end = 0;
    double need = 0.0;
  };
  ValueId value = -1;
  std::vector<int> members;
  std::vector<double> scores;
  std::vector<Check> checks;
};

// A linear row over selection variables only, used for propagation.
struct SelectRow {
  std::vector<std::pair<int, double>> terms;
  double lo = -kInfinity;
  double hi = kInfinity;
};

struct Structure {
  int n = 0;
  int k = 0;
  DiversityConstraints constraints;
  std::vector<int> kept_diversity;  // rows where a group's bound increases
  std::vector<int> breakpoints;     // segment ends, ascending, last == k
  std::vector<RatioGroup> ratio_groups;
  std::vector<AggGroup> agg_groups;
  std::vector<SelectRow> select_rows;
  // Items with identical labels, in group order, for cells of two or more.
  // Some optimal selection takes a score prefix of every kept cell. Under
  // aggregated rows an upward swap inside a cell can lower a measure when
  // selected members tie below it, so such cells are dropped.
  std::vector<std::vector<int>> cells;
  // Label data for the aggregated propagation.
  std::vector<std::vector<ValueId>> labels;            // per item
  std::vector<std::vector<ValueId>> attribute_values;  // per attribute
  std::vector<int> value_attribute;
  std::vector<int> totals;  // bound at k per value
};

[[noreturn]] void Malformed(const std::string& what) {
  throw Error("malformed program: " + what);
}

Structure Analyze(const Dataset& dataset, const IntegerProgram& program) {
  Structure s;
  s.n = program.num_items;
  s.k = program.k;
  const int n = s.n;
  const int k = s.k;
  const int num_values = dataset.schema().num_values();
  if (n != dataset.size()) Malformed("item count differs from the dataset");
  if (k < 0 || k > n) Malformed("k outside [0, n]");
  const int num_vars = static_cast<int>(program.vars.size());
  if (num_vars < n + n * k) Malformed("too few variables");
  for (int i = 0; i < n; ++i) {
    const Variable& x = program.vars[program.select_var(i)];
    if (x.role != VarRole::kSelect || x.item != i || x.kind != VarKind::kBinary) {
      Malformed("selection variable layout");
    }
    for (int p = 1; p <= k; ++p) {
      const Variable& y = program.vars[program.place_var(i, p)];
      if (y.role != VarRole::kPlace || y.item != i || y.position != p ||
          y.kind != VarKind::kBinary) {
        Malformed("placement variable layout");
      }
    }
  }
  for (int j = n + n * k; j < num_vars; ++j) {
    const Variable& v = program.vars[j];
    if (v.kind != VarKind::kContinuous ||
        (v.role != VarRole::kGroupMin && v.role != VarRole::kGroupMax)) {
      Malformed("unexpected variable '" + v.name + "'");
    }
    if (v.lower > v.upper) Malformed("variable bounds cross for '" + v.name + "'");
  }
  std::vector<bool> seen(n, false);
  for (const Term& t : program.objective) {
    if (t.var < 0 || t.var >= n) Malformed("objective term outside the selection variables");
    if (seen[t.var]) Malformed("repeated objective term");
    seen[t.var] = true;
    if (t.coef != Rational(dataset.scaled_score(t.var))) {
      Malformed("objective coefficient differs from the item score");
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!seen[i]) Malformed("objective misses an item");
  }

  std::vector<BoundEntry> entries;
  std::set<std::pair<ValueId, int>> diversity_keys;
  std::map<ValueId, AggGroup> agg_groups;
  int linkage = 0, capacity = 0, cardinality = 0;
  for (int r = 0; r < static_cast<int>(program.rows.size()); ++r) {
    const Row& row = program.rows[r];
    for (const Term& t : row.terms) {
      if (t.var < 0 || t.var >= num_vars) Malformed("row '" + row.name + "' names an unknown variable");
    }
    switch (row.kind) {
      case RowKind::kLinkage: ++linkage; break;
      case RowKind::kPositionCapacity: ++capacity; break;
      case RowKind::kCardinality:
        ++cardinality;
        if (row.rhs != k || row.sense != RowSense::kEqual) Malformed("cardinality row");
        break;
      case RowKind::kDiversity: {
        if (row.group < 0 || row.group >= num_values || row.position < 1 || row.position > k ||
            row.sense != RowSense::kGreaterEqual || denominator(row.rhs) != 1 || row.rhs < 0) {
          Malformed("diversity row '" + row.name + "'");
        }
        const size_t expected = dataset.group(row.group).size() * static_cast<size_t>(row.position);
        if (row.terms.size() != expected) Malformed("diversity row '" + row.name + "' size");
        for (const Term& t : row.terms) {
          const Variable& y = program.vars[t.var];
          if (y.role != VarRole::kPlace || y.position > row.position || t.coef != 1 ||
              !dataset.HasLabel(y.item, row.group)) {
            Malformed("diversity row '" + row.name + "' terms");
          }
        }
        if (!diversity_keys.insert({row.group, row.position}).second) {
          Malformed("repeated diversity row");
        }
        entries.push_back({row.group, row.position, static_cast<int>(numerator(row.rhs))});
        break;
      }
      case RowKind::kAggregated: {
        SelectRow sr;
        for (const Term& t : row.terms) {
          if (t.var >= n) Malformed("aggregated row over non-selection variables");
          sr.terms.emplace_back(t.var, ToDouble(t.coef));
        }
        const double rhs = ToDouble(row.rhs);
        if (row.sense != RowSense::kLessEqual) sr.lo = rhs;
        if (row.sense != RowSense::kGreaterEqual) sr.hi = rhs;
        s.select_rows.push_back(std::move(sr));
        if (row.group < 0 || row.group >= num_values || row.item < 0 || row.item >= n ||
            row.sense != RowSense::kGreaterEqual || row.rhs != 0) {
          break;
        }
        const auto& group = dataset.group(row.group);
        const auto pos = std::find(group.begin(), group.end(), row.item);
        if (pos == group.end()) break;
        AggGroup& g = agg_groups[row.group];
        if (g.members.empty()) {
          g.value = row.group;
          g.members.assign(group.begin(), group.end());
          for (int i : group) g.scores.push_back(static_cast<double>(dataset.scaled_score(i)));
        }
        AggGroup::Check check;
        check.t = static_cast<int>(pos - group.begin());
        const std::int64_t s_i = dataset.scaled_score(row.item);
        while (check.end < static_cast<int>(group.size()) &&
               dataset.scaled_score(group[check.end]) >= s_i) {
          ++check.end;
        }
        Rational self(0);
        for (const Term& t : row.terms) {
          if (t.var == row.item) self = t.coef;
        }
        check.need = ToDouble(Rational(s_i) - self);
        g.checks.push_back(check);
        break;
      }
      case RowKind::kRatioMinAccepted:
      case RowKind::kRatioMaxRejected:
        for (const Term& t : row.terms) {
          if (t.var >= n && t.var < n + n * k) Malformed("gadget row over placement variables");
        }
        break;
      case RowKind::kRatioLink: {
        if (row.group < 0 || row.group >= num_values) Malformed("link row group");
        Rational q = -1;
        for (const Term& t : row.terms) {
          if (t.var < n + n * k) Malformed("link row over binary variables");
          if (program.vars[t.var].role == VarRole::kGroupMax) q = -t.coef;
        }
        if (q < 0 || q > 1) Malformed("link row coefficient");
        if (q == 0) break;
        RatioGroup g;
        g.value = row.group;
        g.members.assign(dataset.group(row.group).begin(), dataset.group(row.group).end());
        const int size = static_cast<int>(g.members.size());
        g.force_one.assign(size, 0);
        g.force_zero.assign(size, size);
        for (int t = 0; t < size; ++t) {
          const Rational st(dataset.scaled_score(g.members[t]));
          int c = 0;
          while (c < size && q * Rational(dataset.scaled_score(g.members[c])) > st) ++c;
          g.force_one[t] = c;
          int z = size;
          while (z > 0 && Rational(dataset.scaled_score(g.members[z - 1])) < q * st) --z;
          g.force_zero[t] = z;
        }
        s.ratio_groups.push_back(std::move(g));
        break;
      }
    }
  }
  if (linkage != n || capacity != k || cardinality != 1) Malformed("skeleton row counts");
  for (auto& [v, g] : agg_groups) s.agg_groups.push_back(std::move(g));
  if (!s.agg_groups.empty()) {
    const AttributeSchema& schema = dataset.schema();
    s.attribute_values.resize(schema.num_attributes());
    for (ValueId v = 0; v < num_values; ++v) {
      s.value_attribute.push_back(schema.attribute_of(v));
      s.attribute_values[schema.attribute_of(v)].push_back(v);
      s.totals.push_back(s.constraints.bound(v, k));
    }
    for (int i = 0; i < n; ++i) {
      std::vector<ValueId> labels;
      for (ValueId v : dataset.item(i).labels) {
        if (v >= 0) labels.push_back(v);
      }
      s.labels.push_back(std::move(labels));
    }
  }
  s.constraints = DiversityConstraints::Create(k, num_values, entries);

  // Keep only rows where the group's bound rises; the others are implied.
  std::set<int> ends;
  for (int r = 0; r < static_cast<int>(program.rows.size()); ++r) {
    const Row& row = program.rows[r];
    if (row.kind != RowKind::kDiversity) continue;
    if (row.rhs > s.constraints.bound(row.group, row.position - 1)) {
      s.kept_diversity.push_back(r);
      ends.insert(row.position);
    }
  }
  if (k > 0) ends.insert(k);
  s.breakpoints.assign(ends.begin(), ends.end());

  {
    // Lowest score shared by two members of an aggregated group.
    std::map<ValueId, std::int64_t> lowest_tie;
    for (const AggGroup& g : s.agg_groups) {
      const auto members = dataset.group(g.value);
      for (size_t t = 1; t < members.size(); ++t) {
        const std::int64_t score = dataset.scaled_score(members[t]);
        if (score == dataset.scaled_score(members[t - 1])) lowest_tie[g.value] = score;
      }
    }
    std::map<std::vector<ValueId>, std::vector<int>> by_labels;
    for (int i = 0; i < n; ++i) by_labels[dataset.item(i).labels].push_back(i);
    for (auto& [labels, cell] : by_labels) {
      if (cell.size() < 2) continue;
      std::sort(cell.begin(), cell.end(), [&](int a, int b) {
        if (dataset.scaled_score(a) != dataset.scaled_score(b)) {
          return dataset.scaled_score(a) > dataset.scaled_score(b);
        }
        return dataset.id_rank(a) < dataset.id_rank(b);
      });
      const std::int64_t top = dataset.scaled_score(cell.front());
      bool keep = true;
      for (ValueId v : labels) {
        const auto it = lowest_tie.find(v);
        if (it != lowest_tie.end() && it->second < top) keep = false;
      }
      if (keep) s.cells.push_back(std::move(cell));
    }
  }

  // Selection-level consequences used for propagation.
  {
    SelectRow card;
    for (int i = 0; i < n; ++i) card.terms.emplace_back(i, 1.0);
    card.lo = card.hi = k;
    s.select_rows.push_back(std::move(card));
  }
  for (ValueId v = 0; v < num_values; ++v) {
    const int total = s.constraints.bound(v, k);
    if (total == 0) continue;
    SelectRow sr;
    for (int i : dataset.group(v)) sr.terms.emplace_back(i, 1.0);
    sr.lo = total;
    s.select_rows.push_back(std::move(sr));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Propagation on selection variables. Values: -1 free, 0, 1.

class Propagator {
 public:
  Propagator(const Structure& s, bool cells) : s_(s), cells_(cells) {}

  bool Run(std::vector<std::int8_t>& val) const {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const SelectRow& row : s_.select_rows) {
        if (!RunRow(row, val, changed)) return false;
      }
      for (const RatioGroup& g : s_.ratio_groups) {
        if (!RunRatio(g, val, changed)) return false;
      }
      for (const AggGroup& g : s_.agg_groups) {
        if (!RunAgg(g, val, changed)) return false;
      }
      if (cells_) {
        for (const std::vector<int>& cell : s_.cells) {
          if (!RunCell(cell, val, changed)) return false;
        }
      }
    }
    return true;
  }

 private:
  static bool Fix(std::vector<std::int8_t>& val, int i, std::int8_t value, bool& changed) {
    if (val[i] == value) return true;
    if (val[i] >= 0) return false;
    val[i] = value;
    changed = true;
    return true;
  }

  static bool RunRow(const SelectRow& row, std::vector<std::int8_t>& val, bool& changed) {
    double min_act = 0.0, max_act = 0.0, scale = 1.0;
    for (const auto& [i, c] : row.terms) {
      scale += std::abs(c);
      if (val[i] == 1) {
        min_act += c;
        max_act += c;
      } else if (val[i] < 0) {
        (c > 0 ? max_act : min_act) += c;
      }
    }
    // Conservative: only act on violations clearly beyond rounding noise.
    const double tol = 1e-9 * (scale + std::abs(row.lo == -kInfinity ? 0 : row.lo) +
                               std::abs(row.hi == kInfinity ? 0 : row.hi));
    if (max_act < row.lo - tol || min_act > row.hi + tol) return false;
    for (const auto& [i, c] : row.terms) {
      if (val[i] >= 0) continue;
      if (c > 0) {
        if (max_act - c < row.lo - tol && !Fix(val, i, 1, changed)) return false;
        if (min_act + c > row.hi + tol && !Fix(val, i, 0, changed)) return false;
      } else if (c < 0) {
        if (max_act + c < row.lo - tol && !Fix(val, i, 0, changed)) return false;
        if (min_act - c > row.hi + tol && !Fix(val, i, 1, changed)) return false;
      }
    }
    return true;
  }

  static bool RunRatio(const RatioGroup& g, std::vector<std::int8_t>& val, bool& changed) {
    const int size = static_cast<int>(g.members.size());
    int lowest_one = -1;
    int highest_zero = -1;
    for (int t = 0; t < size; ++t) {
      const std::int8_t x = val[g.members[t]];
      if (x == 1) lowest_one = t;
      if (x == 0 && highest_zero < 0) highest_zero = t;
    }
    if (lowest_one >= 0) {
      for (int t = 0; t < g.force_one[lowest_one]; ++t) {
        if (!Fix(val, g.members[t], 1, changed)) return false;
      }
    }
    if (highest_zero >= 0) {
      for (int t = g.force_zero[highest_zero]; t < size; ++t) {
        if (!Fix(val, g.members[t], 0, changed)) return false;
      }
    }
    return true;
  }

  // The best mass a member can gather is every selected member above it
  // plus the highest free ones that fit in the slots left over once the
  // remaining quotas that those members cannot serve are paid for.
  bool RunAgg(const AggGroup& g, std::vector<std::int8_t>& val, bool& changed) const {
    const int num_values = static_cast<int>(s_.totals.size());
    const int own_attribute = s_.value_attribute[g.value];
    std::vector<int> demand(s_.totals);
    int ones = 0;
    for (int i = 0; i < s_.n; ++i) {
      if (val[i] != 1) continue;
      ++ones;
      for (ValueId w : s_.labels[i]) --demand[w];
    }
    int same_attribute = 0;
    for (ValueId w : s_.attribute_values[own_attribute]) {
      if (w != g.value) same_attribute += std::max(0, demand[w]);
    }

    const int size = static_cast<int>(g.members.size());
    std::vector<double> ones_mass(size + 1, 0.0);
    std::vector<double> free_mass(1, 0.0);  // over free members in order
    std::vector<int> free_before(size + 1, 0);
    std::vector<int> free_rank(size, -1);
    std::vector<int> free_count(static_cast<size_t>(num_values) * (size + 1), 0);
    for (int t = 0; t < size; ++t) {
      const int i = g.members[t];
      ones_mass[t + 1] = ones_mass[t] + (val[i] == 1 ? g.scores[t] : 0.0);
      free_before[t + 1] = free_before[t];
      for (int w = 0; w < num_values; ++w) {
        free_count[w * (size + 1) + t + 1] = free_count[w * (size + 1) + t];
      }
      if (val[i] < 0) {
        free_rank[t] = free_before[t];
        ++free_before[t + 1];
        free_mass.push_back(free_mass.back() + g.scores[t]);
        for (ValueId w : s_.labels[i]) ++free_count[w * (size + 1) + t + 1];
      }
    }

    for (const AggGroup::Check& c : g.checks) {
      const int i = g.members[c.t];
      if (val[i] == 0) continue;
      const bool free = val[i] < 0;
      int outside = same_attribute;
      for (int b = 0; b < static_cast<int>(s_.attribute_values.size()); ++b) {
        if (b == own_attribute) continue;
        int unmet = 0;
        for (ValueId w : s_.attribute_values[b]) {
          unmet += std::max(0, demand[w] - free_count[w * (size + 1) + c.end]);
        }
        outside = std::max(outside, unmet);
      }
      const int slots = s_.k - ones - (free ? 1 : 0) - outside;
      double mass = ones_mass[c.end];
      if (slots >= 0) {
        const int available = free_before[c.end] - (free ? 1 : 0);
        const int take = std::min(slots, available);
        if (free) {
          mass += g.scores[c.t];
          mass += free_rank[c.t] < take ? free_mass[take + 1] - g.scores[c.t] : free_mass[take];
        } else {
          mass += free_mass[take];
        }
      }
      if ((slots < 0 || mass < c.need - 1e-9 * (1.0 + c.need)) && !Fix(val, i, 0, changed)) {
        return false;
      }
    }
    return true;
  }

  static bool RunCell(const std::vector<int>& cell, std::vector<std::int8_t>& val, bool& changed) {
    const int size = static_cast<int>(cell.size());
    int last_one = -1;
    int first_zero = size;
    for (int t = 0; t < size; ++t) {
      if (val[cell[t]] == 1) last_one = t;
      if (val[cell[t]] == 0 && first_zero == size) first_zero = t;
    }
    if (last_one > first_zero) return false;
    for (int t = 0; t < last_one; ++t) {
      if (!Fix(val, cell[t], 1, changed)) return false;
    }
    for (int t = first_zero + 1; t < size; ++t) {
      if (!Fix(val, cell[t], 0, changed)) return false;
    }
    return true;
  }

  const Structure& s_;
  const bool cells_;
};

// ---------------------------------------------------------------------------
// LP relaxation. Placement variables inside a segment between consecutive
// breakpoints are merged into one column per item, which leaves the
// relaxation value unchanged because no kept row separates them.

class LpModel {
 public:
  LpModel(const Dataset& dataset, const IntegerProgram& program, const Structure& s,
          bool compress, bool lazy, bool cells)
      : program_(program), lp_(0) {
    const int n = s.n;
    const int k = s.k;
    if (compress) {
      segments_ = s.breakpoints;
    } else {
      for (int p = 1; p <= k; ++p) segments_.push_back(p);
    }
    const int num_segments = static_cast<int>(segments_.size());
    use_y_ = num_segments > 1;
    const int num_vars = static_cast<int>(program.vars.size());
    col_of_var_.assign(num_vars, -1);
    int cols = n;
    for (int i = 0; i < n; ++i) col_of_var_[i] = i;
    if (use_y_) {
      y_base_ = cols;
      cols += n * num_segments;
    }
    for (int j = n + n * k; j < num_vars; ++j) col_of_var_[j] = cols++;
    for (int i = 0; i < n; ++i) {
      for (int p = 1; p <= k; ++p) {
        const int seg = SegmentOf(p);
        const int len = segments_[seg] - (seg > 0 ? segments_[seg - 1] : 0);
        if (len != 1) continue;
        col_of_var_[program.place_var(i, p)] = use_y_ ? y_col(i, seg) : i;
      }
    }

    lp_ = BoundedSimplex(cols);
    col_scale_.assign(cols, 1.0);
    for (int i = 0; i < n; ++i) {
      lp_.SetColumnBounds(i, 0.0, 1.0);
      lp_.SetObjective(i, static_cast<double>(dataset.scaled_score(i)));
    }
    if (use_y_) {
      for (int c = y_base_; c < y_base_ + n * num_segments; ++c) lp_.SetColumnBounds(c, 0.0, 1.0);
    }
    for (int j = n + n * k; j < num_vars; ++j) {
      const Variable& v = program.vars[j];
      const int c = col_of_var_[j];
      const double lo = ToDouble(v.lower);
      const double hi = ToDouble(v.upper);
      col_scale_[c] = std::max({1.0, std::abs(lo), std::abs(hi)});
      lp_.SetColumnBounds(c, lo / col_scale_[c], hi / col_scale_[c]);
    }

    std::vector<std::pair<int, double>> terms;
    if (use_y_) {
      for (int i = 0; i < n; ++i) {
        terms.clear();
        terms.emplace_back(i, 1.0);
        for (int seg = 0; seg < num_segments; ++seg) terms.emplace_back(y_col(i, seg), -1.0);
        lp_.AddRow(terms, 0.0, 0.0);
      }
      for (int seg = 0; seg < num_segments; ++seg) {
        terms.clear();
        for (int i = 0; i < n; ++i) terms.emplace_back(y_col(i, seg), 1.0);
        const int len = segments_[seg] - (seg > 0 ? segments_[seg - 1] : 0);
        lp_.AddRow(terms, -kInfinity, len);
      }
    }
    {
      terms.clear();
      for (int i = 0; i < n; ++i) terms.emplace_back(i, 1.0);
      lp_.AddRow(terms, k, k);
    }
    for (int r : s.kept_diversity) {
      const Row& row = program.rows[r];
      terms.clear();
      const int last_seg = SegmentOf(row.position);
      for (int i : dataset.group(row.group)) {
        if (use_y_) {
          for (int seg = 0; seg <= last_seg; ++seg) terms.emplace_back(y_col(i, seg), 1.0);
        } else {
          terms.emplace_back(i, 1.0);
        }
      }
      lp_.AddRow(terms, ToDouble(row.rhs), kInfinity);
    }
    for (int r = 0; r < static_cast<int>(program.rows.size()); ++r) {
      const Row& row = program.rows[r];
      const bool gadget = row.kind == RowKind::kRatioMinAccepted ||
                          row.kind == RowKind::kRatioMaxRejected ||
                          row.kind == RowKind::kAggregated;
      if (!gadget && row.kind != RowKind::kRatioLink) continue;
      LazyRow lr = Convert(row);
      if (lazy && gadget) {
        lazy_.push_back(std::move(lr));
      } else {
        lp_.AddRow(lr.terms, lr.lo, lr.hi);
      }
    }
    if (cells) {
      for (const std::vector<int>& cell : s.cells) {
        for (size_t t = 1; t < cell.size(); ++t) {
          LazyRow lr;
          lr.terms = {{cell[t], 1.0}, {cell[t - 1], -1.0}};
          lr.hi = 0.0;
          lazy_.push_back(std::move(lr));
        }
      }
    }
  }

  BoundedSimplex& lp() { return lp_; }
  const BoundedSimplex& lp() const { return lp_; }

  // Adds every lazy row the current point violates; returns how many.
  int AddViolated() {
    int added = 0;
    for (LazyRow& lr : lazy_) {
      if (lr.added) continue;
      double act = 0.0;
      for (const auto& [c, a] : lr.terms) act += a * lp_.Value(c);
      if (act < lr.lo - kLazyTol || act > lr.hi + kLazyTol) {
        lp_.AddRow(lr.terms, lr.lo, lr.hi);
        lr.added = true;
        ++added;
      }
    }
    return added;
  }

  // Value of a program variable at the current LP point.
  double ProgramValue(int var) const {
    const int c = col_of_var_[var];
    if (c >= 0) return lp_.Value(c) * col_scale_[c];
    // Merged placement column: spread evenly over the segment.
    const Variable& y = program_.vars[var];
    const int seg = SegmentOf(y.position);
    const int len = segments_[seg] - (seg > 0 ? segments_[seg - 1] : 0);
    const double total = use_y_ ? lp_.Value(y_col(y.item, seg)) : lp_.Value(y.item);
    return total / len;
  }

  int ColumnOf(int var) const { return col_of_var_[var]; }

 private:
  struct LazyRow {
    std::vector<std::pair<int, double>> terms;
    double lo = -kInfinity;
    double hi = kInfinity;
    bool added = false;
  };

  int SegmentOf(int p) const {
    return static_cast<int>(std::lower_bound(segments_.begin(), segments_.end(), p) -
                            segments_.begin());
  }
  int y_col(int i, int seg) const {
    return y_base_ + i * static_cast<int>(segments_.size()) + seg;
  }

  LazyRow Convert(const Row& row) const {
    LazyRow lr;
    double scale = 0.0;
    for (const Term& t : row.terms) {
      const int c = col_of_var_[t.var];
      const double a = ToDouble(t.coef) * col_scale_[c];
      if (a == 0.0) continue;
      lr.terms.emplace_back(c, a);
      scale = std::max(scale, std::abs(a));
    }
    if (scale == 0.0) scale = 1.0;
    for (auto& term : lr.terms) term.second /= scale;
    const double rhs = ToDouble(row.rhs) / scale;
    if (row.sense != RowSense::kLessEqual) lr.lo = rhs;
    if (row.sense != RowSense::kGreaterEqual) lr.hi = rhs;
    return lr;
  }

  const IntegerProgram& program_;
  std::vector<int> segments_;
  bool use_y_ = false;
  int y_base_ = 0;
  std::vector<int> col_of_var_;
  std::vector<double> col_scale_;
  BoundedSimplex lp_;
  std::vector<LazyRow> lazy_;
};

// ---------------------------------------------------------------------------
// Exact verification of a candidate selection.

std::optional<std::vector<int>> VerifySelection(const Dataset& dataset,
                                                const IntegerProgram& program,
                                                const Structure& s,
                                                const std::vector<int>& selection) {
  std::optional<std::vector<int>> ordering =
      CheckPrefixFeasible(dataset, selection, s.constraints);
  if (!ordering) return std::nullopt;
  const int n = s.n;
  std::vector<Rational> values(program.vars.size(), Rational(0));
  for (int i : selection) values[program.select_var(i)] = 1;
  for (int p = 1; p <= s.k; ++p) values[program.place_var((*ordering)[p - 1], p)] = 1;
  const Outcome outcome = Outcome::Create(dataset, *ordering);
  for (int j = n + n * s.k; j < static_cast<int>(program.vars.size()); ++j) {
    const Variable& v = program.vars[j];
    std::optional<std::int64_t> side = v.role == VarRole::kGroupMin
                                           ? outcome.lowest_accepted(v.group)
                                           : outcome.highest_rejected(v.group);
    Rational value = side ? Rational(*side) : (v.role == VarRole::kGroupMin ? v.upper : v.lower);
    value = std::clamp(value, v.lower, v.upper);
    values[j] = value;
  }
  for (const Row& row : program.rows) {
    if (!RowSatisfied(row, values)) return std::nullopt;
  }
  return ordering;
}

// ---------------------------------------------------------------------------
// Branch and bound.

struct Node {
  std::vector<std::pair<int, std::int8_t>> fixings;
  double bound = kInfinity;
};

struct Incumbent {
  std::int64_t utility = 0;
  std::vector<int> selection;  // ascending id order
  std::vector<int> ordering;
};

class Search {
 public:
  Search(const Dataset& dataset, const IntegerProgram& program, const Structure& s,
         const SolverOptions& options)
      : dataset_(dataset), program_(program), s_(s), options_(options), start_(Clock::now()) {}

  Solution Run() {
    stack_.push_back(Node{});
    const int workers = std::max(1, options_.workers);
    if (workers == 1) {
      Work();
    } else {
      std::vector<std::thread> threads;
      for (int w = 0; w < workers; ++w) threads.emplace_back([this] { Work(); });
      for (std::thread& t : threads) t.join();
    }
    if (error_) std::rethrow_exception(error_);

    Solution sol;
    sol.nodes = nodes_;
    sol.lp_iterations = lp_iterations_;
    sol.wall_seconds = std::chrono::duration<double>(Clock::now() - start_).count();
    if (incumbent_) {
      sol.outcome = Outcome::Create(dataset_, incumbent_->ordering);
      sol.objective = sol.outcome->utility();
    }
    if (limit_hit_) {
      sol.status = SolveStatus::kLimitReached;
    } else if (found_first_) {
      sol.status = SolveStatus::kFeasible;
    } else {
      sol.status = incumbent_ ? SolveStatus::kOptimal : SolveStatus::kInfeasible;
    }
    return sol;
  }

 private:
  void Work() {
    std::optional<LpModel> model;
    try {
      model.emplace(dataset_, program_, s_, /*compress=*/true, /*lazy=*/true, /*cells=*/true);
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu_);
      if (!error_) error_ = std::current_exception();
      stop_ = true;
      cv_.notify_all();
      return;
    }
    Propagator propagator(s_, /*cells=*/true);
    std::vector<Node> children;
    while (true) {
      Node node;
      {
        std::unique_lock<std::mutex> lock(mu_);
        cv_.wait(lock, [&] { return stop_ || !stack_.empty() || active_ == 0; });
        if (stop_ || stack_.empty()) {
          cv_.notify_all();
          return;
        }
        if (LimitReachedLocked()) {
          limit_hit_ = true;
          stop_ = true;
          cv_.notify_all();
          return;
        }
        if (nodes_ > 0 && nodes_ % kBestBoundEvery == 0) PromoteBestBoundLocked();
        node = std::move(stack_.back());
        stack_.pop_back();
        ++nodes_;
        ++active_;
        if (options_.node_log && nodes_ % kLogEvery == 0) LogLocked(node);
      }
      children.clear();
      std::int64_t iterations = 0;
      try {
        const std::int64_t before = model->lp().iterations();
        Process(*model, propagator, node, children);
        iterations = model->lp().iterations() - before;
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu_);
        if (!error_) error_ = std::current_exception();
        stop_ = true;
        --active_;
        cv_.notify_all();
        return;
      }
      {
        std::lock_guard<std::mutex> lock(mu_);
        lp_iterations_ += iterations;
        for (Node& child : children) stack_.push_back(std::move(child));
        --active_;
      }
      cv_.notify_all();
    }
  }

  bool LimitReachedLocked() const {
    if (options_.node_limit && nodes_ >= *options_.node_limit) return true;
    if (options_.time_limit_seconds) {
      const double elapsed = std::chrono::duration<double>(Clock::now() - start_).count();
      if (elapsed >= *options_.time_limit_seconds) return true;
    }
    return false;
  }

  void PromoteBestBoundLocked() {
    // Restart from the most promising open node; ties keep the newest.
    size_t best = stack_.size() - 1;
    for (size_t j = 0; j < stack_.size(); ++j) {
      if (stack_[j].bound > stack_[best].bound) best = j;
    }
    if (best != stack_.size() - 1) std::swap(stack_[best], stack_.back());
  }

  void LogLocked(const Node& node) const {
    double open = node.bound;
    for (const Node& other : stack_) open = std::max(open, other.bound);
    std::ostream& log = *options_.node_log;
    log << "nodes " << nodes_ << " bound ";
    if (std::isfinite(open)) {
      log << open / static_cast<double>(dataset_.scale());
    } else {
      log << "inf";
    }
    log << " incumbent ";
    if (incumbent_) {
      log << ToDecimalString(Rational(incumbent_->utility, dataset_.scale()));
    } else {
      log << "none";
    }
    log << " depth " << node.fixings.size() << "\n";
  }

  std::optional<Incumbent> Snapshot() {
    std::lock_guard<std::mutex> lock(mu_);
    return incumbent_;
  }

  void Offer(std::int64_t utility, const std::vector<int>& selection,
             const std::vector<int>& ordering) {
    std::lock_guard<std::mutex> lock(mu_);
    const bool better = !incumbent_ || utility > incumbent_->utility ||
                        (utility == incumbent_->utility &&
                         LexSmallerSet(dataset_, selection, incumbent_->selection));
    if (better) incumbent_ = Incumbent{utility, selection, ordering};
    if (options_.stop_at_first_feasible) {
      found_first_ = true;
      stop_ = true;
      cv_.notify_all();
    }
  }

  // Fixed ones plus the smallest-id free items: the lexicographically
  // smallest selection any leaf below this node could produce.
  std::optional<std::vector<int>> LexBestCompletion(const std::vector<std::int8_t>& val) const {
    std::vector<int> out;
    for (int i = 0; i < s_.n; ++i) {
      if (val[i] == 1) out.push_back(i);
    }
    for (int i : dataset_.by_id()) {
      if (static_cast<int>(out.size()) >= s_.k) break;
      if (val[i] < 0) out.push_back(i);
    }
    if (static_cast<int>(out.size()) != s_.k) return std::nullopt;
    std::sort(out.begin(), out.end(),
              [&](int a, int b) { return dataset_.id_rank(a) < dataset_.id_rank(b); });
    return out;
  }

  bool MayImprove(double z, const std::vector<std::int8_t>& val,
                  const std::optional<Incumbent>& inc) const {
    if (!inc) return true;
    const double slack = 1e-6 * std::max(1.0, std::abs(z));
    const double ub = std::floor(z + slack);
    const double u = static_cast<double>(inc->utility);
    if (ub > u) return true;
    if (ub < u) return false;
    const std::optional<std::vector<int>> completion = LexBestCompletion(val);
    return completion && LexSmallerSet(dataset_, *completion, inc->selection);
  }

  void Process(LpModel& model, const Propagator& propagator, const Node& node,
               std::vector<Node>& children) {
    const int n = s_.n;
    std::vector<std::int8_t> val(n, -1);
    for (const auto& [i, v] : node.fixings) val[i] = v;
    if (!propagator.Run(val)) return;
    std::optional<Incumbent> inc = Snapshot();
    if (inc && !MayImprove(node.bound, val, inc)) return;

    BoundedSimplex& lp = model.lp();
    for (int i = 0; i < n; ++i) {
      const double lo = val[i] == 1 ? 1.0 : 0.0;
      const double hi = val[i] == 0 ? 0.0 : 1.0;
      if (lp.column_lower(i) != lo || lp.column_upper(i) != hi) lp.SetColumnBounds(i, lo, hi);
    }
    while (true) {
      const LpStatus status = lp.Solve();
      if (status == LpStatus::kInfeasible) return;
      if (status == LpStatus::kIterationLimit) throw Error("simplex iteration limit reached");
      if (model.AddViolated() == 0) break;
    }
    const double z = lp.ObjectiveValue();
    if (inc && !MayImprove(z, val, inc)) return;

    const double tol = options_.integrality_tolerance;
    int branch = -1;
    double best_frac = -1.0;
    for (int i : dataset_.by_id()) {
      if (val[i] >= 0) continue;
      const double x = lp.Value(i);
      const double frac = std::min(x, 1.0 - x);
      if (frac <= tol) continue;
      if (frac > best_frac + 1e-12) {
        best_frac = frac;
        branch = i;
      }
    }

    if (branch < 0) {
      std::vector<int> selection;
      for (int i : dataset_.by_id()) {
        if (lp.Value(i) > 0.5) selection.push_back(i);
      }
      if (static_cast<int>(selection.size()) != s_.k) {
        throw Error("relaxation returned a selection of the wrong size");
      }
      const std::optional<std::vector<int>> ordering =
          VerifySelection(dataset_, program_, s_, selection);
      if (ordering) {
        std::int64_t utility = 0;
        for (int i : selection) utility += dataset_.scaled_score(i);
        Offer(utility, selection, *ordering);
        if (options_.stop_at_first_feasible) return;
        inc = Snapshot();
        if (!MayImprove(z, val, inc)) return;
        // Only a lexicographically smaller selection of equal utility can
        // still win here; it must take the first completion item missing
        // from the current selection.
        const std::optional<std::vector<int>> completion = LexBestCompletion(val);
        std::vector<bool> in_selection(n, false);
        for (int i : selection) in_selection[i] = true;
        for (int i : *completion) {
          if (!in_selection[i] && val[i] < 0) {
            branch = i;
            break;
          }
        }
      } else {
        for (int i : selection) {
          if (val[i] < 0) {
            branch = i;
            break;
          }
        }
      }
      if (branch < 0) return;
    }

    Node zero{node.fixings, z};
    zero.fixings.emplace_back(branch, 0);
    Node one{node.fixings, z};
    one.fixings.emplace_back(branch, 1);
    children.push_back(std::move(zero));
    children.push_back(std::move(one));  // popped first
  }

  const Dataset& dataset_;
  const IntegerProgram& program_;
  const Structure& s_;
  const SolverOptions& options_;
  const Clock::time_point start_;

  std::mutex mu_;
  std::condition_variable cv_;
  std::vector<Node> stack_;
  int active_ = 0;
  bool stop_ = false;
  bool limit_hit_ = false;
  bool found_first_ = false;
  std::int64_t nodes_ = 0;
  std::int64_t lp_iterations_ = 0;
  std::optional<Incumbent> incumbent_;
  std::exception_ptr error_;
};

}  // namespace

void SolverOptions::Validate() const {
  if (!(integrality_tolerance > 0) || integrality_tolerance >= 0.5) {
    throw Error("integrality tolerance must lie in (0, 0.5)");
  }
  if (time_limit_seconds && !(*time_limit_seconds > 0)) throw Error("time limit must be positive");
  if (node_limit && *node_limit <= 0) throw Error("node limit must be positive");
  if (workers < 1) throw Error("worker count must be at least 1");
}

std::string StatusName(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kFeasible: return "feasible";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kLimitReached: return "limit_reached";
  }
  return "unknown";
}

Solution SolveIp(const Dataset& dataset, const IntegerProgram& program,
                 const SolverOptions& options) {
  options.Validate();
  const Structure s = Analyze(dataset, program);
  Search search(dataset, program, s, options);
  return search.Run();
}

Solution SolveInstance(const Dataset& dataset, const DiversityConstraints& constraints,
                       const IgfBounds& bounds, const SolverOptions& options) {
  const IntegerProgram program = BuildModel(dataset, constraints, bounds);
  return SolveIp(dataset, program, options);
}

LpRelaxation SolveLpRelaxation(const Dataset& dataset, const IntegerProgram& program,
                               const std::vector<std::pair<int, int>>& fixings) {
  const Structure s = Analyze(dataset, program);
  std::map<int, int> fixed;
  for (const auto& [var, value] : fixings) {
    if (var < 0 || var >= static_cast<int>(program.vars.size())) {
      throw Error("fixing refers to an unknown variable");
    }
    if (program.vars[var].kind != VarKind::kBinary) throw Error("only binaries can be fixed");
    if (value != 0 && value != 1) throw Error("fixings must be 0 or 1");
    auto [it, inserted] = fixed.emplace(var, value);
    if (!inserted && it->second != value) {
      throw Error("variable '" + program.vars[var].name + "' fixed both ways");
    }
  }
  LpModel model(dataset, program, s, /*compress=*/false, /*lazy=*/false, /*cells=*/false);
  BoundedSimplex& lp = model.lp();
  for (const auto& [var, value] : fixed) {
    const int c = model.ColumnOf(var);
    lp.SetColumnBounds(c, value, value);
  }
  LpRelaxation out;
  const LpStatus status = lp.Solve();
  if (status == LpStatus::kIterationLimit) throw Error("simplex iteration limit reached");
  if (status == LpStatus::kInfeasible) return out;
  out.feasible = true;
  out.bound = lp.ObjectiveValue() / static_cast<double>(dataset.scale());
  out.values.resize(program.vars.size());
  for (int j = 0; j < static_cast<int>(program.vars.size()); ++j) out.values[j] = model.ProgramValue(j);
  return out;
}

}  // namespace igfair
