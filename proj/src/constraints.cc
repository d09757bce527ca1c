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

#include "igfair/constraints.h"

#include <algorithm>
#include <set>
#include <utility>

namespace igfair {

DiversityConstraints DiversityConstraints::Create(int k, int num_values,
                                                  std::span<const BoundEntry> entries) {
  if (k < 0) throw Error("k must be non-negative");
  if (num_values < 0) throw Error("negative value count");
  DiversityConstraints c;
  c.k_ = k;
  c.num_values_ = num_values;
  c.table_.assign(num_values, std::vector<int>(k, 0));

  std::set<std::pair<ValueId, int>> seen;
  for (const BoundEntry& e : entries) {
    if (e.value < 0 || e.value >= num_values) throw Error("bound refers to an unknown value");
    if (e.position < 1 || e.position > k) {
      throw Error("bound position " + std::to_string(e.position) + " outside [1, " +
                  std::to_string(k) + "]");
    }
    if (e.min < 0) throw Error("negative lower bound");
    if (!seen.insert({e.value, e.position}).second) {
      throw Error("repeated bound for the same value and position");
    }
    if (e.min == 0) continue;
    c.table_[e.value][e.position - 1] = e.min;
    c.raw_.push_back(e);
  }
  std::sort(c.raw_.begin(), c.raw_.end(), [](const BoundEntry& a, const BoundEntry& b) {
    return std::pair(a.value, a.position) < std::pair(b.value, b.position);
  });

  // Only explicitly given positions can be "dropped" by the raw input; the
  // zero-filled gaps between them are simply lifted.
  for (const BoundEntry& e : c.raw_) {
    int prior = 0;
    for (int p = 1; p < e.position; ++p) prior = std::max(prior, c.table_[e.value][p - 1]);
    if (e.min < prior) {
      c.normalization_notes_.push_back(
          "bound for value " + std::to_string(e.value) + " at position " +
          std::to_string(e.position) + " lifted from " + std::to_string(e.min) + " to " +
          std::to_string(prior));
    }
  }
  for (auto& row : c.table_) {
    for (int p = 1; p < k; ++p) row[p] = std::max(row[p], row[p - 1]);
  }
  return c;
}

int DiversityConstraints::bound(ValueId v, int p) const {
  if (p < 1 || p > k_) return 0;
  return table_[v][p - 1];
}

std::vector<BoundEntry> DiversityConstraints::Entries() const {
  std::vector<BoundEntry> out;
  for (ValueId v = 0; v < num_values_; ++v) {
    for (int p = 1; p <= k_; ++p) {
      if (table_[v][p - 1] > 0) out.push_back({v, p, table_[v][p - 1]});
    }
  }
  return out;
}

bool DiversityConstraints::empty() const {
  for (const auto& row : table_) {
    if (!row.empty() && row.back() > 0) return false;
  }
  return true;
}

DiversityConstraints ProportionalBounds(const Dataset& dataset, int k,
                                        std::span<const int> checkpoints,
                                        const Rational& alpha) {
  const int n = dataset.size();
  if (k > n) throw Error("k = " + std::to_string(k) + " exceeds the pool size " + std::to_string(n));
  if (k < 1) throw Error("k must be at least 1");
  if (checkpoints.empty()) throw Error("empty checkpoint list");
  if (alpha <= 0 || alpha > 1) throw Error("alpha must lie in (0, 1]");

  const int num_values = dataset.schema().num_values();
  std::vector<BoundEntry> entries;
  std::set<int> distinct(checkpoints.begin(), checkpoints.end());
  for (int p : distinct) {
    if (p < 1 || p > k) throw Error("checkpoint " + std::to_string(p) + " outside [1, k]");
    for (ValueId v = 0; v < num_values; ++v) {
      const int size = static_cast<int>(dataset.group(v).size());
      const Rational share = alpha * Rational(p) * Rational(size) / Rational(n);
      const int raw = static_cast<int>(Floor(share));
      const int capped = std::min({raw, p, size});
      entries.push_back({v, p, capped});
    }
  }
  return DiversityConstraints::Create(k, num_values, entries);
}

std::string KindName(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::kBoundExceedsPrefix:
      return "bound_exceeds_prefix";
    case Violation::Kind::kBoundExceedsGroup:
      return "bound_exceeds_group";
    case Violation::Kind::kAttributeOversubscribed:
      return "attribute_oversubscribed";
  }
  return "unknown";
}

ValidationReport ValidateConstraints(const DiversityConstraints& constraints,
                                     const Dataset& dataset) {
  const AttributeSchema& schema = dataset.schema();
  if (constraints.num_values() != schema.num_values()) {
    throw Error("constraints were built for a different schema");
  }
  ValidationReport report;
  report.warnings = constraints.normalization_notes();
  for (std::string& w : report.warnings) w = "non-monotone input normalized: " + w;
  const int k = constraints.k();
  if (k > dataset.size()) {
    Violation viol;
    viol.kind = Violation::Kind::kBoundExceedsGroup;
    viol.position = k;
    viol.demand = k;
    viol.limit = dataset.size();
    viol.message = "k = " + std::to_string(k) + " exceeds pool size " + std::to_string(dataset.size());
    report.violations.push_back(viol);
  }

  // One report per value (and per attribute) at the first offending prefix.
  for (ValueId v = 0; v < schema.num_values(); ++v) {
    const int size = static_cast<int>(dataset.group(v).size());
    for (int p = 1; p <= k; ++p) {
      const int l = constraints.bound(v, p);
      if (l > p) {
        Violation viol;
        viol.kind = Violation::Kind::kBoundExceedsPrefix;
        viol.value = v;
        viol.position = p;
        viol.demand = l;
        viol.limit = p;
        viol.message = "bound exceeds prefix: value '" + schema.value_name(v) + "' needs " +
                       std::to_string(l) + " in the top " + std::to_string(p);
        report.violations.push_back(viol);
        break;
      }
    }
    for (int p = 1; p <= k; ++p) {
      const int l = constraints.bound(v, p);
      if (l > size) {
        Violation viol;
        viol.kind = Violation::Kind::kBoundExceedsGroup;
        viol.value = v;
        viol.position = p;
        viol.demand = l;
        viol.limit = size;
        viol.message = "bound exceeds group size: value '" + schema.value_name(v) + "' needs " +
                       std::to_string(l) + " but has " + std::to_string(size) + " members";
        report.violations.push_back(viol);
        break;
      }
    }
  }
  for (int a = 0; a < schema.num_attributes(); ++a) {
    for (int p = 1; p <= k; ++p) {
      int demand = 0;
      for (ValueId v : schema.values_of(a)) demand += constraints.bound(v, p);
      if (demand > p) {
        Violation viol;
        viol.kind = Violation::Kind::kAttributeOversubscribed;
        viol.attribute = a;
        viol.position = p;
        viol.demand = demand;
        viol.limit = p;
        viol.message = "attribute '" + schema.attribute(a).name + "' demand " +
                       std::to_string(demand) + " > " + std::to_string(p) + " at position " +
                       std::to_string(p);
        report.violations.push_back(viol);
        break;
      }
    }
  }
  return report;
}

}  // namespace igfair
