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

#include "igfair/prefix.h"

#include <algorithm>
#include <climits>
#include <map>
#include <set>

namespace igfair {
namespace {

class Search {
 public:
  Search(const Dataset& dataset, std::span<const int> selected,
         const DiversityConstraints& constraints)
      : constraints_(constraints), k_(constraints.k()), num_values_(constraints.num_values()) {
    // Group items by label vector; types ordered by their smallest id.
    std::vector<int> items(selected.begin(), selected.end());
    std::sort(items.begin(), items.end(),
              [&](int a, int b) { return dataset.id_rank(a) < dataset.id_rank(b); });
    std::map<std::vector<ValueId>, int> index;
    for (int i : items) {
      const auto& labels = dataset.item(i).labels;
      auto [it, inserted] = index.emplace(labels, static_cast<int>(types_.size()));
      if (inserted) {
        types_.push_back(labels);
        members_.emplace_back();
      }
      members_[it->second].push_back(i);
    }
    for (const auto& m : members_) available_.push_back(static_cast<int>(m.size()));
    for (int p = 1; p <= k_; ++p) {
      for (ValueId v = 0; v < num_values_; ++v) {
        if (constraints.bound(v, p) > constraints.bound(v, p - 1)) {
          checkpoints_.push_back(p);
          break;
        }
      }
    }
  }

  int num_types() const { return static_cast<int>(types_.size()); }
  const std::vector<int>& members(int t) const { return members_[t]; }
  const std::vector<ValueId>& labels(int t) const { return types_[t]; }

  // Can the state (used[t] items of each type placed, in some order that met
  // all bounds so far) be completed?
  bool Completable(std::vector<int>& used, std::vector<int>& count, int placed) {
    if (placed == k_) return true;
    if (!Promising(used, count, placed)) return false;
    auto it = memo_.find(used);
    if (it != memo_.end()) return it->second;

    std::vector<int> order = TypeOrder(used, count, placed);
    bool ok = false;
    for (int t : order) {
      if (!Place(t, used, count, placed)) {
        Unplace(t, used, count);
        continue;
      }
      ok = Completable(used, count, placed + 1);
      Unplace(t, used, count);
      if (ok) break;
    }
    memo_.emplace(used, ok);
    return ok;
  }

  // Adds one item of type t at position placed + 1; false if a bound at that
  // position fails. The caller undoes it with Unplace either way.
  bool Place(int t, std::vector<int>& used, std::vector<int>& count, int placed) const {
    ++used[t];
    for (ValueId v : types_[t]) ++count[v];
    const int p = placed + 1;
    for (ValueId v = 0; v < num_values_; ++v) {
      if (count[v] < constraints_.bound(v, p)) return false;
    }
    return true;
  }

  void Unplace(int t, std::vector<int>& used, std::vector<int>& count) const {
    --used[t];
    for (ValueId v : types_[t]) --count[v];
  }

  int available(int t) const { return available_[t]; }

 private:
  // Necessary conditions: every future checkpoint's outstanding demand per
  // value fits in the positions left before it and in the remaining supply.
  bool Promising(const std::vector<int>& used, const std::vector<int>& count, int placed) const {
    std::vector<int> supply(num_values_, 0);
    for (int t = 0; t < num_types(); ++t) {
      for (ValueId v : types_[t]) supply[v] += available_[t] - used[t];
    }
    for (int p : checkpoints_) {
      if (p <= placed) continue;
      for (ValueId v = 0; v < num_values_; ++v) {
        const int need = constraints_.bound(v, p) - count[v];
        if (need > p - placed || need > supply[v]) return false;
      }
    }
    return true;
  }

  // Types by urgency: smallest slack over the values they carry, then more
  // outstanding values covered, then type order.
  std::vector<int> TypeOrder(const std::vector<int>& used, const std::vector<int>& count,
                             int placed) const {
    std::vector<int> slack(num_values_, INT_MAX);
    for (int p : checkpoints_) {
      if (p <= placed) continue;
      for (ValueId v = 0; v < num_values_; ++v) {
        const int need = constraints_.bound(v, p) - count[v];
        if (need > 0) slack[v] = std::min(slack[v], (p - placed) - need);
      }
    }
    struct Key {
      int slack;
      int covered;
      int type;
    };
    std::vector<Key> keys;
    for (int t = 0; t < num_types(); ++t) {
      if (used[t] >= available_[t]) continue;
      Key key{INT_MAX, 0, t};
      for (ValueId v : types_[t]) {
        key.slack = std::min(key.slack, slack[v]);
        if (slack[v] != INT_MAX) ++key.covered;
      }
      keys.push_back(key);
    }
    std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
      if (a.slack != b.slack) return a.slack < b.slack;
      if (a.covered != b.covered) return a.covered > b.covered;
      return a.type < b.type;
    });
    std::vector<int> order;
    for (const Key& key : keys) order.push_back(key.type);
    return order;
  }

  const DiversityConstraints& constraints_;
  int k_;
  int num_values_;
  std::vector<std::vector<ValueId>> types_;
  std::vector<std::vector<int>> members_;
  std::vector<int> available_;
  std::vector<int> checkpoints_;
  std::map<std::vector<int>, bool> memo_;
};

}  // namespace

std::optional<std::vector<int>> CheckPrefixFeasible(const Dataset& dataset,
                                                    std::span<const int> selected,
                                                    const DiversityConstraints& constraints) {
  const int k = constraints.k();
  if (static_cast<int>(selected.size()) != k) {
    throw Error("selected set has " + std::to_string(selected.size()) + " items, expected k = " +
                std::to_string(k));
  }
  if (constraints.num_values() != dataset.schema().num_values()) {
    throw Error("constraints were built for a different schema");
  }
  std::set<int> distinct;
  for (int i : selected) {
    if (i < 0 || i >= dataset.size()) throw Error("selected item out of range");
    if (!distinct.insert(i).second) throw Error("selected set repeats an item");
  }

  Search search(dataset, selected, constraints);
  const int types = search.num_types();
  std::vector<int> used(types, 0);
  std::vector<int> count(constraints.num_values(), 0);
  if (!search.Completable(used, count, 0)) return std::nullopt;

  // Walk positions, taking the smallest-id item whose type keeps the rest
  // completable. Within a type the members are consumed in id order.
  std::vector<int> ranking;
  ranking.reserve(k);
  for (int placed = 0; placed < k; ++placed) {
    int best_type = -1;
    int best_item = -1;
    for (int t = 0; t < types; ++t) {
      if (used[t] >= search.available(t)) continue;
      const int candidate = search.members(t)[used[t]];
      if (best_item >= 0 && dataset.id_rank(candidate) > dataset.id_rank(best_item)) continue;
      const bool ok = search.Place(t, used, count, placed) &&
                      search.Completable(used, count, placed + 1);
      search.Unplace(t, used, count);
      if (ok) {
        best_type = t;
        best_item = candidate;
      }
    }
    if (best_type < 0) throw Error("prefix search lost a feasible completion");
    search.Place(best_type, used, count, placed);
    ranking.push_back(best_item);
  }
  return ranking;
}

bool SatisfiesPrefixBounds(const Dataset& dataset, std::span<const int> ranking,
                           const DiversityConstraints& constraints) {
  const int num_values = constraints.num_values();
  std::vector<int> count(num_values, 0);
  const int k = constraints.k();
  for (int p = 1; p <= k; ++p) {
    if (p <= static_cast<int>(ranking.size())) {
      for (ValueId v : dataset.item(ranking[p - 1]).labels) ++count[v];
    }
    for (ValueId v = 0; v < num_values; ++v) {
      if (count[v] < constraints.bound(v, p)) return false;
    }
  }
  return true;
}

}  // namespace igfair
