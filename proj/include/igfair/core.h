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

// Item pool, attribute schema, group index and selection outcomes.
//
// Scores are exact decimals. On load every score is scaled by a common power
// of ten so that all downstream arithmetic (objective values, group sums,
// ratios) is carried out on integers or exact rationals.

#ifndef IGFAIR_CORE_H_
#define IGFAIR_CORE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "igfair/rational.h"

namespace igfair {

// Global index of an attribute value (a label) across all attributes.
using ValueId = int;

struct Attribute {
  std::string name;
  std::vector<std::string> values;
};

class AttributeSchema {
 public:
  AttributeSchema() = default;

  // Throws Error if value names repeat (within or across attributes), an
  // attribute name repeats, or no value exists at all.
  static AttributeSchema Create(std::vector<Attribute> attributes);

  int num_attributes() const { return static_cast<int>(attributes_.size()); }
  int num_values() const { return static_cast<int>(value_names_.size()); }

  const Attribute& attribute(int a) const { return attributes_[a]; }
  const std::string& value_name(ValueId v) const { return value_names_[v]; }
  int attribute_of(ValueId v) const { return value_attribute_[v]; }
  std::span<const ValueId> values_of(int attribute) const {
    return attribute_values_[attribute];
  }

  std::optional<ValueId> FindValue(std::string_view name) const;
  std::optional<int> FindAttribute(std::string_view name) const;

 private:
  std::vector<Attribute> attributes_;
  std::vector<std::string> value_names_;
  std::vector<int> value_attribute_;
  std::vector<std::vector<ValueId>> attribute_values_;
  std::unordered_map<std::string, ValueId> value_index_;
};

struct Item {
  std::string id;
  // The literal as read, kept for round-tripping to CSV.
  std::string score_text;
  // labels[a] is the value the item carries for attribute a.
  std::vector<ValueId> labels;
};

// A header row plus string cells, as produced by a CSV reader.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

class Dataset {
 public:
  Dataset() = default;

  // Validates ids, scores and labels and builds the group index.
  static Dataset Create(AttributeSchema schema, std::vector<Item> items);

  const AttributeSchema& schema() const { return schema_; }
  int size() const { return static_cast<int>(items_.size()); }
  const Item& item(int i) const { return items_[i]; }

  // Score multiplied by scale(); always a positive integer.
  std::int64_t scaled_score(int i) const { return scaled_scores_[i]; }
  std::span<const std::int64_t> scaled_scores() const { return scaled_scores_; }
  std::int64_t scale() const { return scale_; }
  Rational score(int i) const;

  // I_v: members sorted by descending score, ties by ascending id.
  std::span<const int> group(ValueId v) const { return groups_[v]; }
  bool HasLabel(int i, ValueId v) const;

  // Position of item i when all items are sorted by ascending id.
  int id_rank(int i) const { return id_rank_[i]; }
  // Item indices in ascending id order.
  std::span<const int> by_id() const { return by_id_; }

  std::optional<int> FindItem(std::string_view id) const;
  int ItemIndex(std::string_view id) const;  // throws if absent

 private:
  AttributeSchema schema_;
  std::vector<Item> items_;
  std::vector<std::int64_t> scaled_scores_;
  std::int64_t scale_ = 1;
  std::vector<std::vector<int>> groups_;
  std::vector<int> id_rank_;
  std::vector<int> by_id_;
  std::unordered_map<std::string, int> id_index_;
};

// Builds a dataset from tabular records with columns id, score and one
// column per schema attribute (any order, extra columns rejected).
Dataset LoadDataset(const Table& table, const AttributeSchema& schema);

struct DatasetStats {
  Rational s_max;
  Rational s_min;
  Rational lambda;
  std::int64_t scaled_max = 0;
  std::int64_t scaled_min = 0;
};

DatasetStats ComputeStats(const Dataset& dataset);

// I_{i,v}: members of I_v whose score is at least that of item i.
std::vector<int> BetterOrEqualSet(const Dataset& dataset, ValueId v, int item);

// A ranked selection of k items and the per-group accepted/rejected split it
// induces.
class Outcome {
 public:
  Outcome() = default;

  // Throws Error on duplicates or out-of-range indices.
  static Outcome Create(const Dataset& dataset, std::vector<int> ranking);

  std::span<const int> ranking() const { return ranking_; }
  int k() const { return static_cast<int>(ranking_.size()); }
  bool selected(int item) const { return selected_[item]; }

  // A_v and B_v in group order.
  std::span<const int> accepted(ValueId v) const { return accepted_[v]; }
  std::span<const int> rejected(ValueId v) const { return rejected_[v]; }

  // a_v / b_v on the scaled score grid; empty when A_v / B_v is empty.
  std::optional<std::int64_t> lowest_accepted(ValueId v) const;
  std::optional<std::int64_t> highest_rejected(ValueId v) const;

  std::int64_t scaled_utility() const { return scaled_utility_; }
  Rational utility() const { return Rational(scaled_utility_, scale_); }

  // Item ids sorted ascending; the key used for deterministic tie-breaks.
  std::vector<int> SelectedByRank(const Dataset& dataset) const;

 private:
  std::vector<int> ranking_;
  std::vector<bool> selected_;
  std::vector<std::vector<int>> accepted_;
  std::vector<std::vector<int>> rejected_;
  std::vector<std::int64_t> scaled_scores_;
  std::int64_t scaled_utility_ = 0;
  std::int64_t scale_ = 1;
};

// True when set `a` precedes set `b` in the deterministic tie-break order:
// compare both as ascending id sequences, lexicographically. Equivalent to
// "the smallest id in the symmetric difference belongs to a".
bool LexSmallerSet(const Dataset& dataset, std::span<const int> a,
                   std::span<const int> b);

}  // namespace igfair

#endif  // IGFAIR_CORE_H_
