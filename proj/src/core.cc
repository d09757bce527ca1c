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

#include "igfair/core.h"

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace igfair {

AttributeSchema AttributeSchema::Create(std::vector<Attribute> attributes) {
  AttributeSchema schema;
  std::unordered_set<std::string> attribute_names;
  for (const Attribute& attribute : attributes) {
    if (attribute.name.empty()) throw Error("attribute with empty name");
    if (!attribute_names.insert(attribute.name).second) {
      throw Error("duplicate attribute '" + attribute.name + "'");
    }
    const int a = static_cast<int>(schema.attribute_values_.size());
    schema.attribute_values_.emplace_back();
    for (const std::string& value : attribute.values) {
      if (value.empty()) throw Error("empty value name in attribute '" + attribute.name + "'");
      const ValueId v = static_cast<ValueId>(schema.value_names_.size());
      if (!schema.value_index_.emplace(value, v).second) {
        throw Error("value '" + value + "' appears in more than one place; value "
                    "identifiers must be unique across attributes");
      }
      schema.value_names_.push_back(value);
      schema.value_attribute_.push_back(a);
      schema.attribute_values_[a].push_back(v);
    }
  }
  if (schema.value_names_.empty()) throw Error("schema has no attribute values");
  schema.attributes_ = std::move(attributes);
  return schema;
}

std::optional<ValueId> AttributeSchema::FindValue(std::string_view name) const {
  auto it = value_index_.find(std::string(name));
  if (it == value_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> AttributeSchema::FindAttribute(std::string_view name) const {
  for (int a = 0; a < num_attributes(); ++a) {
    if (attributes_[a].name == name) return a;
  }
  return std::nullopt;
}

Dataset Dataset::Create(AttributeSchema schema, std::vector<Item> items) {
  Dataset ds;
  const int n = static_cast<int>(items.size());

  std::vector<Decimal> decimals;
  decimals.reserve(n);
  int max_places = 0;
  for (int i = 0; i < n; ++i) {
    const Item& item = items[i];
    if (item.id.empty()) throw Error("item with empty id");
    if (!ds.id_index_.emplace(item.id, i).second) {
      throw Error("duplicate id '" + item.id + "'");
    }
    Decimal d;
    try {
      d = ParseDecimal(item.score_text);
    } catch (const Error&) {
      throw Error("non-numeric score '" + item.score_text + "' for item '" + item.id + "'");
    }
    if (d.mantissa <= 0) {
      throw Error("non-positive score " + item.score_text + " for item '" + item.id + "'");
    }
    max_places = std::max(max_places, d.decimals);
    decimals.push_back(d);

    if (static_cast<int>(item.labels.size()) != schema.num_attributes()) {
      throw Error("item '" + item.id + "' must carry exactly one value per attribute");
    }
    for (int a = 0; a < schema.num_attributes(); ++a) {
      const ValueId v = item.labels[a];
      if (v < 0 || v >= schema.num_values() || schema.attribute_of(v) != a) {
        throw Error("item '" + item.id + "' has a label outside attribute '" +
                    schema.attribute(a).name + "'");
      }
    }
  }

  ds.scale_ = Pow10(max_places);
  ds.scaled_scores_.resize(n);
  for (int i = 0; i < n; ++i) {
    ds.scaled_scores_[i] = decimals[i].mantissa * Pow10(max_places - decimals[i].decimals);
  }

  ds.by_id_.resize(n);
  std::iota(ds.by_id_.begin(), ds.by_id_.end(), 0);
  std::sort(ds.by_id_.begin(), ds.by_id_.end(),
            [&](int a, int b) { return items[a].id < items[b].id; });
  ds.id_rank_.resize(n);
  for (int r = 0; r < n; ++r) ds.id_rank_[ds.by_id_[r]] = r;

  ds.groups_.assign(schema.num_values(), {});
  for (int i = 0; i < n; ++i) {
    for (ValueId v : items[i].labels) ds.groups_[v].push_back(i);
  }
  for (auto& members : ds.groups_) {
    std::sort(members.begin(), members.end(), [&](int a, int b) {
      if (ds.scaled_scores_[a] != ds.scaled_scores_[b]) {
        return ds.scaled_scores_[a] > ds.scaled_scores_[b];
      }
      return ds.id_rank_[a] < ds.id_rank_[b];
    });
  }

  ds.schema_ = std::move(schema);
  ds.items_ = std::move(items);
  return ds;
}

Rational Dataset::score(int i) const { return Rational(scaled_scores_[i], scale_); }

bool Dataset::HasLabel(int i, ValueId v) const {
  const int a = schema_.attribute_of(v);
  return items_[i].labels[a] == v;
}

std::optional<int> Dataset::FindItem(std::string_view id) const {
  auto it = id_index_.find(std::string(id));
  if (it == id_index_.end()) return std::nullopt;
  return it->second;
}

int Dataset::ItemIndex(std::string_view id) const {
  auto found = FindItem(id);
  if (!found) throw Error("unknown item id '" + std::string(id) + "'");
  return *found;
}

Dataset LoadDataset(const Table& table, const AttributeSchema& schema) {
  const int columns = static_cast<int>(table.header.size());
  int id_col = -1;
  int score_col = -1;
  std::vector<int> attribute_col(schema.num_attributes(), -1);
  for (int c = 0; c < columns; ++c) {
    const std::string& name = table.header[c];
    if (name == "id") {
      id_col = c;
    } else if (name == "score") {
      score_col = c;
    } else if (auto a = schema.FindAttribute(name)) {
      if (attribute_col[*a] != -1) throw Error("duplicate column '" + name + "'");
      attribute_col[*a] = c;
    } else {
      throw Error("column '" + name + "' is not an attribute of the schema");
    }
  }
  if (id_col < 0) throw Error("missing 'id' column");
  if (score_col < 0) throw Error("missing 'score' column");
  for (int a = 0; a < schema.num_attributes(); ++a) {
    if (attribute_col[a] < 0) {
      throw Error("missing column for attribute '" + schema.attribute(a).name + "'");
    }
  }

  std::vector<Item> items;
  items.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (static_cast<int>(row.size()) != columns) {
      throw Error("row " + std::to_string(r + 1) + " has " + std::to_string(row.size()) +
                  " fields, expected " + std::to_string(columns));
    }
    Item item;
    item.id = row[id_col];
    item.score_text = row[score_col];
    for (int a = 0; a < schema.num_attributes(); ++a) {
      const std::string& label = row[attribute_col[a]];
      if (label.empty()) {
        throw Error("item '" + item.id + "' is missing a value for attribute '" +
                    schema.attribute(a).name + "'");
      }
      auto v = schema.FindValue(label);
      if (!v || schema.attribute_of(*v) != a) {
        throw Error("label '" + label + "' of item '" + item.id + "' is not in the schema for '" +
                    schema.attribute(a).name + "'");
      }
      item.labels.push_back(*v);
    }
    items.push_back(std::move(item));
  }
  return Dataset::Create(schema, std::move(items));
}

DatasetStats ComputeStats(const Dataset& dataset) {
  if (dataset.size() == 0) throw Error("empty dataset");
  const auto scores = dataset.scaled_scores();
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  DatasetStats stats;
  stats.scaled_min = *lo;
  stats.scaled_max = *hi;
  stats.s_min = Rational(*lo, dataset.scale());
  stats.s_max = Rational(*hi, dataset.scale());
  stats.lambda = Rational(*hi, *lo);
  return stats;
}

std::vector<int> BetterOrEqualSet(const Dataset& dataset, ValueId v, int item) {
  if (v < 0 || v >= dataset.schema().num_values()) throw Error("unknown attribute value");
  if (item < 0 || item >= dataset.size() || !dataset.HasLabel(item, v)) {
    throw Error("item is not a member of group '" + dataset.schema().value_name(v) + "'");
  }
  const std::int64_t threshold = dataset.scaled_score(item);
  std::vector<int> result;
  for (int member : dataset.group(v)) {
    if (dataset.scaled_score(member) >= threshold) result.push_back(member);
  }
  return result;
}

Outcome Outcome::Create(const Dataset& dataset, std::vector<int> ranking) {
  Outcome out;
  const int n = dataset.size();
  out.selected_.assign(n, false);
  for (int i : ranking) {
    if (i < 0 || i >= n) throw Error("ranking refers to an unknown item");
    if (out.selected_[i]) throw Error("ranking lists item '" + dataset.item(i).id + "' twice");
    out.selected_[i] = true;
    out.scaled_utility_ += dataset.scaled_score(i);
  }
  const int num_values = dataset.schema().num_values();
  out.accepted_.resize(num_values);
  out.rejected_.resize(num_values);
  for (ValueId v = 0; v < num_values; ++v) {
    for (int member : dataset.group(v)) {
      (out.selected_[member] ? out.accepted_[v] : out.rejected_[v]).push_back(member);
    }
  }
  out.scaled_scores_.assign(dataset.scaled_scores().begin(), dataset.scaled_scores().end());
  out.scale_ = dataset.scale();
  out.ranking_ = std::move(ranking);
  return out;
}

std::optional<std::int64_t> Outcome::lowest_accepted(ValueId v) const {
  // Groups are sorted by descending score, so the last entry is the lowest.
  if (accepted_[v].empty()) return std::nullopt;
  return scaled_scores_[accepted_[v].back()];
}

std::optional<std::int64_t> Outcome::highest_rejected(ValueId v) const {
  if (rejected_[v].empty()) return std::nullopt;
  return scaled_scores_[rejected_[v].front()];
}

std::vector<int> Outcome::SelectedByRank(const Dataset& dataset) const {
  std::vector<int> ids(ranking_.begin(), ranking_.end());
  std::sort(ids.begin(), ids.end(),
            [&](int a, int b) { return dataset.id_rank(a) < dataset.id_rank(b); });
  return ids;
}

bool LexSmallerSet(const Dataset& dataset, std::span<const int> a, std::span<const int> b) {
  std::vector<int> ra;
  std::vector<int> rb;
  for (int i : a) ra.push_back(dataset.id_rank(i));
  for (int i : b) rb.push_back(dataset.id_rank(i));
  std::sort(ra.begin(), ra.end());
  std::sort(rb.begin(), rb.end());
  return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
}

}  // namespace igfair
