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

#include "igfair/synthgen.h"

#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>

namespace igfair {
namespace {

constexpr int kMaxDraws = 10000;

double Number(const Json& j, const char* what) {
  if (!j.is_number()) throw Error(std::string("profile field '") + what + "' must be a number");
  return j.get<double>();
}

std::string FormatScore(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
  return buffer;
}

}  // namespace

void GroupProfile::Validate() const {
  if (attributes.empty()) throw Error("profile has no attributes");
  if (decimals < 0 || decimals > 6) throw Error("profile decimals must lie in [0, 6]");
  if (!std::isfinite(base)) throw Error("profile base must be finite");
  std::set<std::string> names;
  for (const AttributeProfile& a : attributes) {
    if (a.values.empty()) throw Error("attribute '" + a.name + "' has no values");
    double total = 0.0;
    for (const ValueProfile& v : a.values) {
      if (!names.insert(v.name).second) throw Error("value '" + v.name + "' repeats");
      if (!(v.share >= 0.0)) throw Error("share of '" + v.name + "' must be non-negative");
      if (!(v.spread > 0.0) || !std::isfinite(v.spread)) {
        throw Error("spread of '" + v.name + "' must be positive");
      }
      if (!std::isfinite(v.location)) throw Error("location of '" + v.name + "' must be finite");
      total += v.share;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw Error("shares of attribute '" + a.name + "' sum to " + std::to_string(total));
    }
  }
  for (const PairMultiplier& m : pairwise) {
    if (!names.count(m.first) || !names.count(m.second)) {
      throw Error("pairwise multiplier names an unknown value");
    }
    if (!(m.multiplier >= 0.0) || !std::isfinite(m.multiplier)) {
      throw Error("pairwise multipliers must be non-negative");
    }
  }
}

AttributeSchema GroupProfile::Schema() const {
  std::vector<Attribute> out;
  for (const AttributeProfile& a : attributes) {
    Attribute attribute{a.name, {}};
    for (const ValueProfile& v : a.values) attribute.values.push_back(v.name);
    out.push_back(std::move(attribute));
  }
  return AttributeSchema::Create(std::move(out));
}

GroupProfile ProfileFromJson(const Json& json) {
  if (!json.is_object()) throw Error("profile must be a JSON object");
  GroupProfile p;
  if (json.contains("seed")) {
    if (!json["seed"].is_number_unsigned()) throw Error("profile seed must be a non-negative integer");
    p.seed = json["seed"].get<std::uint64_t>();
  }
  if (json.contains("base")) p.base = Number(json["base"], "base");
  if (json.contains("decimals")) {
    if (!json["decimals"].is_number_integer()) throw Error("profile decimals must be an integer");
    p.decimals = json["decimals"].get<int>();
  }
  if (!json.contains("attributes") || !json["attributes"].is_array()) {
    throw Error("profile needs an \"attributes\" array");
  }
  for (const Json& a : json["attributes"]) {
    if (!a.is_object() || !a.contains("name") || !a["name"].is_string() ||
        !a.contains("values") || !a["values"].is_array()) {
      throw Error("profile attribute needs \"name\" and \"values\"");
    }
    AttributeProfile attribute;
    attribute.name = a["name"].get<std::string>();
    for (const Json& v : a["values"]) {
      if (!v.is_object() || !v.contains("name") || !v["name"].is_string()) {
        throw Error("profile value needs a \"name\"");
      }
      ValueProfile value;
      value.name = v["name"].get<std::string>();
      if (!v.contains("share")) throw Error("profile value '" + value.name + "' needs a share");
      value.share = Number(v["share"], "share");
      if (v.contains("location")) value.location = Number(v["location"], "location");
      if (v.contains("spread")) value.spread = Number(v["spread"], "spread");
      attribute.values.push_back(std::move(value));
    }
    p.attributes.push_back(std::move(attribute));
  }
  if (json.contains("pairwise")) {
    if (!json["pairwise"].is_array()) throw Error("\"pairwise\" must be an array");
    for (const Json& m : json["pairwise"]) {
      if (!m.is_object() || !m.contains("values") || !m["values"].is_array() ||
          m["values"].size() != 2 || !m["values"][0].is_string() || !m["values"][1].is_string() ||
          !m.contains("multiplier")) {
        throw Error("pairwise entries need two \"values\" and a \"multiplier\"");
      }
      p.pairwise.push_back({m["values"][0].get<std::string>(), m["values"][1].get<std::string>(),
                            Number(m["multiplier"], "multiplier")});
    }
  }
  p.Validate();
  return p;
}

Json ProfileToJson(const GroupProfile& profile) {
  Json attributes = Json::array();
  for (const AttributeProfile& a : profile.attributes) {
    Json values = Json::array();
    for (const ValueProfile& v : a.values) {
      values.push_back({{"name", v.name},
                        {"share", v.share},
                        {"location", v.location},
                        {"spread", v.spread}});
    }
    attributes.push_back({{"name", a.name}, {"values", values}});
  }
  Json out = {{"seed", profile.seed},
              {"base", profile.base},
              {"decimals", profile.decimals},
              {"attributes", attributes}};
  if (!profile.pairwise.empty()) {
    Json pairs = Json::array();
    for (const PairMultiplier& m : profile.pairwise) {
      pairs.push_back({{"values", {m.first, m.second}}, {"multiplier", m.multiplier}});
    }
    out["pairwise"] = pairs;
  }
  return out;
}

Dataset Generate(const GroupProfile& profile, int n) {
  profile.Validate();
  if (n < 1) throw Error("n must be at least 1");
  AttributeSchema schema = profile.Schema();

  std::map<std::pair<ValueId, ValueId>, double> multipliers;
  for (const PairMultiplier& m : profile.pairwise) {
    const ValueId a = *schema.FindValue(m.first);
    const ValueId b = *schema.FindValue(m.second);
    multipliers[{std::min(a, b), std::max(a, b)}] = m.multiplier;
  }

  std::mt19937_64 rng(profile.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = std::pow(10.0, profile.decimals);
  const int width = static_cast<int>(std::to_string(n).size());

  std::vector<Item> items;
  items.reserve(n);
  for (int i = 0; i < n; ++i) {
    Item item;
    std::string number = std::to_string(i + 1);
    item.id = "i" + std::string(width - number.size(), '0') + number;
    double location = profile.base;
    double spread_sq = 0.0;
    for (int a = 0; a < schema.num_attributes(); ++a) {
      const auto values = schema.values_of(a);
      const AttributeProfile& ap = profile.attributes[a];
      std::vector<double> weight(values.size());
      double total = 0.0;
      for (size_t t = 0; t < values.size(); ++t) {
        weight[t] = ap.values[t].share;
        for (ValueId u : item.labels) {
          auto it = multipliers.find({std::min(u, values[t]), std::max(u, values[t])});
          if (it != multipliers.end()) weight[t] *= it->second;
        }
        total += weight[t];
      }
      if (!(total > 0.0)) throw Error("pairwise multipliers leave no value to draw");
      double r = unit(rng) * total;
      size_t pick = values.size() - 1;
      for (size_t t = 0; t < values.size(); ++t) {
        if (r < weight[t]) {
          pick = t;
          break;
        }
        r -= weight[t];
      }
      // Never land on a zero-weight value through rounding in the last step.
      while (weight[pick] == 0.0) --pick;
      item.labels.push_back(values[pick]);
      location += ap.values[pick].location;
      spread_sq += ap.values[pick].spread * ap.values[pick].spread;
    }
    const double spread = std::sqrt(spread_sq / schema.num_attributes());
    double score = 0.0;
    for (int draw = 0;; ++draw) {
      if (draw == kMaxDraws) throw Error("profile locations sit too far below zero");
      score = std::round((location + spread * normal(rng)) * scale) / scale;
      if (score > 0.0) break;
    }
    item.score_text = FormatScore(score, profile.decimals);
    items.push_back(std::move(item));
  }
  return Dataset::Create(std::move(schema), std::move(items));
}

GroupProfile MinorityProfile(std::uint64_t seed) {
  GroupProfile p;
  p.seed = seed;
  p.base = 50.0;
  p.decimals = 4;
  p.attributes = {
      {"group",
       {{"majority", 0.75, 0.0, 10.0}, {"middle", 0.20, -5.0, 10.0}, {"minority", 0.05, -20.0, 10.0}}},
      {"sex", {{"m", 0.6, 0.0, 10.0}, {"f", 0.4, -20.0, 10.0}}},
  };
  p.pairwise = {{"minority", "f", 3.0}};
  return p;
}

}  // namespace igfair
