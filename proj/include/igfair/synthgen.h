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

// Synthetic item pools with group-dependent score distributions.
//
// Each item draws one value per attribute (in schema order) with probability
// proportional to the value's share, optionally reweighted by multipliers
// for pairs of values that co-occur. Its score is normal with mean
// base + sum of its values' locations and standard deviation equal to the
// root mean square of its values' spreads, redrawn until positive after
// rounding to the configured number of decimals.
//
// Profile JSON:
//
//   {"seed": 7, "base": 50, "decimals": 2,
//    "attributes": [{"name": "race", "values": [
//        {"name": "A", "share": 0.8, "location": 0, "spread": 10}, ...]}],
//    "pairwise": [{"values": ["A", "Young"], "multiplier": 2.0}]}

#ifndef IGFAIR_SYNTHGEN_H_
#define IGFAIR_SYNTHGEN_H_

#include <cstdint>
#include <string>
#include <vector>

#include "igfair/core.h"
#include "igfair/io.h"

namespace igfair {

struct ValueProfile {
  std::string name;
  double share = 0.0;
  double location = 0.0;  // offset added to the base
  double spread = 1.0;
};

struct AttributeProfile {
  std::string name;
  std::vector<ValueProfile> values;
};

struct PairMultiplier {
  std::string first;
  std::string second;
  double multiplier = 1.0;
};

struct GroupProfile {
  std::uint64_t seed = 0;
  double base = 50.0;
  int decimals = 2;
  std::vector<AttributeProfile> attributes;
  std::vector<PairMultiplier> pairwise;

  // Shares per attribute sum to 1 within 1e-9, spreads are positive, value
  // names are unique, multipliers are non-negative. Throws Error.
  void Validate() const;
  AttributeSchema Schema() const;
};

GroupProfile ProfileFromJson(const Json& json);
Json ProfileToJson(const GroupProfile& profile);

// Deterministic in (profile, n). Items are named i001, i002, ...
Dataset Generate(const GroupProfile& profile, int n);

// Two attributes: "group" with a large majority, a mid group and a 5%
// minority located two spreads below the base, and "sex" with a 40% value
// also two spreads below. Minority members are three times as likely to
// carry that value.
GroupProfile MinorityProfile(std::uint64_t seed);

}  // namespace igfair

#endif  // IGFAIR_SYNTHGEN_H_
