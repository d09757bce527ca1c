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

// In-group fairness measures. Both return exact rationals in [0, 1]; 1 means
// no member of the group was passed over for a lower-scoring member.

#ifndef IGFAIR_METRICS_H_
#define IGFAIR_METRICS_H_

#include <map>
#include <string>
#include <string_view>

#include "igfair/core.h"
#include "igfair/rational.h"

namespace igfair {

enum class IgfMode { kRatio, kAggregated };

std::string ModeName(IgfMode mode);     // "ratio" | "agg"
IgfMode ParseMode(std::string_view text);  // accepts ratio|agg|aggregated

// min(1, a_v / b_v). 1 when either side of the split is empty.
Rational IgfRatio(const Dataset& dataset, const Outcome& outcome, ValueId v);

// min over accepted i of (accepted mass at or above s_i) / (group mass at or
// above s_i). 1 when nothing from the group is accepted.
Rational IgfAggregated(const Dataset& dataset, const Outcome& outcome, ValueId v);

Rational Igf(IgfMode mode, const Dataset& dataset, const Outcome& outcome, ValueId v);

struct IgfVector {
  IgfMode mode = IgfMode::kRatio;
  // One entry per value whose group is non-empty.
  std::map<ValueId, Rational> values;

  Rational Min() const;
};

IgfVector ComputeIgfVector(const Dataset& dataset, const Outcome& outcome, IgfMode mode);

}  // namespace igfair

#endif  // IGFAIR_METRICS_H_
