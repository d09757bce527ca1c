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

// Prefix diversity constraints: at least bound(v, p) members of group v must
// appear among the first p positions of the ranking.

#ifndef IGFAIR_CONSTRAINTS_H_
#define IGFAIR_CONSTRAINTS_H_

#include <span>
#include <string>
#include <vector>

#include "igfair/core.h"
#include "igfair/rational.h"

namespace igfair {

struct BoundEntry {
  ValueId value = 0;
  int position = 0;  // 1-based prefix length
  int min = 0;
};

class DiversityConstraints {
 public:
  DiversityConstraints() = default;

  // Builds the dense table from raw entries and normalizes it so that bounds
  // never shrink along the prefix: bound(v, p) = max over p' <= p of the raw
  // entry at (v, p'). Throws Error on out-of-range positions or values,
  // negative minimums and repeated (value, position) pairs.
  static DiversityConstraints Create(int k, int num_values, std::span<const BoundEntry> entries);

  static DiversityConstraints None(int k, int num_values) { return Create(k, num_values, {}); }

  int k() const { return k_; }
  int num_values() const { return num_values_; }

  // Normalized bound for 1 <= p <= k; zero outside that range.
  int bound(ValueId v, int p) const;

  // True when the raw entries were not monotone and had to be lifted.
  bool was_normalized() const { return !normalization_notes_.empty(); }
  const std::vector<std::string>& normalization_notes() const { return normalization_notes_; }

  // All positive normalized bounds, ordered by (value, position).
  std::vector<BoundEntry> Entries() const;

  // Raw entries as given to Create (positive ones only).
  const std::vector<BoundEntry>& raw_entries() const { return raw_; }

  bool empty() const;

 private:
  int k_ = 0;
  int num_values_ = 0;
  std::vector<std::vector<int>> table_;  // [v][p - 1]
  std::vector<BoundEntry> raw_;
  std::vector<std::string> normalization_notes_;
};

// bound(v, p) = floor(alpha * p * |I_v| / n) at each checkpoint, carried
// forward, capped at min(p, |I_v|). Requires 0 < alpha <= 1.
DiversityConstraints ProportionalBounds(const Dataset& dataset, int k,
                                        std::span<const int> checkpoints,
                                        const Rational& alpha);

struct Violation {
  enum class Kind { kBoundExceedsPrefix, kBoundExceedsGroup, kAttributeOversubscribed };
  Kind kind = Kind::kBoundExceedsPrefix;
  ValueId value = -1;  // for per-value violations
  int attribute = -1;  // for oversubscription
  int position = 0;
  int demand = 0;
  int limit = 0;
  std::string message;
};

std::string KindName(Violation::Kind kind);

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<std::string> warnings;

  bool ok() const { return violations.empty(); }
};

// Necessary conditions only. A clean report does not certify that an
// ordering satisfying every bound exists; that is decided by the solver.
ValidationReport ValidateConstraints(const DiversityConstraints& constraints,
                                     const Dataset& dataset);

}  // namespace igfair

#endif  // IGFAIR_CONSTRAINTS_H_
