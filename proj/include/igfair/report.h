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

// Utility-loss accounting across k: unconstrained top-k, the diversity-only
// optimum, and the leximin-balanced optimum per IGF mode.

#ifndef IGFAIR_REPORT_H_
#define IGFAIR_REPORT_H_

#include <optional>
#include <string>
#include <vector>

#include "igfair/core.h"
#include "igfair/io.h"
#include "igfair/leximin.h"
#include "igfair/metrics.h"

namespace igfair {

struct ModeRecord {
  IgfMode mode = IgfMode::kRatio;
  Rational utility;
  std::optional<Outcome> outcome;
  IgfVector before;  // diversity-only outcome
  IgfVector after;   // leximin outcome
  // (diversity-only utility - leximin utility) / diversity-only utility * 100.
  Rational incremental_loss_pct;
  std::vector<LeximinRound> rounds;
};

struct ReportRecord {
  int k = 0;
  Rational unconstrained_utility;
  Rational diversity_utility;
  // (unconstrained - diversity-only) / unconstrained * 100.
  Rational diversity_loss_pct;
  std::optional<Outcome> diversity_outcome;
  std::vector<ModeRecord> modes;
};

struct Report {
  std::vector<ReportRecord> records;
  bool complete = true;
  std::string error;  // first failure when incomplete
};

struct ReportConfig {
  ConstraintSpec constraints;
  std::vector<int> ks;
  std::vector<IgfMode> modes = {IgfMode::kRatio, IgfMode::kAggregated};
  LeximinOptions leximin;
};

// Highest-scoring k items, ties by ascending id.
std::vector<int> TopK(const Dataset& dataset, int k);

// Runs every k in order. A failing sub-run stops the report; records that
// finished are kept and the report is marked incomplete.
Report BuildReport(const Dataset& dataset, const ReportConfig& config);

Json ReportToJson(const Dataset& dataset, const Report& report);

// One row per (k, mode, stage, group): k,mode,stage,attribute,value,igf.
std::string ReportToCsv(const Dataset& dataset, const Report& report);

// Whole-percent table: k | diversity | ratio | agg.
std::string ReportTable(const Report& report);

}  // namespace igfair

#endif  // IGFAIR_REPORT_H_
