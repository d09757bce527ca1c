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

// File formats: item CSV, schema JSON, constraint JSON and the JSON views of
// outcomes and IGF vectors.
//
// Constraint files come in two forms:
//
//   {"mode": "explicit", "k": 4,
//    "bounds": [{"value": "Male", "position": 4, "min": 2}, ...]}
//
//   {"mode": "proportional", "alpha": 0.8, "checkpoints": [10, 20]}

#ifndef IGFAIR_IO_H_
#define IGFAIR_IO_H_

#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "igfair/constraints.h"
#include "igfair/core.h"
#include "igfair/metrics.h"
#include "igfair/rational.h"

namespace igfair {

using Json = nlohmann::ordered_json;

// RFC 4180 CSV. Blank lines are skipped; every row must have as many cells
// as the header.
Table ReadCsv(std::istream& in);
void WriteCsv(const Table& table, std::ostream& out);

std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, const std::string& text);
Json ReadJsonFile(const std::filesystem::path& path);

AttributeSchema SchemaFromJson(const Json& json);
Json SchemaToJson(const AttributeSchema& schema);

Dataset ReadDatasetCsv(const std::filesystem::path& path, const AttributeSchema& schema);
// Header id,score,<attributes in schema order>; rows in dataset order.
Table DatasetToTable(const Dataset& dataset);
std::string DatasetToCsv(const Dataset& dataset);

struct ConstraintSpec {
  enum class Kind { kExplicit, kProportional };
  struct NamedBound {
    std::string value;
    int position = 0;
    int min = 0;
  };

  Kind kind = Kind::kExplicit;
  std::optional<int> k;  // explicit files may name their k
  std::vector<NamedBound> bounds;
  Rational alpha = 1;
  std::vector<int> checkpoints;  // proportional; empty means {k}

  static ConstraintSpec None() { return {}; }
};

ConstraintSpec ConstraintSpecFromJson(const Json& json);

// Instantiates the spec for a given k. With drop_beyond_k, explicit bounds
// past position k are ignored instead of rejected, and proportional
// checkpoints past k are dropped (k itself is always a checkpoint then).
DiversityConstraints ResolveConstraints(const ConstraintSpec& spec, const Dataset& dataset, int k,
                                        bool drop_beyond_k = false);

Json ConstraintsToJson(const DiversityConstraints& constraints, const AttributeSchema& schema);

// Exact values are rendered as fractions, alongside a double for plotting.
Json RationalToJson(const Rational& value);

Json OutcomeToJson(const Dataset& dataset, const Outcome& outcome);
Json IgfVectorToJson(const Dataset& dataset, const IgfVector& igf);

// Reads the ranking back from OutcomeToJson output (ids by position).
std::vector<int> RankingFromJson(const Json& json, const Dataset& dataset);

// Two-space indented dump with a trailing newline.
std::string DumpJson(const Json& json);

}  // namespace igfair

#endif  // IGFAIR_IO_H_
