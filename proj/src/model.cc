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

#include "igfair/model.h"

#include <algorithm>
#include <cctype>
#include <unordered_set>

namespace igfair {
namespace {

std::string Sanitize(std::string_view text) {
  std::string out;
  for (char c : text) {
    out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  }
  return out;
}

class NameRegistry {
 public:
  std::string Unique(std::string name) {
    if (used_.insert(name).second) return name;
    for (int suffix = 1;; ++suffix) {
      std::string candidate = name + "~" + std::to_string(suffix);
      if (used_.insert(candidate).second) return candidate;
    }
  }

 private:
  std::unordered_set<std::string> used_;
};

// Selection, placement and diversity skeleton shared by both modes.
IntegerProgram BuildSkeleton(const Dataset& dataset, const DiversityConstraints& constraints,
                             IgfMode mode, NameRegistry& names) {
  const int n = dataset.size();
  const int k = constraints.k();
  if (k > n) {
    throw Error("k = " + std::to_string(k) + " exceeds the pool size " + std::to_string(n));
  }
  if (constraints.num_values() != dataset.schema().num_values()) {
    throw Error("constraints were built for a different schema");
  }
  IntegerProgram ip;
  ip.mode = mode;
  ip.num_items = n;
  ip.k = k;

  for (int i = 0; i < n; ++i) {
    Variable x;
    x.name = names.Unique("x_" + Sanitize(dataset.item(i).id));
    x.kind = VarKind::kBinary;
    x.role = VarRole::kSelect;
    x.lower = 0;
    x.upper = 1;
    x.item = i;
    ip.vars.push_back(std::move(x));
  }
  for (int i = 0; i < n; ++i) {
    for (int p = 1; p <= k; ++p) {
      Variable x;
      x.name = names.Unique("y_" + Sanitize(dataset.item(i).id) + "_" + std::to_string(p));
      x.kind = VarKind::kBinary;
      x.role = VarRole::kPlace;
      x.lower = 0;
      x.upper = 1;
      x.item = i;
      x.position = p;
      ip.vars.push_back(std::move(x));
    }
  }
  for (int i = 0; i < n; ++i) {
    ip.objective.push_back({ip.select_var(i), Rational(dataset.scaled_score(i))});
  }

  for (int i = 0; i < n; ++i) {
    Row row;
    row.name = "link_" + std::to_string(i);
    row.kind = RowKind::kLinkage;
    row.sense = RowSense::kEqual;
    row.rhs = 0;
    row.item = i;
    row.terms.push_back({ip.select_var(i), Rational(1)});
    for (int p = 1; p <= k; ++p) row.terms.push_back({ip.place_var(i, p), Rational(-1)});
    ip.rows.push_back(std::move(row));
  }
  for (int p = 1; p <= k; ++p) {
    Row row;
    row.name = "pos_" + std::to_string(p);
    row.kind = RowKind::kPositionCapacity;
    row.sense = RowSense::kLessEqual;
    row.rhs = 1;
    row.position = p;
    for (int i = 0; i < n; ++i) row.terms.push_back({ip.place_var(i, p), Rational(1)});
    ip.rows.push_back(std::move(row));
  }
  {
    Row row;
    row.name = "card";
    row.kind = RowKind::kCardinality;
    row.sense = RowSense::kEqual;
    row.rhs = k;
    for (int i = 0; i < n; ++i) row.terms.push_back({ip.select_var(i), Rational(1)});
    ip.rows.push_back(std::move(row));
  }
  for (const BoundEntry& e : constraints.Entries()) {
    Row row;
    row.name = "div_" + Sanitize(dataset.schema().value_name(e.value)) + "_" +
               std::to_string(e.position);
    row.kind = RowKind::kDiversity;
    row.sense = RowSense::kGreaterEqual;
    row.rhs = e.min;
    row.position = e.position;
    row.group = e.value;
    for (int i : dataset.group(e.value)) {
      for (int q = 1; q <= e.position; ++q) row.terms.push_back({ip.place_var(i, q), Rational(1)});
    }
    ip.rows.push_back(std::move(row));
  }
  return ip;
}

void CheckBounds(const Dataset& dataset, const IgfBounds& bounds, IgfMode expected) {
  if (bounds.mode() != expected) {
    throw Error("IGF bounds are in " + ModeName(bounds.mode()) + " mode, model expects " +
                ModeName(expected));
  }
  for (const auto& [v, entry] : bounds.entries()) {
    if (v < 0 || v >= dataset.schema().num_values()) throw Error("bound for unknown value");
  }
}

// Group members in ascending id order, for deterministic row layout.
std::vector<int> MembersById(const Dataset& dataset, ValueId v) {
  std::vector<int> members(dataset.group(v).begin(), dataset.group(v).end());
  std::sort(members.begin(), members.end(),
            [&](int a, int b) { return dataset.id_rank(a) < dataset.id_rank(b); });
  return members;
}

}  // namespace

IgfBounds::IgfBounds(const Dataset& dataset, IgfMode mode) : mode_(mode) {
  for (ValueId v = 0; v < dataset.schema().num_values(); ++v) {
    if (!dataset.group(v).empty()) entries_.emplace(v, Entry{Rational(0), Status::kFloating});
  }
}

void IgfBounds::Set(ValueId v, const Rational& q, Status status) {
  if (q < 0 || q > 1) throw Error("IGF bound must lie in [0, 1]");
  auto it = entries_.find(v);
  if (it == entries_.end()) throw Error("IGF bound for a value with an empty group");
  it->second = Entry{q, status};
}

void IgfBounds::SetAll(const Rational& q) {
  if (q < 0 || q > 1) throw Error("IGF bound must lie in [0, 1]");
  for (auto& [v, entry] : entries_) {
    if (entry.status == Status::kFloating) entry.q = q;
  }
}

const Rational& IgfBounds::q(ValueId v) const {
  auto it = entries_.find(v);
  if (it == entries_.end()) throw Error("no IGF bound for this value");
  return it->second.q;
}

IgfBounds::Status IgfBounds::status(ValueId v) const {
  auto it = entries_.find(v);
  if (it == entries_.end()) throw Error("no IGF bound for this value");
  return it->second.status;
}

std::string RowKindName(RowKind kind) {
  switch (kind) {
    case RowKind::kLinkage: return "linkage";
    case RowKind::kPositionCapacity: return "position_capacity";
    case RowKind::kCardinality: return "cardinality";
    case RowKind::kDiversity: return "diversity";
    case RowKind::kRatioMinAccepted: return "ratio_min_accepted";
    case RowKind::kRatioMaxRejected: return "ratio_max_rejected";
    case RowKind::kRatioLink: return "ratio_link";
    case RowKind::kAggregated: return "aggregated";
  }
  return "unknown";
}

int IntegerProgram::NumRows(RowKind kind) const {
  return static_cast<int>(
      std::count_if(rows.begin(), rows.end(), [&](const Row& r) { return r.kind == kind; }));
}

IntegerProgram BuildRatioModel(const Dataset& dataset, const DiversityConstraints& constraints,
                               const IgfBounds& bounds) {
  CheckBounds(dataset, bounds, IgfMode::kRatio);
  NameRegistry names;
  IntegerProgram ip = BuildSkeleton(dataset, constraints, IgfMode::kRatio, names);
  if (dataset.size() == 0) return ip;
  const DatasetStats stats = ComputeStats(dataset);
  const Rational lambda = stats.lambda;
  const Rational s_min(stats.scaled_min);
  const Rational s_max(stats.scaled_max);

  for (const auto& [v, entry] : bounds.entries()) {
    if (entry.q == 0 || dataset.group(v).empty()) continue;
    const std::string tag = Sanitize(dataset.schema().value_name(v));

    const int a_var = static_cast<int>(ip.vars.size());
    ip.vars.push_back({names.Unique("a_" + tag), VarKind::kContinuous, VarRole::kGroupMin, s_min,
                       s_max, -1, -1, v});
    const int b_var = static_cast<int>(ip.vars.size());
    ip.vars.push_back({names.Unique("b_" + tag), VarKind::kContinuous, VarRole::kGroupMax, s_min,
                       s_max, -1, -1, v});

    for (int i : MembersById(dataset, v)) {
      const Rational s(dataset.scaled_score(i));
      Row amin;
      amin.name = "amin_" + tag + "_" + std::to_string(i);
      amin.kind = RowKind::kRatioMinAccepted;
      amin.sense = RowSense::kLessEqual;
      amin.rhs = lambda * s;
      amin.item = i;
      amin.group = v;
      amin.terms = {{a_var, Rational(1)}, {ip.select_var(i), (lambda - 1) * s}};
      ip.rows.push_back(std::move(amin));

      Row bmax;
      bmax.name = "bmax_" + tag + "_" + std::to_string(i);
      bmax.kind = RowKind::kRatioMaxRejected;
      bmax.sense = RowSense::kGreaterEqual;
      bmax.rhs = s;
      bmax.item = i;
      bmax.group = v;
      bmax.terms = {{b_var, Rational(1)}, {ip.select_var(i), s}};
      ip.rows.push_back(std::move(bmax));
    }
    Row link;
    link.name = "qlink_" + tag;
    link.kind = RowKind::kRatioLink;
    link.sense = RowSense::kGreaterEqual;
    link.rhs = 0;
    link.group = v;
    link.terms = {{a_var, Rational(1)}, {b_var, -entry.q}};
    ip.rows.push_back(std::move(link));
  }
  return ip;
}

IntegerProgram BuildAggregatedModel(const Dataset& dataset,
                                    const DiversityConstraints& constraints,
                                    const IgfBounds& bounds) {
  CheckBounds(dataset, bounds, IgfMode::kAggregated);
  NameRegistry names;
  IntegerProgram ip = BuildSkeleton(dataset, constraints, IgfMode::kAggregated, names);

  for (const auto& [v, entry] : bounds.entries()) {
    if (entry.q == 0 || dataset.group(v).empty()) continue;
    const std::string tag = Sanitize(dataset.schema().value_name(v));
    for (int i : MembersById(dataset, v)) {
      const std::int64_t s_i = dataset.scaled_score(i);
      std::vector<int> better;
      std::int64_t mass = 0;
      for (int h : dataset.group(v)) {
        if (dataset.scaled_score(h) >= s_i) {
          better.push_back(h);
          mass += dataset.scaled_score(h);
        }
      }
      // Satisfied whenever x_i = 1 by i's own contribution: redundant.
      if (entry.q * Rational(mass) <= Rational(s_i)) continue;

      Row row;
      row.name = "agg_" + tag + "_" + std::to_string(i);
      row.kind = RowKind::kAggregated;
      row.sense = RowSense::kGreaterEqual;
      row.rhs = 0;
      row.item = i;
      row.group = v;
      std::sort(better.begin(), better.end());
      for (int h : better) {
        Rational coef(dataset.scaled_score(h));
        if (h == i) coef -= entry.q * Rational(mass);
        row.terms.push_back({ip.select_var(h), coef});
      }
      ip.rows.push_back(std::move(row));
    }
  }
  return ip;
}

IntegerProgram BuildModel(const Dataset& dataset, const DiversityConstraints& constraints,
                          const IgfBounds& bounds) {
  return bounds.mode() == IgfMode::kRatio ? BuildRatioModel(dataset, constraints, bounds)
                                          : BuildAggregatedModel(dataset, constraints, bounds);
}

bool RowSatisfied(const Row& row, const std::vector<Rational>& values) {
  Rational activity(0);
  for (const Term& t : row.terms) activity += t.coef * values.at(t.var);
  switch (row.sense) {
    case RowSense::kLessEqual: return activity <= row.rhs;
    case RowSense::kGreaterEqual: return activity >= row.rhs;
    case RowSense::kEqual: return activity == row.rhs;
  }
  return false;
}

void WriteLpFormat(const IntegerProgram& program, std::ostream& out) {
  auto coef = [](const Rational& c) { return ToDecimalString(c, 10); };
  auto write_terms = [&](const std::vector<Term>& terms) {
    bool first = true;
    for (const Term& t : terms) {
      if (t.coef == 0) continue;
      const bool negative = t.coef < 0;
      const Rational magnitude = negative ? Rational(-t.coef) : t.coef;
      out << (first ? (negative ? "- " : "") : (negative ? " - " : " + "));
      if (magnitude != 1) out << coef(magnitude) << ' ';
      out << program.vars[t.var].name;
      first = false;
    }
    if (first) out << "0 " << program.vars.front().name;
  };

  out << "\\ mode: " << ModeName(program.mode) << ", items: " << program.num_items
      << ", k: " << program.k << "\n";
  out << "Maximize\n obj: ";
  write_terms(program.objective);
  out << "\nSubject To\n";
  for (const Row& row : program.rows) {
    out << ' ' << row.name << ": ";
    write_terms(row.terms);
    switch (row.sense) {
      case RowSense::kLessEqual: out << " <= "; break;
      case RowSense::kGreaterEqual: out << " >= "; break;
      case RowSense::kEqual: out << " = "; break;
    }
    out << coef(row.rhs) << '\n';
  }
  out << "Bounds\n";
  for (const Variable& var : program.vars) {
    out << ' ' << coef(var.lower) << " <= " << var.name << " <= " << coef(var.upper) << '\n';
  }
  out << "Binaries\n";
  for (const Variable& var : program.vars) {
    if (var.kind == VarKind::kBinary) out << ' ' << var.name << '\n';
  }
  out << "End\n";
}

}  // namespace igfair
