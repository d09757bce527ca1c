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

#include "igfair/report.h"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "igfair/model.h"
#include "igfair/solver.h"

namespace igfair {
namespace {

Rational LossPct(const Rational& from, const Rational& to) {
  if (from == 0) return Rational(0);
  return (from - to) / from * 100;
}

std::string WholePercent(const Rational& pct) {
  // Round half up on the exact value.
  return Floor(pct + Rational(1, 2)).str() + "%";
}

void AppendCsv(std::ostringstream& out, const Dataset& dataset, int k, const std::string& mode,
               const std::string& stage, const IgfVector& igf) {
  const AttributeSchema& schema = dataset.schema();
  for (const auto& [v, value] : igf.values) {
    out << k << ',' << mode << ',' << stage << ','
        << schema.attribute(schema.attribute_of(v)).name << ',' << schema.value_name(v) << ','
        << ToDecimalString(value, 12) << '\n';
  }
}

}  // namespace

std::vector<int> TopK(const Dataset& dataset, int k) {
  if (k < 0 || k > dataset.size()) throw Error("k outside [0, n]");
  std::vector<int> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (dataset.scaled_score(a) != dataset.scaled_score(b)) {
      return dataset.scaled_score(a) > dataset.scaled_score(b);
    }
    return dataset.id_rank(a) < dataset.id_rank(b);
  });
  order.resize(k);
  return order;
}

Report BuildReport(const Dataset& dataset, const ReportConfig& config) {
  if (config.ks.empty()) throw Error("report needs at least one k");
  Report report;
  for (int k : config.ks) {
    try {
      ReportRecord record;
      record.k = k;
      const DiversityConstraints constraints =
          ResolveConstraints(config.constraints, dataset, k, /*drop_beyond_k=*/true);

      const Outcome top = Outcome::Create(dataset, TopK(dataset, k));
      record.unconstrained_utility = top.utility();

      SolverOptions exact = config.leximin.solver;
      exact.stop_at_first_feasible = false;
      const Solution diversity =
          SolveInstance(dataset, constraints, IgfBounds(dataset, IgfMode::kRatio), exact);
      if (diversity.status == SolveStatus::kInfeasible) {
        throw Error("diversity constraints are infeasible for k = " + std::to_string(k));
      }
      if (diversity.status != SolveStatus::kOptimal) {
        throw Error("solver limit reached for k = " + std::to_string(k));
      }
      record.diversity_outcome = diversity.outcome;
      record.diversity_utility = diversity.objective;
      record.diversity_loss_pct = LossPct(record.unconstrained_utility, record.diversity_utility);

      for (IgfMode mode : config.modes) {
        ModeRecord m;
        m.mode = mode;
        m.before = ComputeIgfVector(dataset, *diversity.outcome, mode);
        LeximinTrace trace = LeximinSolve(dataset, constraints, mode, config.leximin);
        m.outcome = trace.final_solution.outcome;
        m.utility = trace.final_solution.objective;
        m.after = ComputeIgfVector(dataset, *m.outcome, mode);
        m.incremental_loss_pct = LossPct(record.diversity_utility, m.utility);
        m.rounds = std::move(trace.rounds);
        record.modes.push_back(std::move(m));
      }
      report.records.push_back(std::move(record));
    } catch (const Error& e) {
      report.complete = false;
      report.error = e.what();
      break;
    }
  }
  return report;
}

Json ReportToJson(const Dataset& dataset, const Report& report) {
  const AttributeSchema& schema = dataset.schema();
  Json records = Json::array();
  for (const ReportRecord& r : report.records) {
    Json modes = Json::array();
    for (const ModeRecord& m : r.modes) {
      Json rounds = Json::array();
      for (const LeximinRound& round : m.rounds) {
        Json frozen = Json::array();
        for (ValueId v : round.frozen) frozen.push_back(schema.value_name(v));
        rounds.push_back({{"q_star", RationalToJson(round.q_star)},
                          {"frozen", frozen},
                          {"method", round.method}});
      }
      modes.push_back({{"mode", ModeName(m.mode)},
                       {"leximin_utility", ToDecimalString(m.utility)},
                       {"incremental_loss_pct", RationalToJson(m.incremental_loss_pct)},
                       {"incremental_below_diversity_loss",
                        m.incremental_loss_pct <= r.diversity_loss_pct},
                       {"igf_before", IgfVectorToJson(dataset, m.before)},
                       {"igf_after", IgfVectorToJson(dataset, m.after)},
                       {"leximin_outcome", OutcomeToJson(dataset, *m.outcome)},
                       {"rounds", rounds}});
    }
    records.push_back({{"k", r.k},
                       {"unconstrained_utility", ToDecimalString(r.unconstrained_utility)},
                       {"diversity_utility", ToDecimalString(r.diversity_utility)},
                       {"diversity_loss_pct", RationalToJson(r.diversity_loss_pct)},
                       {"diversity_outcome", OutcomeToJson(dataset, *r.diversity_outcome)},
                       {"modes", modes}});
  }
  Json out = {{"complete", report.complete}, {"records", records}};
  if (!report.complete) out["error"] = report.error;
  return out;
}

std::string ReportToCsv(const Dataset& dataset, const Report& report) {
  std::ostringstream out;
  out << "k,mode,stage,attribute,value,igf\n";
  for (const ReportRecord& r : report.records) {
    for (const ModeRecord& m : r.modes) {
      AppendCsv(out, dataset, r.k, ModeName(m.mode), "diversity", m.before);
      AppendCsv(out, dataset, r.k, ModeName(m.mode), "balanced", m.after);
    }
  }
  return out.str();
}

std::string ReportTable(const Report& report) {
  std::vector<IgfMode> modes;
  for (const ReportRecord& r : report.records) {
    for (const ModeRecord& m : r.modes) {
      if (std::find(modes.begin(), modes.end(), m.mode) == modes.end()) modes.push_back(m.mode);
    }
  }
  std::ostringstream out;
  out << std::left << std::setw(6) << "k" << std::setw(11) << "diversity";
  for (IgfMode mode : modes) out << std::setw(7) << ModeName(mode);
  out << '\n';
  for (const ReportRecord& r : report.records) {
    out << std::setw(6) << r.k << std::setw(11) << WholePercent(r.diversity_loss_pct);
    for (IgfMode mode : modes) {
      std::string cell = "-";
      for (const ModeRecord& m : r.modes) {
        if (m.mode == mode) cell = WholePercent(m.incremental_loss_pct);
      }
      out << std::setw(7) << cell;
    }
    out << '\n';
  }
  if (!report.complete) out << "incomplete: " << report.error << '\n';
  return out.str();
}

}  // namespace igfair
