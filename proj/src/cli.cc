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

#include "igfair/cli.h"

#include <filesystem>
#include <sstream>

#include "CLI11.hpp"

#include "igfair/constraints.h"
#include "igfair/io.h"
#include "igfair/leximin.h"
#include "igfair/model.h"
#include "igfair/prefix.h"
#include "igfair/report.h"
#include "igfair/synthgen.h"

namespace igfair {
namespace {

namespace fs = std::filesystem;

struct Inputs {
  Dataset dataset;
  ConstraintSpec spec;
};

Inputs LoadInputs(const RunConfig& config) {
  if (config.data.empty()) throw Error("--data is required");
  if (config.schema.empty()) throw Error("--schema is required");
  Inputs in;
  AttributeSchema schema = SchemaFromJson(ReadJsonFile(config.schema));
  in.dataset = ReadDatasetCsv(config.data, schema);
  if (!config.constraints.empty()) {
    in.spec = ConstraintSpecFromJson(ReadJsonFile(config.constraints));
  }
  return in;
}

int SingleK(const RunConfig& config, const ConstraintSpec& spec) {
  if (config.ks.size() > 1) throw Error("this command takes a single --k");
  if (config.ks.size() == 1) {
    if (config.ks[0] < 1) throw Error("k must be at least 1");
    return config.ks[0];
  }
  if (spec.k) return *spec.k;
  throw Error("--k is required");
}

fs::path OutDir(const RunConfig& config) {
  fs::path dir = config.out.empty() ? fs::path(".") : fs::path(config.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir.string() + "'");
  return dir;
}

Json ViolationsJson(const Dataset& dataset, const ValidationReport& report) {
  const AttributeSchema& schema = dataset.schema();
  Json list = Json::array();
  for (const Violation& v : report.violations) {
    Json j = {{"kind", KindName(v.kind)}};
    if (v.value >= 0) j["value"] = schema.value_name(v.value);
    if (v.attribute >= 0) j["attribute"] = schema.attribute(v.attribute).name;
    j["position"] = v.position;
    j["demand"] = v.demand;
    j["limit"] = v.limit;
    j["message"] = v.message;
    list.push_back(std::move(j));
  }
  return list;
}

int ReportInfeasible(const Dataset& dataset, const ValidationReport& report,
                     const std::string& reason, std::ostream& out) {
  Json j = {{"status", "infeasible"},
            {"reason", reason},
            {"violations", ViolationsJson(dataset, report)},
            {"warnings", report.warnings}};
  out << DumpJson(j);
  return kExitInfeasible;
}

Json RankingJson(const Dataset& dataset, const Outcome& outcome, const std::string& status,
                 IgfMode mode) {
  Json j = {{"status", status}, {"mode", ModeName(mode)}};
  const Json body = OutcomeToJson(dataset, outcome);
  for (const auto& [key, value] : body.items()) j[key] = value;
  return j;
}

// Problems found when checking a ranking against the constraints and a
// uniform IGF floor; empty when the ranking is valid.
std::vector<std::string> CheckRanking(const Dataset& dataset, const std::vector<int>& ranking,
                                      const DiversityConstraints& constraints, IgfMode mode,
                                      const IgfBounds& bounds) {
  std::vector<std::string> problems;
  if (static_cast<int>(ranking.size()) != constraints.k()) {
    problems.push_back("ranking has " + std::to_string(ranking.size()) + " items, expected " +
                       std::to_string(constraints.k()));
    return problems;
  }
  if (!SatisfiesPrefixBounds(dataset, ranking, constraints)) {
    problems.push_back("ranking violates a prefix diversity bound");
  }
  const Outcome outcome = Outcome::Create(dataset, ranking);
  for (const auto& [v, entry] : bounds.entries()) {
    if (entry.q == 0) continue;
    const Rational igf = Igf(mode, dataset, outcome, v);
    if (igf < entry.q) {
      problems.push_back("IGF of '" + dataset.schema().value_name(v) + "' is " +
                         ToFractionString(igf) + " < " + ToFractionString(entry.q));
    }
  }
  return problems;
}

void RoundTrip(const Dataset& dataset, const fs::path& path, const Outcome& outcome,
               const DiversityConstraints& constraints, IgfMode mode, const IgfBounds& bounds) {
  const std::vector<int> ranking = RankingFromJson(ReadJsonFile(path), dataset);
  if (ranking != std::vector<int>(outcome.ranking().begin(), outcome.ranking().end())) {
    throw Error("round-trip check failed: " + path.string() + " does not reproduce the ranking");
  }
  const std::vector<std::string> problems = CheckRanking(dataset, ranking, constraints, mode, bounds);
  if (!problems.empty()) throw Error("round-trip check failed: " + problems.front());
}

std::vector<std::string> Names(const Dataset& dataset, const std::vector<ValueId>& values) {
  std::vector<std::string> out;
  for (ValueId v : values) out.push_back(dataset.schema().value_name(v));
  return out;
}

Json TraceJson(const Dataset& dataset, const LeximinTrace& trace, const Rational& diversity_utility) {
  Json rounds = Json::array();
  for (const LeximinRound& round : trace.rounds) {
    Json steps = Json::array();
    for (const BisectionStep& s : round.steps) {
      steps.push_back({{"lo", ToFractionString(s.lo)},
                       {"hi", ToFractionString(s.hi)},
                       {"q", ToFractionString(s.q)},
                       {"feasible", s.feasible}});
    }
    rounds.push_back({{"floating", Names(dataset, round.floating)},
                      {"steps", steps},
                      {"q_star", RationalToJson(round.q_star)},
                      {"frozen", Names(dataset, round.frozen)},
                      {"method", round.method}});
  }
  Json bounds = Json::array();
  for (const auto& [v, entry] : trace.final_bounds.entries()) {
    bounds.push_back({{"value", dataset.schema().value_name(v)}, {"q", RationalToJson(entry.q)}});
  }
  return Json{{"mode", ModeName(trace.mode)},
              {"epsilon", ToFractionString(trace.epsilon)},
              {"rounds", rounds},
              {"final_bounds", bounds},
              {"diversity_utility", ToDecimalString(diversity_utility)},
              {"utility", ToDecimalString(trace.final_solution.objective)}};
}

std::string IdList(const Dataset& dataset, const Outcome& outcome) {
  std::string s;
  for (int i : outcome.ranking()) {
    if (!s.empty()) s += ',';
    s += dataset.item(i).id;
  }
  return s;
}

}  // namespace

int CmdSolve(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Inputs in = LoadInputs(config);
  const Dataset& ds = in.dataset;
  const int k = SingleK(config, in.spec);
  const DiversityConstraints constraints = ResolveConstraints(in.spec, ds, k);
  const ValidationReport validation = ValidateConstraints(constraints, ds);
  for (const std::string& w : validation.warnings) err << "warning: " << w << '\n';
  if (!validation.ok()) return ReportInfeasible(ds, validation, "constraints cannot be met", out);

  IgfBounds bounds(ds, config.mode);
  if (config.q) bounds.SetAll(*config.q);
  const Solution sol = SolveInstance(ds, constraints, bounds, config.solver);
  if (sol.status == SolveStatus::kInfeasible) {
    return ReportInfeasible(ds, validation, "no ranking meets every diversity bound and IGF floor",
                            out);
  }
  if (!sol.outcome) {
    out << DumpJson(Json{{"status", StatusName(sol.status)}});
    return kExitLimit;
  }
  const fs::path dir = OutDir(config);
  WriteTextFile(dir / "ranking.json",
                DumpJson(RankingJson(ds, *sol.outcome, StatusName(sol.status), config.mode)));
  Json igf = {{"ratio", IgfVectorToJson(ds, ComputeIgfVector(ds, *sol.outcome, IgfMode::kRatio))},
              {"agg", IgfVectorToJson(ds, ComputeIgfVector(ds, *sol.outcome, IgfMode::kAggregated))}};
  WriteTextFile(dir / "igf.json", DumpJson(igf));
  RoundTrip(ds, dir / "ranking.json", *sol.outcome, constraints, config.mode, bounds);

  out << StatusName(sol.status) << " utility " << ToDecimalString(sol.objective) << " ranking "
      << IdList(ds, *sol.outcome) << '\n';
  return sol.status == SolveStatus::kOptimal ? kExitOk : kExitLimit;
}

int CmdLeximin(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Inputs in = LoadInputs(config);
  const Dataset& ds = in.dataset;
  const int k = SingleK(config, in.spec);
  const DiversityConstraints constraints = ResolveConstraints(in.spec, ds, k);
  const ValidationReport validation = ValidateConstraints(constraints, ds);
  for (const std::string& w : validation.warnings) err << "warning: " << w << '\n';
  if (!validation.ok()) return ReportInfeasible(ds, validation, "constraints cannot be met", out);

  SolverOptions exact = config.solver;
  exact.stop_at_first_feasible = false;
  const Solution before = SolveInstance(ds, constraints, IgfBounds(ds, config.mode), exact);
  if (before.status == SolveStatus::kInfeasible) {
    return ReportInfeasible(ds, validation, "no ranking meets every diversity bound", out);
  }
  if (before.status != SolveStatus::kOptimal) {
    err << "error: solver limit reached on the diversity-only problem\n";
    return kExitLimit;
  }
  LeximinOptions options;
  options.epsilon = config.epsilon;
  options.solver = config.solver;
  const LeximinTrace trace = LeximinSolve(ds, constraints, config.mode, options);
  const Outcome& after = *trace.final_solution.outcome;

  const fs::path dir = OutDir(config);
  WriteTextFile(dir / "trace.json", DumpJson(TraceJson(ds, trace, before.objective)));
  WriteTextFile(dir / "ranking.json", DumpJson(RankingJson(ds, after, "optimal", config.mode)));
  Json igf = {{"mode", ModeName(config.mode)},
              {"before", IgfVectorToJson(ds, ComputeIgfVector(ds, *before.outcome, config.mode))},
              {"after", IgfVectorToJson(ds, ComputeIgfVector(ds, after, config.mode))}};
  WriteTextFile(dir / "igf.json", DumpJson(igf));
  RoundTrip(ds, dir / "ranking.json", after, constraints, config.mode, trace.final_bounds);

  out << "leximin utility " << ToDecimalString(trace.final_solution.objective) << " (diversity-only "
      << ToDecimalString(before.objective) << ") rounds " << trace.rounds.size() << " ranking "
      << IdList(ds, after) << '\n';
  return kExitOk;
}

int CmdReport(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Inputs in = LoadInputs(config);
  ReportConfig rc;
  rc.constraints = in.spec;
  rc.ks = config.ks;
  if (rc.ks.empty() && in.spec.k) rc.ks = {*in.spec.k};
  if (rc.ks.empty()) throw Error("--k is required");
  rc.leximin.epsilon = config.epsilon;
  rc.leximin.solver = config.solver;
  const Report report = BuildReport(in.dataset, rc);

  const fs::path dir = OutDir(config);
  WriteTextFile(dir / "report.json", DumpJson(ReportToJson(in.dataset, report)));
  WriteTextFile(dir / "report.csv", ReportToCsv(in.dataset, report));
  out << ReportTable(report);
  if (!report.complete) {
    err << "error: " << report.error << '\n';
    return kExitInputError;
  }
  return kExitOk;
}

int CmdGen(const RunConfig& config, std::ostream& out, std::ostream&) {
  GroupProfile profile = config.profile.empty() ? MinorityProfile(config.seed.value_or(0))
                                                : ProfileFromJson(ReadJsonFile(config.profile));
  if (config.seed) profile.seed = *config.seed;
  const Dataset ds = Generate(profile, config.n);
  const fs::path dir = OutDir(config);
  WriteTextFile(dir / "data.csv", DatasetToCsv(ds));
  WriteTextFile(dir / "schema.json", DumpJson(SchemaToJson(ds.schema())));
  out << "generated " << ds.size() << " items (seed " << profile.seed << ")\n";
  return kExitOk;
}

int CmdValidate(const RunConfig& config, std::ostream& out, std::ostream&) {
  const Inputs in = LoadInputs(config);
  const Dataset& ds = in.dataset;
  const int k = SingleK(config, in.spec);
  const DiversityConstraints constraints = ResolveConstraints(in.spec, ds, k);
  const ValidationReport validation = ValidateConstraints(constraints, ds);
  Json j = {{"ok", validation.ok()},
            {"n", ds.size()},
            {"k", k},
            {"violations", ViolationsJson(ds, validation)},
            {"warnings", validation.warnings}};
  bool ok = validation.ok();
  if (!config.ranking.empty()) {
    IgfBounds bounds(ds, config.mode);
    if (config.q) bounds.SetAll(*config.q);
    const std::vector<int> ranking = RankingFromJson(ReadJsonFile(config.ranking), ds);
    const std::vector<std::string> problems = CheckRanking(ds, ranking, constraints, config.mode, bounds);
    j["ranking"] = {{"ok", problems.empty()}, {"problems", problems}};
    ok = ok && problems.empty();
  }
  out << DumpJson(j);
  return ok ? kExitOk : kExitInfeasible;
}

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Top-k selection and ranking under diversity and in-group fairness constraints",
               "igfair"};
  app.require_subcommand(1);

  RunConfig config;
  std::string mode = "ratio";
  std::string epsilon = "0.001";
  std::string q;
  double time_limit = 0.0;
  std::int64_t node_limit = 0;
  std::uint64_t seed = 0;

  auto add_inputs = [&](CLI::App* sub) {
    sub->add_option("--data", config.data, "Item CSV: id,score,<attribute columns>");
    sub->add_option("--schema", config.schema, "Attribute schema JSON");
    sub->add_option("--constraints", config.constraints, "Constraint JSON (explicit or proportional)");
    sub->add_option("--k", config.ks, "Selection size (report: comma-separated list)")
        ->delimiter(',');
  };
  auto add_solver = [&](CLI::App* sub) {
    sub->add_option("--mode", mode, "IGF measure")->check(CLI::IsMember({"ratio", "agg"}));
    sub->add_option("--epsilon", epsilon, "Leximin bisection tolerance");
    sub->add_option("--time-limit", time_limit, "Per-solve time limit in seconds")
        ->check(CLI::PositiveNumber);
    sub->add_option("--node-limit", node_limit, "Per-solve node limit")->check(CLI::PositiveNumber);
    sub->add_option("--workers", config.solver.workers, "Branch-and-bound worker threads")
        ->check(CLI::Range(1, 256));
    sub->add_option("--out", config.out, "Output directory");
  };

  CLI::App* solve = app.add_subcommand("solve", "Utility-maximizing ranking for fixed IGF floors");
  add_inputs(solve);
  add_solver(solve);
  solve->add_option("--q", q, "Uniform IGF floor for every group");

  CLI::App* leximin = app.add_subcommand("leximin", "Leximin-balanced ranking");
  add_inputs(leximin);
  add_solver(leximin);

  CLI::App* report = app.add_subcommand("report", "Utility loss across k for both IGF modes");
  add_inputs(report);
  add_solver(report);

  CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic item pool");
  gen->add_option("--profile", config.profile, "Profile JSON (default: built-in minority profile)");
  gen->add_option("--n", config.n, "Number of items")->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed, "Random seed (overrides the profile's)");
  gen->add_option("--out", config.out, "Output directory");

  CLI::App* validate = app.add_subcommand("validate", "Check constraints, and optionally a ranking");
  add_inputs(validate);
  validate->add_option("--mode", mode, "IGF measure")->check(CLI::IsMember({"ratio", "agg"}));
  validate->add_option("--q", q, "Uniform IGF floor the ranking must meet");
  validate->add_option("--ranking", config.ranking, "ranking.json to re-check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    config.mode = ParseMode(mode);
    config.epsilon = ParseRational(epsilon);
    if (config.epsilon <= 0 || config.epsilon > 1) throw Error("--epsilon must lie in (0, 1]");
    if (!q.empty()) {
      config.q = ParseRational(q);
      if (*config.q < 0 || *config.q > 1) throw Error("--q must lie in [0, 1]");
    }
    if (time_limit > 0) config.solver.time_limit_seconds = time_limit;
    if (node_limit > 0) config.solver.node_limit = node_limit;
    if (gen->count("--seed") > 0) config.seed = seed;

    if (solve->parsed()) return CmdSolve(config, out, err);
    if (leximin->parsed()) return CmdLeximin(config, out, err);
    if (report->parsed()) return CmdReport(config, out, err);
    if (gen->parsed()) return CmdGen(config, out, err);
    if (validate->parsed()) return CmdValidate(config, out, err);
  } catch (const SolverLimitError& e) {
    err << "error: " << e.what() << '\n';
    return kExitLimit;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace igfair
