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

// Command implementations behind the igfair binary. Each command reads its
// inputs from a RunConfig, writes its files into config.out and returns the
// process exit code.

#ifndef IGFAIR_CLI_H_
#define IGFAIR_CLI_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "igfair/metrics.h"
#include "igfair/rational.h"
#include "igfair/solver.h"

namespace igfair {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitLimit = 3;

struct RunConfig {
  std::string data;
  std::string schema;
  std::string constraints;  // empty: no diversity bounds
  IgfMode mode = IgfMode::kRatio;
  std::vector<int> ks;       // solve/leximin/validate take exactly one
  Rational epsilon = Rational(1, 1000);
  std::optional<Rational> q;  // uniform IGF floor for solve/validate
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  SolverOptions solver;
  // gen
  std::string profile;  // empty: built-in minority profile
  int n = 200;
  // validate
  std::string ranking;
};

int CmdSolve(const RunConfig& config, std::ostream& out, std::ostream& err);
int CmdLeximin(const RunConfig& config, std::ostream& out, std::ostream& err);
int CmdReport(const RunConfig& config, std::ostream& out, std::ostream& err);
int CmdGen(const RunConfig& config, std::ostream& out, std::ostream& err);
int CmdValidate(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv and dispatches to a command.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace igfair

#endif  // IGFAIR_CLI_H_
