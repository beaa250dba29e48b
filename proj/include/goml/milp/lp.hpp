// Copyright 2026 The GoML Authors
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

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <optional>
#include <vector>

#include "goml/core/problem.hpp"

namespace goml::milp {

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kTimeLimit };

const char* to_string(SolveStatus status);

struct Term {
  int var = 0;
  double coeff = 0.0;
};

struct Row {
  std::vector<Term> terms;
  Sense sense = Sense::kLe;
  double rhs = 0.0;
};

/// min/max c.x + constant  s.t.  rows, lower <= x <= upper.
struct LpProblem {
  int num_vars = 0;
  std::vector<double> objective;
  double objective_constant = 0.0;
  bool minimize = true;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<Row> rows;

  /// Throws Error when dimensions disagree.
  void validate() const;
};

/// Final basis of a solve over structural and slack columns (slack r has
/// index num_vars + r). Usable as a warm start for a problem with the same
/// rows and different bounds.
struct LpBasis {
  std::vector<int> basic;
  std::vector<bool> at_upper;
  /// Row-major basis-inverse tableau over structural and slack columns, and
  /// the number of pivots applied since it was last refactored.
  std::vector<double> tableau;
  int pivots_since_refactor = 0;
};

struct LpOptions {
  /// Pivot budget; 0 selects a size-dependent default.
  std::int64_t max_pivots = 0;
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  /// Starting basis; the solve falls back to a cold start when it is not
  /// dual or primal feasible or goes singular.
  const LpBasis* warm_start = nullptr;
};

struct LpSolution {
  SolveStatus status = SolveStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  std::int64_t pivots = 0;
  /// Set when optimal with no artificial column left in the basis.
  std::optional<LpBasis> basis;
};

/// Two-phase bounded-variable primal simplex on a dense tableau.
///
/// Phase one minimizes the sum of artificial variables; phase two the
/// original objective. Pricing is Dantzig's rule, switching to Bland's
/// rule after a run of degenerate pivots. The ratio test is Harris'
/// two-pass test. A warm start runs the bounded dual simplex from the given
/// basis first. Throws NumericalFailure when the pivot budget runs out.
LpSolution solve_lp(const LpProblem& lp, const LpOptions& options = {});

/// Largest violation of rows and bounds at x.
double max_residual(const LpProblem& lp, const std::vector<double>& x);

}  // namespace goml::milp
