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


// Projected gradient refinement of MILP incumbents.

#pragma once

#include <span>
#include <vector>

#include "goml/core/problem.hpp"

namespace goml::refiner {

struct ProjectionOptions {
  int max_sweeps = 500;
  double tol = 1e-9;
};

/// Dykstra's alternating projection onto the rows and the box. Coordinates
/// flagged in `frozen` keep their values. Throws ProjectionStall when the
/// sweeps end with a violation above 1e-6.
std::vector<double> project(std::span<const double> x, const std::vector<LinearConstraint>& rows, const Box& box,
                            const std::vector<bool>& frozen, const ProjectionOptions& options = {});

struct PgdConfig {
  int iterations = 10;
  double initial_step = 1.0;
  int max_halvings = 20;
  /// Momentum coefficient gamma in [0, 1).
  double momentum = 0.9;
  bool use_momentum = true;
  /// Violation penalty mu.
  double penalty = 1e3;
  double step_tol = 1e-9;
  /// Also project onto first-order models of the nonlinear constraints.
  bool linearize = true;

  /// Throws Error on out-of-range settings.
  void validate() const;
};

struct MeritState {
  std::vector<double> x;
  double objective = 0.0;
  /// Nonlinear constraint violations, in problem order.
  std::vector<double> violations;
  /// Largest violation over bounds, linear rows and nonlinear constraints.
  double max_violation = 0.0;
  double merit = 0.0;
  int iterations = 0;
  /// An evaluation failed; x is the best point before the failure.
  bool evaluation_failed = false;
};

/// f + mu * (sum of nonlinear and linear row violations). Throws EvaluationError.
MeritState evaluate_merit(const Problem& p, std::span<const double> x, double penalty);

/// Projected gradient descent on the merit function from x0 with
/// backtracking and conditional momentum. Integral variables stay fixed.
/// Returns the best iterate; its merit never exceeds that of x0.
MeritState pgd_improve(const StandardProblem& sp, std::span<const double> x0, const PgdConfig& config = {});

}  // namespace goml::refiner
