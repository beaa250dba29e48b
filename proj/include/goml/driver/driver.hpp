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


// End-to-end global optimization: sampling, surrogate selection, grid search
// over robustness and relaxation settings, and refinement.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "goml/core/error.hpp"
#include "goml/core/problem.hpp"
#include "goml/encoder/encoder.hpp"
#include "goml/learners/train.hpp"
#include "goml/milp/model.hpp"
#include "goml/refiner/refiner.hpp"
#include "goml/sampler/sampler.hpp"

namespace goml::driver {

enum class SolverKind { kBuiltin, kExternal };

struct RunConfig {
  sampler::SamplerConfig sampler;
  learners::SelectionConfig learners;
  refiner::PgdConfig pgd;
  std::vector<double> rhos{0.0, 0.01, 0.1, 1.0};
  /// Relaxation penalties; nullopt is the unrelaxed cell.
  std::vector<std::optional<double>> lambdas{std::nullopt, 1e2, 1e4};
  encoder::UncertaintyNorm norm = encoder::UncertaintyNorm::kOne;
  double time_limit = 1500.0;
  std::uint64_t seed = 0;
  bool oct_sampling = true;
  bool robustness = true;
  bool relaxation = true;
  bool momentum = true;
  SolverKind solver = SolverKind::kBuiltin;
  /// Command for the external solver; empty reads GOML_EXTERNAL_SOLVER_CMD.
  std::string external_command;
  /// Worker threads for sampling and training; 0 uses the hardware count.
  unsigned threads = 0;
  /// Largest violation for a refined point to count as feasible.
  double feasibility_tol = 1e-6;

  /// Throws Error on empty grids or a non-positive time limit.
  void validate() const;
};

struct PhaseTimes {
  double sampling = 0.0;
  double training = 0.0;
  double encoding = 0.0;
  double solving = 0.0;
  double refining = 0.0;

  double grid() const { return encoding + solving + refining; }
};

struct SurrogateReport {
  std::string name;
  Task task = Task::kClassifier;
  learners::Family family = learners::Family::kSvm;
  double validation_score = 0.0;
  /// The samples had one label only and a constant model stands in.
  bool constant = false;
  sampler::StageSizes samples;
};

struct CellReport {
  double rho = 0.0;
  std::optional<double> lambda;
  milp::SolveStatus status = milp::SolveStatus::kInfeasible;
  /// The unrelaxed model was infeasible and the relaxed one was solved.
  bool relaxed = false;
  double relaxation_total = 0.0;
  std::int64_t nodes = 0;
  bool has_point = false;
  std::vector<double> milp_x;
  /// MILP objective and true objective at the MILP point.
  double milp_objective = 0.0;
  double milp_true_objective = 0.0;
  double milp_violation = 0.0;
  refiner::MeritState refined;
  bool feasible = false;
  double seconds = 0.0;
  bool skipped = false;
  /// Same encoded model as an earlier cell; its outcome was reused.
  bool reused = false;
};

enum class RunStatus { kFeasible, kInfeasible, kTimeLimit };

const char* to_string(RunStatus status);

struct RunReport {
  std::string problem;
  std::uint64_t seed = 0;
  RunStatus status = RunStatus::kInfeasible;
  bool has_point = false;
  std::vector<double> x;
  std::vector<std::string> var_names;
  double objective = 0.0;
  double merit = 0.0;
  std::vector<std::pair<std::string, double>> violations;
  double max_violation = 0.0;
  double rho = 0.0;
  std::optional<double> lambda;
  PhaseTimes times;
  double total_seconds = 0.0;
  std::vector<SurrogateReport> surrogates;
  std::vector<CellReport> cells;
  std::uint64_t training_calls = 0;
  std::optional<double> known_optimum;
};

/// Every grid cell was infeasible, relaxed or not.
class InfeasibleApproximation : public Error {
 public:
  InfeasibleApproximation(const std::string& message, RunReport report)
      : Error(message), report_(std::move(report)) {}
  const RunReport& report() const { return report_; }

 private:
  RunReport report_;
};

/// Surrogates trained for one standard problem, reusable across cells.
struct TrainedSurrogates {
  encoder::SurrogateSet set;
  std::vector<SurrogateReport> reports;
};

/// Samples every nonlinear constraint (and a nonlinear objective) and
/// selects one surrogate for each.
TrainedSurrogates train_surrogates(const StandardProblem& sp, const RunConfig& config, PhaseTimes* times = nullptr);

RunReport solve_global(const Problem& problem, const RunConfig& config = {});

/// Structured text report; see docs/report-format.md.
std::string format_report(const RunReport& report);

/// Random instance with linear objective, box [-2, 2]^n and m constraints
/// built from random quadratics Q_i: the first floor(m/2) bound a sigmoid of
/// Q_i, the rest a ratio Q_i / (1 + exp(-Q_i)).
Problem generate_quadratic_sigmoid(int n, int m, std::uint64_t seed);

/// Text of a built-in benchmark: "illustrative", "speed-reducer".
/// Throws Error for unknown names.
std::string builtin_problem_text(const std::string& name);

}  // namespace goml::driver
