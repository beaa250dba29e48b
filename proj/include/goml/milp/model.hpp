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
#include <vector>

#include "goml/milp/lp.hpp"

namespace goml::milp {

enum class VarType { kContinuous, kBinary, kInteger };

struct MilpVar {
  double lower = 0.0;
  double upper = kInf;
  VarType type = VarType::kContinuous;
};

struct MilpRow {
  std::vector<Term> terms;
  Sense sense = Sense::kLe;
  double rhs = 0.0;
};

/// sqrt(sum_k (coeff_k x_var_k)^2) <= x_bound. Export only.
struct ConeRow {
  std::vector<Term> entries;
  int bound = 0;
};

/// A row whose right-hand side carries a big-M constant.
struct BigMEntry {
  int row = 0;
  double value = 0.0;
};

/// Variables and rows owned by one encoded surrogate.
struct SurrogateRecord {
  std::string key;
  int output = -1;  // -1 when the surrogate adds no output variable
  std::vector<int> aux;
  std::vector<int> binaries;
  std::vector<int> rows;
  int relax = -1;  // relaxation slack u_i, or -1
};

class MilpModel {
 public:
  int add_var(double lower, double upper, VarType type = VarType::kContinuous);
  int add_binary() { return add_var(0.0, 1.0, VarType::kBinary); }
  int add_row(std::vector<Term> terms, Sense sense, double rhs);
  void add_cone(ConeRow cone);
  void add_big_m(int row, double value) { big_m_.push_back({row, value}); }
  void add_record(SurrogateRecord record) { records_.push_back(std::move(record)); }

  void set_objective(int var, double coeff);
  void add_objective(int var, double coeff);
  void set_objective_constant(double c) { objective_constant_ = c; }
  void set_minimize(bool minimize) { minimize_ = minimize; }

  int num_vars() const { return static_cast<int>(vars_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const std::vector<MilpVar>& vars() const { return vars_; }
  std::vector<MilpVar>& vars() { return vars_; }
  const std::vector<MilpRow>& rows() const { return rows_; }
  const std::vector<ConeRow>& cones() const { return cones_; }
  const std::vector<BigMEntry>& big_m() const { return big_m_; }
  const std::vector<SurrogateRecord>& records() const { return records_; }
  const std::vector<double>& objective() const { return objective_; }
  double objective_constant() const { return objective_constant_; }
  bool minimize() const { return minimize_; }

  int num_integer() const;
  double objective_value(const std::vector<double>& x) const;
  /// Largest violation of rows, bounds and cones at x.
  double max_violation(const std::vector<double>& x) const;
  /// Largest distance of an integer or binary variable from an integer.
  double max_fractionality(const std::vector<double>& x) const;

  /// Continuous relaxation. Throws UnsupportedNorm when cones are present.
  LpProblem relaxation() const;

  /// Throws Error when a row references an undeclared variable or a value
  /// is not finite.
  void validate() const;

 private:
  std::vector<MilpVar> vars_;
  std::vector<MilpRow> rows_;
  std::vector<ConeRow> cones_;
  std::vector<BigMEntry> big_m_;
  std::vector<SurrogateRecord> records_;
  std::vector<double> objective_;
  double objective_constant_ = 0.0;
  bool minimize_ = true;
};

/// Same variables, types, bounds, rows, cones and objective.
bool structurally_equal(const MilpModel& a, const MilpModel& b);

struct MilpOptions {
  double time_limit = kInf;  // seconds
  double gap_tol = 1e-6;
  std::int64_t node_limit = 1'000'000;
  double integrality_tol = 1e-9;
};

struct MilpSolution {
  SolveStatus status = SolveStatus::kInfeasible;
  std::vector<double> x;
  double objective = kInf;
  double bound = -kInf;
  double gap = kInf;
  std::int64_t nodes = 0;
};

/// Branch-and-bound over LP relaxations with best-bound node selection and
/// most-fractional branching. The status is kTimeLimit when the time or node
/// limit stops the search; x then holds the incumbent, if any.
MilpSolution solve_milp(const MilpModel& model, const MilpOptions& options = {});

}  // namespace goml::milp
