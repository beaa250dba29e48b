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

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "goml/expr/expr.hpp"

namespace goml {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Default feasibility tolerance used when labeling samples.
inline constexpr double kFeasibilityTol = 1e-8;

enum class Sense { kLe, kEq, kGe };

const char* to_string(Sense sense);

struct VarSpec {
  std::string name;
  int index = 0;
  double lower = -kInf;
  double upper = kInf;
  bool integral = false;
};

/// Axis-aligned box; lower/upper have equal length.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t dim() const { return lower.size(); }
  bool finite() const;
  bool contains(std::span<const double> x, double tol = 1e-9) const;
  std::vector<double> center() const;
  /// Restriction to the listed coordinates.
  Box subset(std::span<const int> indices) const;
};

struct LinearConstraint {
  std::vector<double> coeffs;
  double rhs = 0.0;
  Sense sense = Sense::kLe;
  std::string name;

  double activity(std::span<const double> x) const;
  /// Amount by which x violates the row (0 when satisfied).
  double violation(std::span<const double> x) const;
};

enum class ConstraintKind { kInequality, kEquality };

using ScalarFunction = std::function<double(std::span<const double>)>;

/// g(x) <= 0 or h(x) = 0, backed either by an expression (exact gradients)
/// or by an opaque callback (central-difference gradients).
class NonlinearConstraint {
 public:
  NonlinearConstraint() = default;

  static NonlinearConstraint from_expr(std::string name, expr::Expr e, ConstraintKind kind);
  static NonlinearConstraint from_function(std::string name, ScalarFunction f, std::vector<int> support,
                                           ConstraintKind kind);

  const std::string& name() const { return name_; }
  ConstraintKind kind() const { return kind_; }
  const std::vector<int>& support() const { return support_; }
  const std::optional<expr::Expr>& expression() const { return expression_; }

  /// Evaluates at the full-dimensional point x. Throws EvaluationError.
  double value(std::span<const double> x) const;

  /// Dense gradient over the full dimension of x.
  std::vector<double> gradient(std::span<const double> x) const;

  /// Violation: max(0, g) for inequalities, |h| for equalities.
  double violation(std::span<const double> x) const;

 private:
  std::string name_;
  ConstraintKind kind_ = ConstraintKind::kInequality;
  std::vector<int> support_;
  std::optional<expr::Expr> expression_;
  ScalarFunction function_;
};

/// Central-difference gradient with step 1e-6 * max(1, |x_i|).
std::vector<double> finite_difference_gradient(const ScalarFunction& f, std::span<const double> x,
                                               std::span<const int> coordinates);

/// Minimization objective: linear (coeffs . x + constant) or nonlinear.
struct Objective {
  std::vector<double> coeffs;
  double constant = 0.0;
  std::optional<NonlinearConstraint> nonlinear;

  bool is_linear() const { return !nonlinear.has_value(); }
  double value(std::span<const double> x) const;
  std::vector<double> gradient(std::span<const double> x) const;
};

struct Problem {
  std::string name;
  std::vector<VarSpec> vars;
  Objective objective;
  std::vector<LinearConstraint> linear;
  std::vector<NonlinearConstraint> nonlinear;
  std::optional<double> known_optimum;

  int dim() const { return static_cast<int>(vars.size()); }
  Box box() const;
  std::vector<bool> integral_mask() const;
  /// Throws SchemaError when the problem is malformed.
  void validate() const;
  /// Largest violation over linear rows, nonlinear constraints and bounds.
  double max_violation(std::span<const double> x) const;
};

enum class BoundSource { kUser, kInferred, kNone };

/// Problem whose nonlinear-involved variables all carry finite bounds.
struct StandardProblem {
  Problem problem;
  std::vector<BoundSource> lower_source;
  std::vector<BoundSource> upper_source;

  int dim() const { return problem.dim(); }
  Box box() const { return problem.box(); }
  /// Variables referenced by any nonlinear constraint or a nonlinear objective.
  std::vector<int> nonlinear_variables() const;
};

StandardProblem standardize(const Problem& problem);

enum class Direction { kMin, kMax };

/// Optimal value of min/max x_var over the linear rows and known bounds.
/// Throws UnboundedVariable or InfeasibleProblem.
double infer_bound(const StandardProblem& sp, int var, Direction direction);

/// 1 when the constraint holds at x within tol, else 0.
int label(const NonlinearConstraint& con, std::span<const double> x, double tol = kFeasibilityTol);

bool structurally_equal(const Problem& a, const Problem& b);

}  // namespace goml
