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

#include "goml/core/problem.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "goml/core/error.hpp"
#include "goml/milp/lp.hpp"

namespace goml {

const char* to_string(Sense sense) {
  switch (sense) {
    case Sense::kLe: return "<=";
    case Sense::kEq: return "==";
    case Sense::kGe: return ">=";
  }
  return "?";
}

bool Box::finite() const {
  for (std::size_t i = 0; i < dim(); ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i])) return false;
  }
  return true;
}

bool Box::contains(std::span<const double> x, double tol) const {
  if (x.size() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (x[i] < lower[i] - tol || x[i] > upper[i] + tol) return false;
  }
  return true;
}

std::vector<double> Box::center() const {
  std::vector<double> c(dim());
  for (std::size_t i = 0; i < dim(); ++i) c[i] = 0.5 * (lower[i] + upper[i]);
  return c;
}

Box Box::subset(std::span<const int> indices) const {
  Box out;
  for (int i : indices) {
    out.lower.push_back(lower.at(static_cast<std::size_t>(i)));
    out.upper.push_back(upper.at(static_cast<std::size_t>(i)));
  }
  return out;
}

double LinearConstraint::activity(std::span<const double> x) const {
  double a = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) a += coeffs[i] * x[i];
  return a;
}

double LinearConstraint::violation(std::span<const double> x) const {
  const double a = activity(x);
  switch (sense) {
    case Sense::kLe: return std::max(0.0, a - rhs);
    case Sense::kGe: return std::max(0.0, rhs - a);
    case Sense::kEq: return std::fabs(a - rhs);
  }
  return 0.0;
}

NonlinearConstraint NonlinearConstraint::from_expr(std::string name, expr::Expr e, ConstraintKind kind) {
  NonlinearConstraint c;
  c.name_ = std::move(name);
  c.kind_ = kind;
  c.support_ = e.support();
  c.expression_ = std::move(e);
  return c;
}

NonlinearConstraint NonlinearConstraint::from_function(std::string name, ScalarFunction f,
                                                       std::vector<int> support, ConstraintKind kind) {
  NonlinearConstraint c;
  c.name_ = std::move(name);
  c.kind_ = kind;
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  c.support_ = std::move(support);
  c.function_ = std::move(f);
  return c;
}

double NonlinearConstraint::value(std::span<const double> x) const {
  double v;
  if (expression_) {
    v = expression_->eval(x);
  } else if (function_) {
    v = function_(x);
  } else {
    throw EvaluationError("constraint '" + name_ + "' has no evaluator");
  }
  if (!std::isfinite(v)) throw EvaluationError("constraint '" + name_ + "' evaluated to a non-finite value");
  return v;
}

std::vector<double> finite_difference_gradient(const ScalarFunction& f, std::span<const double> x,
                                               std::span<const int> coordinates) {
  std::vector<double> g(x.size(), 0.0);
  std::vector<double> probe(x.begin(), x.end());
  for (int i : coordinates) {
    const auto k = static_cast<std::size_t>(i);
    const double h = 1e-6 * std::max(1.0, std::fabs(x[k]));
    probe[k] = x[k] + h;
    const double up = f(probe);
    probe[k] = x[k] - h;
    const double down = f(probe);
    probe[k] = x[k];
    g[k] = (up - down) / (2.0 * h);
  }
  return g;
}

std::vector<double> NonlinearConstraint::gradient(std::span<const double> x) const {
  if (expression_) return expression_->gradient(x);
  return finite_difference_gradient([this](std::span<const double> p) { return value(p); }, x, support_);
}

double NonlinearConstraint::violation(std::span<const double> x) const {
  const double v = value(x);
  return kind_ == ConstraintKind::kEquality ? std::fabs(v) : std::max(0.0, v);
}

double Objective::value(std::span<const double> x) const {
  if (nonlinear) return nonlinear->value(x) + constant;
  double v = constant;
  for (std::size_t i = 0; i < coeffs.size(); ++i) v += coeffs[i] * x[i];
  return v;
}

std::vector<double> Objective::gradient(std::span<const double> x) const {
  if (nonlinear) return nonlinear->gradient(x);
  std::vector<double> g(x.size(), 0.0);
  for (std::size_t i = 0; i < coeffs.size(); ++i) g[i] = coeffs[i];
  return g;
}

Box Problem::box() const {
  Box b;
  for (const auto& v : vars) {
    b.lower.push_back(v.lower);
    b.upper.push_back(v.upper);
  }
  return b;
}

std::vector<bool> Problem::integral_mask() const {
  std::vector<bool> mask;
  for (const auto& v : vars) mask.push_back(v.integral);
  return mask;
}

void Problem::validate() const {
  if (vars.empty()) throw SchemaError("problem has no variables");
  const auto n = vars.size();
  std::set<std::string> names;
  for (std::size_t i = 0; i < n; ++i) {
    if (vars[i].index != static_cast<int>(i)) throw SchemaError("variable indices must be 0..n-1 in order");
    if (!names.insert(vars[i].name).second) throw SchemaError("duplicate variable '" + vars[i].name + "'");
    if (vars[i].lower > vars[i].upper) throw SchemaError("variable '" + vars[i].name + "' has lower > upper");
  }
  if (objective.is_linear() && objective.coeffs.size() != n) {
    throw SchemaError("linear objective length differs from variable count");
  }
  for (const auto& row : linear) {
    if (row.coeffs.size() != n) throw SchemaError("linear constraint '" + row.name + "' has wrong length");
  }
  for (const auto& con : nonlinear) {
    for (int i : con.support()) {
      if (i < 0 || i >= static_cast<int>(n)) {
        throw SchemaError("constraint '" + con.name() + "' references a variable outside the problem");
      }
    }
  }
}

double Problem::max_violation(std::span<const double> x) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    worst = std::max({worst, vars[i].lower - x[i], x[i] - vars[i].upper});
  }
  for (const auto& row : linear) worst = std::max(worst, row.violation(x));
  for (const auto& con : nonlinear) worst = std::max(worst, con.violation(x));
  return worst;
}

std::vector<int> StandardProblem::nonlinear_variables() const {
  std::set<int> vars;
  for (const auto& con : problem.nonlinear) vars.insert(con.support().begin(), con.support().end());
  if (problem.objective.nonlinear) {
    const auto& s = problem.objective.nonlinear->support();
    vars.insert(s.begin(), s.end());
  }
  return {vars.begin(), vars.end()};
}

namespace {

// Affine expression-backed constraints become linear rows.
std::optional<LinearConstraint> linearize(const NonlinearConstraint& con, int n) {
  if (!con.expression()) return std::nullopt;
  auto form = expr::as_affine(*con.expression(), n);
  if (!form) return std::nullopt;
  LinearConstraint row;
  row.coeffs = std::move(form->coeffs);
  row.rhs = -form->constant;
  row.sense = con.kind() == ConstraintKind::kEquality ? Sense::kEq : Sense::kLe;
  row.name = con.name();
  return row;
}

// Tightens variable bounds from single-variable rows; returns false when
// the row does not have exactly one nonzero coefficient.
bool absorb_bound(const LinearConstraint& row, std::vector<VarSpec>& vars) {
  int found = -1;
  for (std::size_t i = 0; i < row.coeffs.size(); ++i) {
    if (row.coeffs[i] == 0.0) continue;
    if (found >= 0) return false;
    found = static_cast<int>(i);
  }
  if (found < 0) {
    const double violation = row.violation(std::vector<double>(row.coeffs.size(), 0.0));
    if (violation > 0.0) throw InfeasibleProblem("constant linear constraint '" + row.name + "' is violated");
    return true;
  }
  const double a = row.coeffs[static_cast<std::size_t>(found)];
  const double value = row.rhs / a;
  VarSpec& v = vars[static_cast<std::size_t>(found)];
  Sense sense = row.sense;
  if (a < 0.0 && sense != Sense::kEq) sense = sense == Sense::kLe ? Sense::kGe : Sense::kLe;
  if (sense != Sense::kGe) v.upper = std::min(v.upper, value);
  if (sense != Sense::kLe) v.lower = std::max(v.lower, value);
  return true;
}

}  // namespace

StandardProblem standardize(const Problem& problem) {
  problem.validate();
  StandardProblem sp;
  Problem& p = sp.problem;
  p.name = problem.name;
  p.vars = problem.vars;
  p.known_optimum = problem.known_optimum;
  const int n = problem.dim();

  std::vector<LinearConstraint> rows = problem.linear;
  for (const auto& con : problem.nonlinear) {
    if (auto row = linearize(con, n)) {
      rows.push_back(std::move(*row));
    } else {
      p.nonlinear.push_back(con);
    }
  }
  for (auto& row : rows) {
    if (!absorb_bound(row, p.vars)) p.linear.push_back(std::move(row));
  }
  for (const auto& v : p.vars) {
    if (v.lower > v.upper) throw InfeasibleProblem("bounds of '" + v.name + "' are contradictory");
  }

  p.objective = problem.objective;
  if (p.objective.nonlinear && p.objective.nonlinear->expression()) {
    if (auto form = expr::as_affine(*p.objective.nonlinear->expression(), n)) {
      p.objective.coeffs = std::move(form->coeffs);
      p.objective.constant += form->constant;
      p.objective.nonlinear.reset();
    }
  }

  sp.lower_source.resize(static_cast<std::size_t>(n));
  sp.upper_source.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    sp.lower_source[i] = std::isfinite(p.vars[i].lower) ? BoundSource::kUser : BoundSource::kNone;
    sp.upper_source[i] = std::isfinite(p.vars[i].upper) ? BoundSource::kUser : BoundSource::kNone;
  }
  for (int i : sp.nonlinear_variables()) {
    if (!std::isfinite(p.vars[i].lower)) {
      const double lo = infer_bound(sp, i, Direction::kMin);
      p.vars[i].lower = p.vars[i].integral ? std::ceil(lo - 1e-9) : lo;
      sp.lower_source[i] = BoundSource::kInferred;
    }
    if (!std::isfinite(p.vars[i].upper)) {
      const double hi = infer_bound(sp, i, Direction::kMax);
      p.vars[i].upper = p.vars[i].integral ? std::floor(hi + 1e-9) : hi;
      sp.upper_source[i] = BoundSource::kInferred;
    }
  }
  return sp;
}

double infer_bound(const StandardProblem& sp, int var, Direction direction) {
  const Problem& p = sp.problem;
  const int n = p.dim();
  if (var < 0 || var >= n) throw Error("infer_bound: variable index out of range");
  milp::LpProblem lp;
  lp.num_vars = n;
  lp.objective.assign(static_cast<std::size_t>(n), 0.0);
  lp.objective[var] = 1.0;
  lp.minimize = direction == Direction::kMin;
  for (const auto& v : p.vars) {
    lp.lower.push_back(v.lower);
    lp.upper.push_back(v.upper);
  }
  for (const auto& row : p.linear) {
    milp::Row r;
    for (int i = 0; i < n; ++i) {
      if (row.coeffs[i] != 0.0) r.terms.push_back({i, row.coeffs[i]});
    }
    r.sense = row.sense;
    r.rhs = row.rhs;
    lp.rows.push_back(std::move(r));
  }
  const auto solution = milp::solve_lp(lp);
  const std::string& name = p.vars[var].name;
  switch (solution.status) {
    case milp::SolveStatus::kOptimal: return solution.objective;
    case milp::SolveStatus::kUnbounded:
      throw UnboundedVariable("cannot infer a " + std::string(direction == Direction::kMin ? "lower" : "upper") +
                              " bound for '" + name + "': linear relaxation is unbounded");
    default: throw InfeasibleProblem("linear constraints are infeasible while bounding '" + name + "'");
  }
}

int label(const NonlinearConstraint& con, std::span<const double> x, double tol) {
  const double v = con.value(x);
  if (con.kind() == ConstraintKind::kEquality) return std::fabs(v) <= tol ? 1 : 0;
  return v <= tol ? 1 : 0;
}

bool structurally_equal(const Problem& a, const Problem& b) {
  if (a.vars.size() != b.vars.size() || a.linear.size() != b.linear.size() ||
      a.nonlinear.size() != b.nonlinear.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.vars.size(); ++i) {
    const auto& u = a.vars[i];
    const auto& v = b.vars[i];
    if (u.name != v.name || u.lower != v.lower || u.upper != v.upper || u.integral != v.integral) return false;
  }
  for (std::size_t i = 0; i < a.linear.size(); ++i) {
    const auto& r = a.linear[i];
    const auto& s = b.linear[i];
    if (r.coeffs != s.coeffs || r.rhs != s.rhs || r.sense != s.sense) return false;
  }
  for (std::size_t i = 0; i < a.nonlinear.size(); ++i) {
    const auto& c = a.nonlinear[i];
    const auto& d = b.nonlinear[i];
    if (c.kind() != d.kind() || c.support() != d.support()) return false;
    if (c.expression().has_value() != d.expression().has_value()) return false;
    if (c.expression() && !expr::structurally_equal(*c.expression(), *d.expression())) return false;
  }
  if (a.objective.is_linear() != b.objective.is_linear()) return false;
  if (a.objective.is_linear()) {
    return a.objective.coeffs == b.objective.coeffs && a.objective.constant == b.objective.constant;
  }
  const auto& ea = a.objective.nonlinear->expression();
  const auto& eb = b.objective.nonlinear->expression();
  if (ea.has_value() != eb.has_value()) return false;
  return !ea || expr::structurally_equal(*ea, *eb);
}

}  // namespace goml
