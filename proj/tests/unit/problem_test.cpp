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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "goml/core/error.hpp"
#include "goml/core/problem.hpp"
#include "goml/core/random.hpp"
#include "goml/milp/lp.hpp"

using goml::ConstraintKind;
using goml::LinearConstraint;
using goml::NonlinearConstraint;
using goml::Problem;
using goml::Sense;
using goml::VarSpec;
using goml::expr::parse_expr;
using goml::expr::SymbolTable;

namespace {

Problem illustrative() {
  Problem p;
  p.name = "illustrative";
  p.vars = {VarSpec{"x1", 0, 0.51, 1.5, false}, VarSpec{"x2", 1, 0.3, 1.6, false}};
  p.objective.coeffs = {-1.0, 0.0};
  SymbolTable s({"x1", "x2"});
  p.nonlinear.push_back(NonlinearConstraint::from_expr(
      "g1", parse_expr("-0.43*ln(x1-0.5)-1.1-x1+x2", s), ConstraintKind::kInequality));
  p.nonlinear.push_back(NonlinearConstraint::from_expr(
      "g2", parse_expr("-x2+0.33*ln(x1-0.4)+1.2-0.2*x1", s), ConstraintKind::kInequality));
  p.nonlinear.push_back(
      NonlinearConstraint::from_expr("g3", parse_expr("x2-1.1*x1-0.3", s), ConstraintKind::kInequality));
  p.nonlinear.push_back(
      NonlinearConstraint::from_expr("g4", parse_expr("x2+1.5*x1-2.6", s), ConstraintKind::kInequality));
  return p;
}

}  // namespace

TEST_CASE("standardize partitions the illustrative problem") {
  const auto sp = goml::standardize(illustrative());
  CHECK(sp.problem.nonlinear.size() == 2);
  CHECK(sp.problem.linear.size() == 2);
  const auto box = sp.box();
  CHECK(box.lower == std::vector<double>{0.51, 0.3});
  CHECK(box.upper == std::vector<double>{1.5, 1.6});
  CHECK(sp.nonlinear_variables() == std::vector<int>{0, 1});
}

TEST_CASE("linear-only problems pass through") {
  Problem p;
  p.vars = {VarSpec{"a", 0, 0.0, 1.0, false}, VarSpec{"b", 1, 0.0, 2.0, true}};
  p.objective.coeffs = {1.0, 1.0};
  p.linear.push_back(LinearConstraint{{1.0, 1.0}, 1.5, Sense::kLe, "cap"});
  const auto sp = goml::standardize(p);
  CHECK(sp.problem.nonlinear.empty());
  CHECK(goml::structurally_equal(sp.problem, p));
}

TEST_CASE("missing bounds are inferred from single-variable rows") {
  Problem p;
  p.vars = {VarSpec{"x1", 0, -goml::kInf, goml::kInf, false}};
  p.objective.coeffs = {1.0};
  SymbolTable s({"x1"});
  p.nonlinear.push_back(
      NonlinearConstraint::from_expr("g", parse_expr("exp(x1)-2", s), ConstraintKind::kInequality));
  p.linear.push_back(LinearConstraint{{1.0}, 2.0, Sense::kLe, "hi"});
  p.linear.push_back(LinearConstraint{{1.0}, -1.0, Sense::kGe, "lo"});
  const auto sp = goml::standardize(p);
  CHECK(sp.box().lower[0] == -1.0);
  CHECK(sp.box().upper[0] == 2.0);
}

TEST_CASE("bounds inferred through coupled rows") {
  Problem p;
  p.vars = {VarSpec{"x1", 0, 0.0, goml::kInf, false}, VarSpec{"x2", 1, 0.0, goml::kInf, false}};
  p.objective.coeffs = {0.0, 0.0};
  SymbolTable s({"x1", "x2"});
  p.nonlinear.push_back(
      NonlinearConstraint::from_expr("g", parse_expr("x1*x2-0.1", s), ConstraintKind::kInequality));
  p.linear.push_back(LinearConstraint{{1.0, 1.0}, 1.0, Sense::kLe, "budget"});
  const auto sp = goml::standardize(p);
  CHECK(sp.box().upper[0] == doctest::Approx(1.0));
  CHECK(sp.box().upper[1] == doctest::Approx(1.0));
  CHECK(sp.upper_source[0] == goml::BoundSource::kInferred);
  CHECK(sp.lower_source[0] == goml::BoundSource::kUser);
  CHECK(goml::infer_bound(sp, 0, goml::Direction::kMax) == doctest::Approx(1.0));
}

TEST_CASE("explicit bounds are returned by infer_bound") {
  auto p = illustrative();
  p.nonlinear.resize(2);
  const auto sp = goml::standardize(p);
  CHECK(goml::infer_bound(sp, 1, goml::Direction::kMin) == doctest::Approx(0.3));
  CHECK(goml::infer_bound(sp, 1, goml::Direction::kMax) == doctest::Approx(1.6));
}

TEST_CASE("unbounded nonlinear variables are rejected") {
  Problem p;
  p.vars = {VarSpec{"x1", 0, 0.0, goml::kInf, false}};
  p.objective.coeffs = {1.0};
  SymbolTable s({"x1"});
  p.nonlinear.push_back(
      NonlinearConstraint::from_expr("g", parse_expr("x1^2-1", s), ConstraintKind::kInequality));
  CHECK_THROWS_AS(goml::standardize(p), goml::UnboundedVariable);
}

TEST_CASE("infeasible linear core is reported while bounding") {
  Problem p;
  p.vars = {VarSpec{"x1", 0, -goml::kInf, goml::kInf, false}, VarSpec{"x2", 1, 0.0, 1.0, false}};
  p.objective.coeffs = {1.0, 0.0};
  SymbolTable s({"x1", "x2"});
  p.nonlinear.push_back(
      NonlinearConstraint::from_expr("g", parse_expr("x1^2-1", s), ConstraintKind::kInequality));
  p.linear.push_back(LinearConstraint{{1.0, 1.0}, 5.0, Sense::kGe, "a"});
  p.linear.push_back(LinearConstraint{{1.0, 1.0}, 1.0, Sense::kLe, "b"});
  CHECK_THROWS_AS(goml::standardize(p), goml::InfeasibleProblem);
}

TEST_CASE("standardize is idempotent") {
  const auto once = goml::standardize(illustrative());
  const auto twice = goml::standardize(once.problem);
  CHECK(goml::structurally_equal(once.problem, twice.problem));
}

TEST_CASE("inferred bounds are valid for feasible points of the linear rows") {
  goml::Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Problem p;
    const int n = 3;
    for (int i = 0; i < n; ++i) p.vars.push_back(VarSpec{"v" + std::to_string(i), i, 0.0, goml::kInf, false});
    p.objective.coeffs.assign(n, 0.0);
    for (int r = 0; r < 3; ++r) {
      LinearConstraint row;
      for (int i = 0; i < n; ++i) row.coeffs.push_back(rng.uniform(0.2, 1.0));
      row.rhs = rng.uniform(1.0, 3.0);
      p.linear.push_back(row);
    }
    std::vector<int> all{0, 1, 2};
    p.nonlinear.push_back(NonlinearConstraint::from_function(
        "prod", [](std::span<const double> x) { return x[0] * x[1] * x[2] - 0.01; }, all,
        ConstraintKind::kInequality));
    const auto sp = goml::standardize(p);
    const auto box = sp.box();
    // Oracle: rejection-sample the linear region inside a generous box.
    for (int k = 0; k < 2000; ++k) {
      std::vector<double> x(n);
      for (auto& v : x) v = rng.uniform(0.0, 20.0);
      bool feasible = true;
      for (const auto& row : p.linear) feasible = feasible && row.violation(x) == 0.0;
      if (!feasible) continue;
      for (int i = 0; i < n; ++i) CHECK(x[i] <= box.upper[i] + 1e-9);
    }
  }
}

TEST_CASE("labels follow the feasibility tolerance") {
  const auto p = illustrative();
  CHECK(goml::label(p.nonlinear[0], std::vector<double>{1.0, 1.0}) == 1);
  CHECK(goml::label(p.nonlinear[0], std::vector<double>{0.51, 1.6}) == 0);
  SymbolTable s({"x1", "x2"});
  const auto h = NonlinearConstraint::from_expr("h", parse_expr("x1-x1", s), ConstraintKind::kEquality);
  CHECK(goml::label(h, std::vector<double>{0.3, 2.0}) == 1);
  const auto tiny =
      NonlinearConstraint::from_expr("t", parse_expr("x1-1e-8", s), ConstraintKind::kInequality);
  CHECK(goml::label(tiny, std::vector<double>{2e-8, 0.0}) == 1);
  CHECK(goml::label(tiny, std::vector<double>{2.1e-8, 0.0}) == 0);
}

TEST_CASE("black-box constraints fall back to finite differences") {
  const auto c = NonlinearConstraint::from_function(
      "bb", [](std::span<const double> x) { return x[0] * x[0] + 3.0 * x[1]; }, {0, 1},
      ConstraintKind::kInequality);
  const auto g = c.gradient(std::vector<double>{2.0, 1.0});
  CHECK(g[0] == doctest::Approx(4.0).epsilon(1e-7));
  CHECK(g[1] == doctest::Approx(3.0).epsilon(1e-7));
}
