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
#include <string>
#include <vector>

#include "doctest.h"
#include "goml/core/error.hpp"
#include "goml/expr/problem_file.hpp"

using goml::expr::load_problem;
using goml::expr::load_problem_file;

namespace {

std::string problem_path(const char* name) { return std::string(GOML_SOURCE_DIR) + "/problems/" + name; }

}  // namespace

TEST_CASE("speed reducer document loads") {
  const auto p = load_problem_file(problem_path("speed_reducer.prob"));
  CHECK(p.dim() == 7);
  CHECK(p.linear.size() + p.nonlinear.size() == 11);
  CHECK(p.linear.size() == 4);
  CHECK_FALSE(p.objective.is_linear());
  CHECK(p.vars[2].integral);
  CHECK(p.known_optimum.has_value());
  const std::vector<double> x{3.5, 0.7, 17.0, 7.3, 7.71531991, 3.35021467, 5.28665446};
  // Oracle: objective transcribed independently.
  const double x1 = x[0], x2 = x[1], x3 = x[2], x4 = x[3], x5 = x[4], x6 = x[5], x7 = x[6];
  const double f = 0.7854 * x1 * x2 * x2 * (3.3333 * x3 * x3 + 14.9334 * x3 - 43.0934) -
                   1.5079 * x1 * (x6 * x6 + x7 * x7) + 7.477 * (x6 * x6 * x6 + x7 * x7 * x7) +
                   0.7854 * (x4 * x6 * x6 + x5 * x7 * x7);
  CHECK(p.objective.value(x) == doctest::Approx(f).epsilon(1e-12));
  CHECK(f == doctest::Approx(2994.355).epsilon(1e-6));
  CHECK(p.max_violation(x) <= 1e-4);  // coordinates rounded to 8 digits
}

TEST_CASE("illustrative document loads with two nonlinear and two linear constraints") {
  const auto p = load_problem_file(problem_path("illustrative.prob"));
  CHECK(p.nonlinear.size() == 2);
  CHECK(p.linear.size() == 2);
  CHECK(p.objective.coeffs == std::vector<double>{-1.0, 0.0});
  const std::vector<double> x{1.1499627, 0.8750590};
  CHECK(p.max_violation(x) <= 1e-4);  // coordinates rounded to 8 digits
}

TEST_CASE("box-only documents") {
  const auto p = load_problem("format goml-problem 1\nvar a 0 1\nvar b -inf inf\nobjective min a + 2*b\n");
  CHECK(p.dim() == 2);
  CHECK(p.linear.empty());
  CHECK(p.nonlinear.empty());
  CHECK(std::isinf(p.vars[1].lower));
  CHECK(p.objective.coeffs == std::vector<double>{1.0, 2.0});
}

TEST_CASE("undeclared variables are rejected") {
  CHECK_THROWS_AS(load_problem("format goml-problem 1\nvar a 0 1\nobjective min a\nconstraint a + q <= 1\n"),
                  goml::UnknownIdentifier);
}

TEST_CASE("schema violations") {
  CHECK_THROWS_AS(load_problem("var a 0 1\nobjective min a\n"), goml::SchemaError);
  CHECK_THROWS_AS(load_problem("format goml-problem 2\nvar a 0 1\nobjective min a\n"), goml::SchemaError);
  CHECK_THROWS_AS(load_problem("format goml-problem 1\nvar a 0 1\n"), goml::SchemaError);
  CHECK_THROWS_AS(load_problem("format goml-problem 1\nvar a 2 1\nobjective min a\n"), goml::SchemaError);
  CHECK_THROWS_AS(load_problem("format goml-problem 1\nvar a 0 1\nvar a 0 1\nobjective min a\n"), goml::SchemaError);
  CHECK_THROWS_AS(load_problem("format goml-problem 1\nvar a 0 1\nobjective max a\n"), goml::SchemaError);
  CHECK_THROWS_AS(load_problem("format goml-problem 1\nvar a 0 1\nobjective min a\nconstraint a + 1\n"),
                  goml::SchemaError);
  CHECK_THROWS_AS(load_problem("format goml-problem 1\nvar a 0 1\nobjective min a\nconstraint a * <= 1\n"),
                  goml::SyntaxError);
  CHECK_THROWS_AS(load_problem_file("/nonexistent/file.prob"), goml::IoError);
}

TEST_CASE("constraint senses map onto g <= 0") {
  const auto p = load_problem(
      "format goml-problem 1\nvar a 0 2\nvar b 0 2\nobjective min linear 1 0\n"
      "constraint ge: a*b >= 1\nconstraint le: a*b <= 3\nconstraint eq: a*b == 2\n");
  REQUIRE(p.nonlinear.size() == 3);
  const std::vector<double> x{1.0, 1.5};
  CHECK(p.nonlinear[0].value(x) == doctest::Approx(1.0 - 1.5));
  CHECK(p.nonlinear[1].value(x) == doctest::Approx(1.5 - 3.0));
  CHECK(p.nonlinear[2].value(x) == doctest::Approx(1.5 - 2.0));
  CHECK(p.nonlinear[2].kind() == goml::ConstraintKind::kEquality);
}

TEST_CASE("black-box constraints bind to registered evaluators") {
  goml::expr::BlackBoxRegistry registry;
  registry.add("disk", [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1] - 1.0; });
  const std::string doc =
      "format goml-problem 1\nvar a -2 2\nvar b -2 2\nobjective min a\nblackbox disk <= 0 support a b\n";
  const auto p = load_problem(doc, &registry);
  REQUIRE(p.nonlinear.size() == 1);
  CHECK(p.nonlinear[0].value(std::vector<double>{1.0, 1.0}) == 1.0);
  CHECK(p.nonlinear[0].support() == std::vector<int>{0, 1});
  CHECK_THROWS_AS(load_problem(doc), goml::SchemaError);
  const auto again = load_problem(goml::expr::write_problem(p), &registry);
  CHECK(goml::structurally_equal(p, again));
}

TEST_CASE("write then load round-trips") {
  for (const char* name : {"illustrative.prob", "illustrative_printed.prob", "speed_reducer.prob"}) {
    const auto p = load_problem_file(problem_path(name));
    const auto text = goml::expr::write_problem(p);
    const auto back = load_problem(text);
    CHECK_MESSAGE(goml::structurally_equal(p, back), text);
    CHECK(back.known_optimum == p.known_optimum);
  }
}
