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

#include "doctest.h"
#include "goml/core/error.hpp"
#include "goml/encoder/encoder.hpp"
#include "goml/expr/problem_file.hpp"
#include "goml/learners/train.hpp"
#include "goml/milp/lp_format.hpp"
#include "support/fidelity.hpp"
#include "support/fixtures.hpp"

using namespace goml;
using namespace goml::encoder;
using learners::Family;
using learners::Surrogate;

namespace {

Surrogate make(learners::Model model, Task task, Family family, std::size_t dim) {
  Surrogate s;
  s.model = std::move(model);
  s.task = task;
  s.family = family;
  s.threshold = task == Task::kClassifier ? learners::default_threshold(family) : 0.0;
  for (std::size_t k = 0; k < dim; ++k) s.inputs.push_back(static_cast<int>(k));
  return s;
}

struct Harness {
  milp::MilpModel m;
  InputMap in;

  explicit Harness(const Box& box) {
    in.box = box;
    for (std::size_t k = 0; k < box.dim(); ++k) in.vars.push_back(m.add_var(box.lower[k], box.upper[k]));
  }
  void fix(const std::vector<double>& x) {
    for (std::size_t k = 0; k < x.size(); ++k) m.add_row({{in.vars[k], 1.0}}, Sense::kEq, x[k]);
  }
  void require_at_least(const Affine& e, double a) { m.add_row(e.terms, Sense::kGe, a - e.constant); }
};

learners::ObliqueTree random_tree(Rng& rng, int depth, std::size_t dim) {
  std::vector<learners::TreeNode> nodes;
  std::function<int(int)> grow = [&](int d) -> int {
    const int id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    if (d == 0) {
      nodes[static_cast<std::size_t>(id)].prediction = rng.uniform() < 0.5 ? 1.0 : 0.0;
      return id;
    }
    std::vector<double> a(dim);
    for (auto& v : a) v = rng.normal();
    const double b = rng.uniform(-0.3, 0.3);
    const int l = grow(d - 1);
    const int r = grow(d - 1);
    nodes[static_cast<std::size_t>(id)] = {false, a, b, l, r, 0.0};
    return id;
  };
  grow(depth);
  return learners::ObliqueTree(nodes);
}

/// Feasibility of the robust classifier constraint at a fixed point.
bool robust_feasible(const Surrogate& s, const std::vector<double>& x, double rho, UncertaintyNorm p) {
  Harness h(Box{std::vector<double>(x.size(), -1.0), std::vector<double>(x.size(), 1.0)});
  RobustConfig cfg{rho, p};
  const auto e = encode_surrogate(s, h.in, h.m, &cfg);
  h.require_at_least(e, s.threshold);
  h.fix(x);
  return milp::solve_milp(h.m).status == milp::SolveStatus::kOptimal;
}

}  // namespace

TEST_CASE("big-M values") {
  CHECK(big_m_value(std::vector<double>{1, 0}, 0.0, Box{{0, 0}, {1, 1}}) == doctest::Approx(1.01));
  CHECK(big_m_value(std::vector<double>{0, 0}, 0.0, Box{{0, 0}, {1, 1}}) == 1.0);
  CHECK(big_m_value(std::vector<double>{1, 1}, 0.0, Box{{-1, -1}, {1, 1}}) == doctest::Approx(2.02));
}

TEST_CASE("linear models") {
  Harness h(Box{{0.0}, {1.0}});
  const auto e = encode_linear_model({1.0, {2.0}}, h.in, h.m);
  const int y = materialize(e, h.m);
  h.fix({0.5});
  const auto sol = milp::solve_milp(h.m);
  REQUIRE(sol.status == milp::SolveStatus::kOptimal);
  CHECK(sol.x[static_cast<std::size_t>(y)] == doctest::Approx(2.0));

  Harness c(Box{{-1, -1}, {1, 1}});
  c.require_at_least(encode_linear_model({0.0, {1.0, 0.0}}, c.in, c.m), 0.0);
  c.m.set_objective(0, 1.0);
  const auto s = milp::solve_milp(c.m);
  REQUIRE(s.status == milp::SolveStatus::kOptimal);
  CHECK(s.objective == doctest::Approx(0.0));
}

TEST_CASE("robust SVC row") {
  for (auto p : {UncertaintyNorm::kOne, UncertaintyNorm::kInf}) {
    Harness h(Box{{-1.0}, {1.0}});
    RobustConfig cfg{0.1, p};
    h.require_at_least(robustify_linear({0.0, {1.0}}, cfg, h.in, h.m), 0.0);
    h.m.set_objective(0, 1.0);
    const auto sol = milp::solve_milp(h.m);
    REQUIRE(sol.status == milp::SolveStatus::kOptimal);
    CHECK(sol.objective == doctest::Approx(0.0));
  }
  Harness plain(Box{{-1, -1}, {1, 1}});
  Harness zero(Box{{-1, -1}, {1, 1}});
  const learners::LinearModel lm{0.2, {1.0, -3.0}};
  plain.require_at_least(encode_linear_model(lm, plain.in, plain.m), 0.0);
  zero.require_at_least(robustify_linear(lm, RobustConfig{0.0}, zero.in, zero.m), 0.0);
  CHECK(milp::structurally_equal(plain.m, zero.m));
}

TEST_CASE("robust linear feasibility matches the closed form") {
  Rng rng(3);
  const learners::LinearModel lm{0.3, {1.0, -2.0, 0.5}};
  const auto s = make(lm, Task::kClassifier, Family::kSvm, 3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const double base = lm.predict(x);
    double inf = 0.0;
    double one = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      inf = std::max(inf, std::fabs(lm.beta[k] * x[k]));
      one += std::fabs(lm.beta[k] * x[k]);
    }
    const double rho = 0.2;
    if (std::fabs(base - rho * inf) > 1e-6) CHECK(robust_feasible(s, x, rho, UncertaintyNorm::kOne) == (base - rho * inf >= 0));
    if (std::fabs(base - rho * one) > 1e-6) CHECK(robust_feasible(s, x, rho, UncertaintyNorm::kInf) == (base - rho * one >= 0));
  }
}

TEST_CASE("three-split tree encoding") {
  const auto t = testing::three_split_tree();
  Harness h(Box{{0.51, 0.3}, {1.5, 1.6}});
  const int binaries_before = h.m.num_integer();
  const auto y = encode_tree(t, h.in, h.m);
  CHECK(h.m.num_integer() - binaries_before == 4);
  CHECK(y.terms.size() == 3);
  for (const auto& term : y.terms) CHECK(term.coeff == 1.0);
  const int yv = materialize(y, h.m);
  h.fix({1.0, 1.0});
  const auto sol = milp::solve_milp(h.m);
  REQUIRE(sol.status == milp::SolveStatus::kOptimal);
  CHECK(sol.x[2] == doctest::Approx(1.0));  // z of the first leaf
  CHECK(sol.x[static_cast<std::size_t>(yv)] == doctest::Approx(1.0));
}

TEST_CASE("single-leaf tree") {
  Harness h(Box{{0.0}, {1.0}});
  const auto y = encode_tree(learners::ObliqueTree::constant(1.0), h.in, h.m);
  CHECK(y.terms.empty());
  CHECK(y.constant == 1.0);
  CHECK(h.m.num_integer() == 0);
}

TEST_CASE("robust tree at rho zero is row-identical") {
  Rng rng(8);
  const auto t = random_tree(rng, 3, 2);
  Harness a(Box{{-1, -1}, {1, 1}});
  Harness b(Box{{-1, -1}, {1, 1}});
  encode_tree(t, a.in, a.m);
  RobustConfig zero{0.0, UncertaintyNorm::kInf};
  encode_tree(t, b.in, b.m, &zero);
  CHECK(milp::structurally_equal(a.m, b.m));
}

TEST_CASE("leaf exclusivity") {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = random_tree(rng, 3, 2);
    Harness h(Box{{-1, -1}, {1, 1}});
    encode_tree(t, h.in, h.m);
    h.m.set_objective(0, rng.normal());
    h.m.set_objective(1, rng.normal());
    const auto sol = milp::solve_milp(h.m);
    REQUIRE(sol.status == milp::SolveStatus::kOptimal);
    double ones = 0.0;
    for (int j = 0; j < h.m.num_vars(); ++j) {
      if (h.m.vars()[static_cast<std::size_t>(j)].type == milp::VarType::kBinary) ones += sol.x[static_cast<std::size_t>(j)];
    }
    CHECK(ones == doctest::Approx(1.0));
  }
}

TEST_CASE("robust feasible sets are nested in rho") {
  Rng rng(10);
  const auto tree = make(random_tree(rng, 2, 2), Task::kClassifier, Family::kTree, 2);
  const auto svc = make(learners::LinearModel{0.1, {1.0, 0.7}}, Task::kClassifier, Family::kSvm, 2);
  for (auto p : {UncertaintyNorm::kOne, UncertaintyNorm::kInf}) {
    for (const auto* s : {&tree, &svc}) {
      for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        if (testing::split_margin(*s, x) < 1e-3) continue;
        const bool big = robust_feasible(*s, x, 0.1, p);
        const bool small = robust_feasible(*s, x, 0.01, p);
        const bool none = robust_feasible(*s, x, 0.0, p);
        if (big) CHECK(small);
        if (small) CHECK(none);
      }
    }
  }
}

TEST_CASE("GBM encodings") {
  Rng rng(11);
  const auto t = random_tree(rng, 2, 2);
  const learners::GbmEnsemble single{{t}, {1.0}, 0.0};
  Harness a(Box{{-1, -1}, {1, 1}});
  Harness b(Box{{-1, -1}, {1, 1}});
  const auto ya = encode_tree(t, a.in, a.m);
  const auto yb = encode_gbm(single, b.in, b.m);
  CHECK(milp::structurally_equal(a.m, b.m));
  CHECK(ya.terms.size() == yb.terms.size());

  const learners::GbmEnsemble constants{{learners::ObliqueTree::constant(1.0), learners::ObliqueTree::constant(1.0)},
                                        {0.5, 0.5},
                                        0.0};
  Harness c(Box{{-1, -1}, {1, 1}});
  const auto yc = encode_gbm(constants, c.in, c.m);
  CHECK(yc.terms.empty());
  CHECK(yc.constant == 1.0);
}

TEST_CASE("MLP encodings") {
  learners::Mlp relu;
  relu.layers.push_back({{{1.0}}, {0.0}});
  relu.layers.push_back({{{1.0}}, {0.0}});
  Harness h(Box{{-1.0}, {1.0}});
  const int y = materialize(encode_mlp(relu, h.in, h.m), h.m);
  h.fix({-0.5});
  auto sol = milp::solve_milp(h.m);
  REQUIRE(sol.status == milp::SolveStatus::kOptimal);
  CHECK(sol.x[static_cast<std::size_t>(y)] == doctest::Approx(0.0));

  learners::Mlp zero;
  zero.layers.push_back({{{0.0, 0.0}, {0.0, 0.0}}, {0.0, 0.0}});
  zero.layers.push_back({{{0.0, 0.0}}, {3.0}});
  Harness z(Box{{-1, -1}, {1, 1}});
  const auto e = encode_mlp(zero, z.in, z.m);
  CHECK(e.terms.empty());
  CHECK(e.constant == 3.0);
}

TEST_CASE("encoding fidelity for trained surrogates") {
  Rng rng(12);
  const Box box{{0.51, 0.3}, {1.5, 1.6}};
  const auto g = [](const std::vector<double>& x) { return -x[1] + 0.33 * std::log(x[0] - 0.4) + 1.2 - 0.2 * x[0]; };
  const auto cls = testing::random_labeled(rng, box, 600, g);
  const auto reg = testing::random_regression(rng, box, 600, g);
  std::vector<Surrogate> models{
      make(learners::train_svc(cls), Task::kClassifier, Family::kSvm, 2),
      make(learners::train_tree(cls, Task::kClassifier), Task::kClassifier, Family::kTree, 2),
      make(learners::train_gbm(cls, Task::kClassifier), Task::kClassifier, Family::kGbm, 2),
      make(learners::train_mlp(cls, Task::kClassifier), Task::kClassifier, Family::kMlp, 2),
      make(learners::train_svr(reg), Task::kRegressor, Family::kSvm, 2),
      make(learners::train_tree(reg, Task::kRegressor), Task::kRegressor, Family::kTree, 2),
      make(learners::train_gbm(reg, Task::kRegressor), Task::kRegressor, Family::kGbm, 2),
      make(learners::train_mlp(reg, Task::kRegressor), Task::kRegressor, Family::kMlp, 2),
  };
  for (const auto& s : models) {
    const auto r = testing::check_fidelity(s, box, 100, rng);
    INFO(learners::to_string(s.family), " ", to_string(s.task));
    CHECK(r.mismatches == 0);
    CHECK(r.checked >= 95);
  }
}

TEST_CASE("assembly") {
  const auto linear_only = standardize(expr::load_problem(
      "format goml-problem 1\nvar x 0 4\nvar y 0 4\nobjective min -x - y\nconstraint c: x + 2*y <= 4\n"));
  const auto m = assemble(linear_only, {});
  CHECK(m.num_vars() == 2);
  CHECK(m.num_rows() == 1);
  CHECK(m.records().empty());
  const auto sol = milp::solve_milp(m);
  REQUIRE(sol.status == milp::SolveStatus::kOptimal);
  CHECK(sol.objective == doctest::Approx(-4.0));
}

TEST_CASE("relaxation restores feasibility") {
  const auto sp = standardize(expr::load_problem(
      "format goml-problem 1\nvar x 0 1\nvar y 0 1\nobjective min y\n"
      "constraint a: exp(x) - 1.5 <= 0\nconstraint b: 1.2 - exp(x) <= 0\n"));
  REQUIRE(sp.problem.nonlinear.size() == 2);
  SurrogateSet set;
  auto s1 = make(learners::LinearModel{-0.2, {-1.0}}, Task::kClassifier, Family::kSvm, 0);
  auto s2 = make(learners::LinearModel{-0.5, {1.0}}, Task::kClassifier, Family::kSvm, 0);
  s1.inputs = s2.inputs = {0};
  set.constraints = {s1, s2};
  const auto strict = assemble(sp, set);
  CHECK(milp::solve_milp(strict).status == milp::SolveStatus::kInfeasible);
  RelaxConfig relax{true, 100.0};
  const auto relaxed = assemble(sp, set, nullptr, &relax);
  const auto sol = milp::solve_milp(relaxed);
  REQUIRE(sol.status == milp::SolveStatus::kOptimal);
  CHECK(relaxation_total(relaxed, sol.x) > 0.0);
  CHECK(relaxation_total(relaxed, sol.x) == doctest::Approx(0.7));
}

TEST_CASE("second-order cone rows are export-only") {
  Harness h(Box{{-1, -1}, {1, 1}});
  RobustConfig cfg{0.1, UncertaintyNorm::kTwo};
  h.require_at_least(robustify_linear({0.5, {1.0, 1.0}}, cfg, h.in, h.m), 0.0);
  CHECK(h.m.cones().size() == 1);
  CHECK_THROWS_AS(milp::solve_milp(h.m), UnsupportedNorm);
  const auto text = milp::write_lp(h.m);
  CHECK(text.find("^2") != std::string::npos);
  CHECK(milp::structurally_equal(milp::read_lp(text), h.m));
}
