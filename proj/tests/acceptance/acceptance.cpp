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


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "goml/driver/driver.hpp"
#include "goml/encoder/encoder.hpp"
#include "goml/expr/problem_file.hpp"
#include "goml/learners/train.hpp"
#include "goml/refiner/refiner.hpp"
#include "goml/sampler/sampler.hpp"
#include "support/fidelity.hpp"
#include "support/fixtures.hpp"
#include "support/random_expr.hpp"
#include "support/random_milp.hpp"

using namespace goml;

namespace {

// Pinned tolerances and reference values.
constexpr double kIllustrativeOptimum = -1.1497;
constexpr double kIllustrativeObjTol = 1e-3;
constexpr double kIllustrativeXTol = 1e-2;
constexpr double kIllustrativeX1 = 1.1497;
constexpr double kIllustrativeX2 = 0.875;
constexpr double kIllustrativeSeconds = 60.0;
constexpr double kMioReference = -1.108;
constexpr double kMioTol = 0.1;
// Surrogate re-check at the MILP point uses the MILP feasibility tolerance.
constexpr double kSurrogateTol = 1e-9;
constexpr double kSpeedReducerBest = 2994.36;
constexpr double kSpeedReducerCap = 2994.47;
constexpr double kSpeedReducerRel = 0.005;
constexpr double kSpeedReducerSeconds = 600.0;
constexpr double kConstraintTol = 1e-6;
constexpr double kFidelitySeconds = 120.0;
constexpr double kRegressionTol = 1e-6;
constexpr double kHitAndRunTol = 1e-9;
constexpr double kMilpTol = 1e-6;
constexpr double kGradientTol = 1e-5;
constexpr double kOracleRel = 0.05;
constexpr double kGridShare = 0.25;
// Offline oracle for generate_quadratic_sigmoid(10, 2, 1): best of 10 000
// SLSQP restarts (tests/oracles/qsigmoid_multistart.py, seed 12345).
constexpr double kQsigmoidOracle = -10.3740639130;
constexpr int kQsigmoidN = 10;
constexpr int kQsigmoidM = 2;
constexpr std::uint64_t kQsigmoidInstance = 1;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Problem builtin(const std::string& name) { return expr::load_problem(driver::builtin_problem_text(name)); }

driver::RunConfig config(std::uint64_t seed) {
  driver::RunConfig c;
  c.seed = seed;
  return c;
}

learners::Surrogate make(learners::Model model, Task task, learners::Family family, std::size_t dim) {
  learners::Surrogate s;
  s.model = std::move(model);
  s.task = task;
  s.family = family;
  s.threshold = task == Task::kClassifier ? learners::default_threshold(family) : 0.0;
  for (std::size_t k = 0; k < dim; ++k) s.inputs.push_back(static_cast<int>(k));
  return s;
}

double g2(const std::vector<double>& x) { return -x[1] + 0.33 * std::log(x[0] - 0.4) + 1.2 - 0.2 * x[0]; }

const Box kIllustrativeBox{{0.51, 0.3}, {1.5, 1.6}};

Outcome criterion1() {
  const auto p = builtin("illustrative");
  int good = 0;
  double slowest = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = driver::solve_global(p, config(seed));
    const double t = seconds_since(t0);
    slowest = std::max(slowest, t);
    const bool ok = r.has_point && std::fabs(r.objective - kIllustrativeOptimum) <= kIllustrativeObjTol &&
                    std::fabs(r.x[0] - kIllustrativeX1) <= kIllustrativeXTol &&
                    std::fabs(r.x[1] - kIllustrativeX2) <= kIllustrativeXTol && t < kIllustrativeSeconds;
    good += ok ? 1 : 0;
  }
  return {good >= 8, fmt("%d/10 seeds at -1.1497+-1e-3, x+-1e-2; slowest %.2f s", good, slowest)};
}

Outcome criterion2() {
  const auto p = builtin("illustrative");
  const auto sp = standardize(p);
  int good = 0;
  std::string values;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto trained = driver::train_surrogates(sp, config(seed), nullptr);
    encoder::RobustConfig robust;
    robust.rho = 0.1;
    const auto model = encoder::assemble(sp, trained.set, &robust, nullptr);
    const auto sol = milp::solve_milp(model);
    if (sol.status != milp::SolveStatus::kOptimal) {
      values += " none";
      continue;
    }
    const std::vector<double> x(sol.x.begin(), sol.x.begin() + 2);
    bool surrogate_feasible = true;
    for (const auto& s : trained.set.constraints) {
      std::vector<double> in;
      for (int v : s.inputs) in.push_back(x[static_cast<std::size_t>(v)]);
      surrogate_feasible = surrogate_feasible && learners::predict(s, in) >= s.threshold - kSurrogateTol;
    }
    values += fmt(" %.3f", sol.objective);
    if (surrogate_feasible && std::fabs(sol.objective - kMioReference) <= kMioTol) ++good;
  }
  return {good >= 5, fmt("%d/10 seeds within 0.1 of -1.108 (objectives:%s)", good, values.c_str())};
}

Outcome criterion3() {
  const auto p = builtin("speed-reducer");
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = driver::solve_global(p, config(0));
  const double t = seconds_since(t0);
  if (!r.has_point) return {false, "no point"};
  const double worst = p.max_violation(r.x);
  const bool integral = std::fabs(r.x[2] - std::round(r.x[2])) <= 1e-9;
  const bool ok = r.objective <= kSpeedReducerCap &&
                  std::fabs(r.objective - kSpeedReducerBest) <= kSpeedReducerRel * kSpeedReducerBest && integral &&
                  worst <= kConstraintTol && p.nonlinear.size() + p.linear.size() == 11 && t < kSpeedReducerSeconds;
  return {ok, fmt("objective %.4f, x3 %.6g, max violation %.2e over %zu constraints, %.1f s", r.objective, r.x[2],
                  worst, p.nonlinear.size() + p.linear.size(), t)};
}

Outcome criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(12);
  const auto cls = testing::random_labeled(rng, kIllustrativeBox, 600, g2);
  const auto reg = testing::random_regression(rng, kIllustrativeBox, 600, g2);
  using learners::Family;
  std::vector<learners::Surrogate> models{
      make(learners::train_svc(cls), Task::kClassifier, Family::kSvm, 2),
      make(learners::train_tree(cls, Task::kClassifier), Task::kClassifier, Family::kTree, 2),
      make(learners::train_gbm(cls, Task::kClassifier), Task::kClassifier, Family::kGbm, 2),
      make(learners::train_mlp(cls, Task::kClassifier), Task::kClassifier, Family::kMlp, 2),
      make(learners::train_svr(reg), Task::kRegressor, Family::kSvm, 2),
      make(learners::train_tree(reg, Task::kRegressor), Task::kRegressor, Family::kTree, 2),
      make(learners::train_gbm(reg, Task::kRegressor), Task::kRegressor, Family::kGbm, 2),
      make(learners::train_mlp(reg, Task::kRegressor), Task::kRegressor, Family::kMlp, 2),
  };
  int mismatches = 0;
  int checked = 0;
  int skipped = 0;
  double max_error = 0.0;
  for (const auto& s : models) {
    const auto r = testing::check_fidelity(s, kIllustrativeBox, 100, rng);
    mismatches += r.mismatches;
    checked += r.checked;
    skipped += r.skipped;
    max_error = std::max(max_error, r.max_error);
  }
  const double t = seconds_since(t0);
  return {mismatches == 0 && max_error <= kRegressionTol && t < kFidelitySeconds,
          fmt("%d fixed-x solves over 8 models, %d mismatches, %d skipped at a split, max regression error %.1e, "
              "%.1f s",
              checked, mismatches, skipped, max_error, t)};
}

constexpr const char* kContradictory = R"(format goml-problem 1
name contradictory
var x 0 1
var y 0 1
objective min linear 1 1
constraint low: x^3 - 0.125 <= 0
constraint high: 0.729 - x^3 <= 0
constraint x + y >= 0.2
)";

Outcome criterion5() {
  const auto p = expr::load_problem(kContradictory);
  auto c = config(2);
  c.robustness = false;
  c.lambdas = {1e2};
  const auto relaxed = driver::solve_global(p, c);
  double total = 0.0;
  bool point = false;
  for (const auto& cell : relaxed.cells) {
    if (cell.relaxed && cell.has_point) {
      point = true;
      total = std::max(total, cell.relaxation_total);
    }
  }
  bool reported_infeasible = false;
  c.relaxation = false;
  try {
    const auto r = driver::solve_global(p, c);
    reported_infeasible = r.status == driver::RunStatus::kInfeasible;
  } catch (const driver::InfeasibleApproximation&) {
    reported_infeasible = true;
  }
  return {point && total > 0.0 && reported_infeasible,
          fmt("relaxed model feasible: %s, sum u = %.4g; disabled relaxation reports infeasible: %s",
              point ? "yes" : "no", total, reported_infeasible ? "yes" : "no")};
}

bool robust_feasible(const learners::Surrogate& s, const std::vector<double>& x, double rho,
                     encoder::UncertaintyNorm p) {
  milp::MilpModel m;
  encoder::InputMap in;
  in.box = kIllustrativeBox;
  for (std::size_t k = 0; k < x.size(); ++k) in.vars.push_back(m.add_var(in.box.lower[k], in.box.upper[k]));
  encoder::RobustConfig cfg;
  cfg.rho = rho;
  cfg.p = p;
  const auto e = encoder::encode_surrogate(s, in, m, &cfg);
  m.add_row(e.terms, Sense::kGe, s.threshold - e.constant);
  for (std::size_t k = 0; k < x.size(); ++k) m.add_row({{in.vars[k], 1.0}}, Sense::kEq, x[k]);
  return milp::solve_milp(m).status == milp::SolveStatus::kOptimal;
}

Outcome criterion6() {
  Rng rng(10);
  const auto data = testing::random_labeled(rng, kIllustrativeBox, 400, g2);
  using learners::Family;
  const std::vector<learners::Surrogate> models{
      make(learners::train_svc(data), Task::kClassifier, Family::kSvm, 2),
      make(learners::train_tree(data, Task::kClassifier), Task::kClassifier, Family::kTree, 2),
      make(learners::train_gbm(data, Task::kClassifier), Task::kClassifier, Family::kGbm, 2),
  };
  int violations = 0;
  int checked = 0;
  int nonidentical = 0;
  for (const auto& s : models) {
    // rho = 0 must give the plain rows.
    milp::MilpModel a;
    milp::MilpModel b;
    encoder::InputMap ia;
    encoder::InputMap ib;
    ia.box = ib.box = kIllustrativeBox;
    for (int k = 0; k < 2; ++k) {
      ia.vars.push_back(a.add_var(kIllustrativeBox.lower[k], kIllustrativeBox.upper[k]));
      ib.vars.push_back(b.add_var(kIllustrativeBox.lower[k], kIllustrativeBox.upper[k]));
    }
    encoder::RobustConfig zero;
    zero.rho = 0.0;
    encoder::encode_surrogate(s, ia, a, &zero);
    encoder::encode_surrogate(s, ib, b, nullptr);
    if (!milp::structurally_equal(a, b)) ++nonidentical;
    for (auto p : {encoder::UncertaintyNorm::kOne, encoder::UncertaintyNorm::kInf}) {
      for (int trial = 0; trial < 100; ++trial) {
        const std::vector<double> x{rng.uniform(kIllustrativeBox.lower[0], kIllustrativeBox.upper[0]),
                                    rng.uniform(kIllustrativeBox.lower[1], kIllustrativeBox.upper[1])};
        const bool big = robust_feasible(s, x, 0.1, p);
        const bool small = robust_feasible(s, x, 0.01, p);
        const bool none = robust_feasible(s, x, 0.0, p);
        ++checked;
        if ((big && !small) || (small && !none)) ++violations;
      }
    }
  }
  return {violations == 0 && nonidentical == 0,
          fmt("%d points over SVM/tree/GBM x p in {1, inf}: %d nesting violations; rho=0 differs from plain for %d "
              "models",
              checked, violations, nonidentical)};
}

Outcome criterion7() {
  const Polyhedron unit{{}, Box{{0, 0}, {1, 1}}};
  const auto pts = sampler::hit_and_run(unit, {0.5, 0.5}, 10000, 42);
  int outside = 0;
  double mean[2] = {0.0, 0.0};
  for (const auto& p : pts) {
    if (unit.closed().min_slack(p) < -kHitAndRunTol) ++outside;
    mean[0] += p[0] / 10000.0;
    mean[1] += p[1] / 10000.0;
  }
  const bool ok = pts.size() == 10000 && outside == 0 && mean[0] >= 0.45 && mean[0] <= 0.55 && mean[1] >= 0.45 &&
                  mean[1] <= 0.55;
  return {ok, fmt("%zu points, %d outside, means (%.4f, %.4f)", pts.size(), outside, mean[0], mean[1])};
}

Outcome criterion8() {
  const Box box{{0.0, -2.0, 5.0}, {1.0, 2.0, 6.0}};
  bool ok = true;
  for (std::size_t n : {1u, 4u, 16u}) {
    const auto pts = sampler::lh_sample(box, n, 11);
    ok = ok && pts.size() == n;
    for (std::size_t k = 0; k < box.dim(); ++k) {
      std::vector<int> count(n, 0);
      for (const auto& p : pts) {
        const double u = (p[k] - box.lower[k]) / (box.upper[k] - box.lower[k]);
        if (u <= 0.0 || u >= 1.0) ok = false;
        ++count[std::min(n - 1, static_cast<std::size_t>(u * static_cast<double>(n)))];
      }
      for (int c : count) ok = ok && c == 1;
    }
  }
  return {ok, "n in {1, 4, 16} over 3 dimensions: one sample per stratum"};
}

Outcome criterion9() {
  Rng rng(13);
  const auto data = testing::random_labeled(rng, kIllustrativeBox, 300, g2);
  sampler::SamplerConfig c;
  c.seed = 4;
  const auto res = sampler::oct_adaptive_sample(
      data, kIllustrativeBox, [](std::span<const double> x) { return g2({x[0], x[1]}); }, c);
  const double bound = static_cast<double>(c.committee) * c.tau;
  int bad = 0;
  for (std::size_t i = 0; i < res.samples.size(); ++i) {
    int positive = 0;
    for (const auto& tree : res.committee) positive += tree.predict(res.samples[i].point) >= 0.5 ? 1 : 0;
    const int negative = static_cast<int>(res.committee.size()) - positive;
    if (std::abs(positive - negative) > bound) ++bad;
  }
  return {!res.samples.empty() && bad == 0,
          fmt("%zu regions, %zu points, %d above K*tau = %.1f", res.regions.size(), res.samples.size(), bad, bound)};
}

Outcome criterion10() {
  Rng rng(2024);
  int agree = 0;
  int feasible = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int bins = 1 + static_cast<int>(rng.index(12));
    const auto m = testing::random_milp(rng, bins, 3, 6);
    const auto s = milp::solve_milp(m);
    const auto oracle = testing::enumerate_binaries(m);
    if (!oracle) {
      agree += s.status == milp::SolveStatus::kInfeasible ? 1 : 0;
      continue;
    }
    ++feasible;
    if (s.status == milp::SolveStatus::kOptimal &&
        std::fabs(s.objective - *oracle) <= kMilpTol * std::max(1.0, std::fabs(*oracle))) {
      ++agree;
    }
  }
  return {agree == 50, fmt("%d/50 models agree with enumeration (%d feasible)", agree, feasible)};
}

Outcome criterion11() {
  Rng rng(2026);
  int checked = 0;
  int bad = 0;
  double worst = 0.0;
  for (int trial = 0; checked < 100 && trial < 5000; ++trial) {
    const int n = 3;
    const auto e = testing::random_expr(rng, n, 4);
    std::vector<double> x(n);
    for (auto& v : x) v = rng.uniform(-2.0, 2.0);
    std::vector<double> grad;
    try {
      grad = e.gradient(x);
      if (std::fabs(e.eval(x)) > 1e4) continue;
    } catch (const EvaluationError&) {
      continue;
    }
    const auto fd = testing::central_difference(e, x);
    if (!fd) continue;
    for (int i = 0; i < n; ++i) {
      const double err = std::fabs(grad[i] - (*fd)[i]) / std::max(1.0, std::fabs(grad[i]));
      worst = std::max(worst, err);
      if (err >= kGradientTol) ++bad;
    }
    ++checked;
  }
  return {checked == 100 && bad == 0, fmt("%d expressions, %d entries above 1e-5, worst %.2e", checked, bad, worst)};
}

Outcome criterion12() {
  const auto p = driver::generate_quadratic_sigmoid(kQsigmoidN, kQsigmoidM, kQsigmoidInstance);
  const auto sp = standardize(p);
  Rng rng(99);
  const refiner::PgdConfig cfg;
  int worse = 0;
  int improved = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x0(static_cast<std::size_t>(p.dim()));
    for (auto& v : x0) v = rng.uniform(-2.0, 2.0);
    const auto start = refiner::evaluate_merit(p, x0, cfg.penalty);
    const auto end = refiner::pgd_improve(sp, x0, cfg);
    if (end.merit > start.merit) ++worse;
    if (end.merit < start.merit) ++improved;
  }
  return {worse == 0, fmt("50 starts: %d degraded, %d improved", worse, improved)};
}

Outcome criterion13() {
  const auto p = driver::generate_quadratic_sigmoid(kQsigmoidN, kQsigmoidM, kQsigmoidInstance);
  const auto r = driver::solve_global(p, config(0));
  if (!r.has_point || r.status != driver::RunStatus::kFeasible) return {false, "no feasible point"};
  const double rel = std::fabs(r.objective - kQsigmoidOracle) / std::fabs(kQsigmoidOracle);
  return {rel <= kOracleRel,
          fmt("objective %.6f vs oracle %.6f: relative gap %.2f%%", r.objective, kQsigmoidOracle, 100.0 * rel)};
}

Outcome criterion14() {
  const auto r = driver::solve_global(builtin("illustrative"), config(0));
  const double share = r.times.grid() / r.total_seconds;
  const bool ok = r.cells.size() == 12 && r.training_calls == r.surrogates.size() && r.surrogates.size() == 2 &&
                  share < kGridShare;
  return {ok, fmt("%zu cells, %llu training calls for %zu surrogates, grid %.4f s of %.4f s (%.1f%%)", r.cells.size(),
                  static_cast<unsigned long long>(r.training_calls), r.surrogates.size(), r.times.grid(),
                  r.total_seconds, 100.0 * share)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"illustrative global optimum", criterion1},
      {"robust MIO incumbent", criterion2},
      {"speed reducer", criterion3},
      {"encoding fidelity", criterion4},
      {"relaxation guarantee", criterion5},
      {"robust nestedness", criterion6},
      {"hit-and-run containment and coverage", criterion7},
      {"Latin hypercube stratification", criterion8},
      {"OCT discordance bound", criterion9},
      {"MILP brute-force equivalence", criterion10},
      {"gradient correctness", criterion11},
      {"PGD non-degradation", criterion12},
      {"quadratic-sigmoid oracle", criterion13},
      {"surrogate reuse timing", criterion14},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s criterion %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
