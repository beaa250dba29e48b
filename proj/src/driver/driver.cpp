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


#include "goml/driver/driver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <thread>

#include "goml/core/random.hpp"
#include "goml/expr/problem_file.hpp"
#include "goml/milp/lp_format.hpp"

namespace goml::driver {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) { return Rng(seed).split(stream).next(); }

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

learners::Surrogate constant_surrogate(double prediction, const sampler::SampleSet& set) {
  learners::Surrogate s;
  s.model = learners::ObliqueTree::constant(prediction);
  s.task = Task::kClassifier;
  s.family = learners::Family::kTree;
  s.threshold = learners::default_threshold(learners::Family::kTree);
  s.validation_score = 1.0;
  s.inputs = set.support;
  return s;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string lambda_text(const std::optional<double>& lambda) {
  return lambda ? format_double(*lambda) : std::string("disabled");
}

}  // namespace

void RunConfig::validate() const {
  if (rhos.empty() || lambdas.empty()) throw Error("grids must be nonempty");
  if (!(time_limit > 0.0)) throw Error("time limit must be positive");
  for (double r : rhos) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw Error("rho values must be finite and non-negative");
  }
  for (const auto& l : lambdas) {
    if (l && !(*l > 0.0)) throw Error("lambda values must be positive");
  }
  sampler.validate();
  pgd.validate();
}

const char* to_string(RunStatus status) {
  switch (status) {
    case RunStatus::kFeasible: return "feasible";
    case RunStatus::kInfeasible: return "infeasible";
    case RunStatus::kTimeLimit: return "time_limit";
  }
  return "?";
}

TrainedSurrogates train_surrogates(const StandardProblem& sp, const RunConfig& config, PhaseTimes* times) {
  const Problem& p = sp.problem;
  const Box box = p.box();
  const auto integral = p.integral_mask();
  const std::size_t m = p.nonlinear.size();
  const bool objective = !p.objective.is_linear();
  const std::size_t count = m + (objective ? 1 : 0);

  std::vector<sampler::SampleSet> samples(count);
  auto t0 = Clock::now();
  parallel_for(count, config.threads, [&](std::size_t i) {
    sampler::SamplerConfig sc = config.sampler;
    sc.seed = stream_seed(config.seed, 1000 + i);
    sc.oct_sampling = sc.oct_sampling && config.oct_sampling;
    samples[i] = i < m ? sampler::sample_constraint(p.nonlinear[i], box, integral, sc)
                       : sampler::sample_objective(*p.objective.nonlinear, box, integral, sc);
  });
  if (times) times->sampling += seconds_since(t0);

  TrainedSurrogates out;
  out.set.constraints.resize(m);
  out.reports.resize(count);
  std::vector<learners::Surrogate> trained(count);
  t0 = Clock::now();
  parallel_for(count, config.threads, [&](std::size_t i) {
    const auto& set = samples[i];
    auto& report = out.reports[i];
    report.name = i < m ? p.nonlinear[i].name() : std::string("objective");
    report.task = set.task;
    report.samples = set.sizes;
    if (set.task == Task::kClassifier) {
      const auto [zeros, ones] = label_counts(set.data);
      if (zeros == 0 || ones == 0) {
        trained[i] = constant_surrogate(ones > 0 ? 1.0 : 0.0, set);
        report.constant = true;
      }
    }
    if (!report.constant) {
      learners::SelectionConfig lc = config.learners;
      lc.seed = stream_seed(config.seed, 2000 + i);
      try {
        trained[i] = learners::select_surrogate(set.data, set.task, lc);
      } catch (const DegenerateDataset& e) {
        throw DegenerateDataset("cannot train a surrogate for '" + report.name + "': " + e.what());
      }
      trained[i].inputs = set.support;
    }
    trained[i].constraint_id = report.name;
    report.family = trained[i].family;
    report.validation_score = trained[i].validation_score;
  });
  if (times) times->training += seconds_since(t0);
  for (std::size_t i = 0; i < m; ++i) out.set.constraints[i] = std::move(trained[i]);
  if (objective) out.set.objective = std::move(trained[m]);
  return out;
}

namespace {

milp::MilpSolution run_solver(const milp::MilpModel& model, const RunConfig& config, double budget) {
  if (config.solver == SolverKind::kExternal) {
    std::string cmd = config.external_command;
    if (cmd.empty()) {
      const auto env = milp::external_solver_command();
      if (!env) throw Error("external solver requested but GOML_EXTERNAL_SOLVER_CMD is not set");
      cmd = *env;
    }
    return milp::solve_external(model, cmd);
  }
  milp::MilpOptions options;
  options.time_limit = std::max(budget, 1e-3);
  return milp::solve_milp(model, options);
}

bool has_incumbent(const milp::MilpSolution& s) {
  return (s.status == milp::SolveStatus::kOptimal || s.status == milp::SolveStatus::kTimeLimit) && !s.x.empty() &&
         std::isfinite(s.objective);
}

/// Objective and violation of the problem at a MILP point, tolerant of
/// evaluation failures.
void score_milp_point(const Problem& p, CellReport& cell) {
  try {
    cell.milp_true_objective = p.objective.value(cell.milp_x);
    cell.milp_violation = p.max_violation(cell.milp_x);
  } catch (const EvaluationError&) {
    cell.milp_true_objective = std::numeric_limits<double>::quiet_NaN();
    cell.milp_violation = kInf;
  }
}

void fill_best(const Problem& p, const CellReport& cell, RunReport& report) {
  report.has_point = true;
  report.x = cell.refined.x;
  report.objective = cell.refined.objective;
  report.merit = cell.refined.merit;
  report.max_violation = cell.refined.max_violation;
  report.rho = cell.rho;
  report.lambda = cell.lambda;
  report.violations.clear();
  for (std::size_t i = 0; i < p.nonlinear.size(); ++i) {
    report.violations.emplace_back(p.nonlinear[i].name(), cell.refined.violations[i]);
  }
}

}  // namespace

RunReport solve_global(const Problem& problem, const RunConfig& config) {
  config.validate();
  const auto start = Clock::now();
  const auto calls_before = learners::selection_calls();
  RunReport report;
  report.problem = problem.name;
  report.seed = config.seed;
  report.known_optimum = problem.known_optimum;
  for (const auto& v : problem.vars) report.var_names.push_back(v.name);

  const StandardProblem sp = standardize(problem);
  const Problem& p = sp.problem;
  const std::size_t n = static_cast<std::size_t>(p.dim());
  const auto finish = [&] {
    report.total_seconds = seconds_since(start);
    report.training_calls = learners::selection_calls() - calls_before;
  };

  if (p.nonlinear.empty() && p.objective.is_linear()) {
    auto t0 = Clock::now();
    const auto model = encoder::assemble(sp, {});
    report.times.encoding = seconds_since(t0);
    t0 = Clock::now();
    const auto sol = run_solver(model, config, config.time_limit);
    report.times.solving = seconds_since(t0);
    CellReport cell;
    cell.status = sol.status;
    cell.nodes = sol.nodes;
    cell.seconds = report.times.solving;
    if (has_incumbent(sol)) {
      cell.has_point = true;
      cell.milp_x.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(n));
      cell.milp_objective = sol.objective;
      score_milp_point(p, cell);
      cell.refined = refiner::evaluate_merit(p, cell.milp_x, config.pgd.penalty);
      cell.feasible = cell.refined.max_violation <= config.feasibility_tol;
    }
    report.cells.push_back(cell);
    finish();
    if (!cell.has_point) {
      if (sol.status == milp::SolveStatus::kTimeLimit) {
        report.status = RunStatus::kTimeLimit;
        return report;
      }
      throw InfeasibleApproximation("linear problem is infeasible", report);
    }
    fill_best(p, cell, report);
    report.status = sol.status == milp::SolveStatus::kOptimal ? RunStatus::kFeasible : RunStatus::kTimeLimit;
    return report;
  }

  const auto trained = train_surrogates(sp, config, &report.times);
  report.surrogates = trained.reports;

  const std::vector<double> rhos = config.robustness ? config.rhos : std::vector<double>{0.0};
  const std::vector<std::optional<double>> lambdas =
      config.relaxation ? config.lambdas : std::vector<std::optional<double>>{std::nullopt};
  refiner::PgdConfig pgd = config.pgd;
  pgd.use_momentum = pgd.use_momentum && config.momentum;

  // Solves remaining: one unrelaxed solve per rho plus possible relaxed ones.
  std::size_t solves_left = rhos.size() * (1 + static_cast<std::size_t>(std::count_if(
                                                   lambdas.begin(), lambdas.end(), [](const auto& l) { return l.has_value(); })));
  bool timed_out = false;
  // Cells whose encoded model is identical to an earlier one reuse its outcome.
  std::vector<std::pair<milp::MilpModel, CellReport>> solved;

  const auto solve_cell = [&](double rho, const std::optional<double>& lambda, CellReport& cell) {
    const auto t_cell = Clock::now();
    const double remaining = config.time_limit - seconds_since(start);
    if (remaining <= 0.0) {
      cell.skipped = true;
      timed_out = true;
      return;
    }
    const double budget = remaining / static_cast<double>(std::max<std::size_t>(solves_left, 1));
    if (solves_left > 0) --solves_left;
    encoder::RobustConfig robust;
    robust.rho = rho;
    robust.p = config.norm;
    encoder::RelaxConfig relax;
    relax.enabled = lambda.has_value();
    relax.lambda = lambda.value_or(1.0);
    auto t0 = Clock::now();
    const auto model = encoder::assemble(sp, trained.set, rho > 0.0 ? &robust : nullptr, relax.enabled ? &relax : nullptr);
    report.times.encoding += seconds_since(t0);
    for (const auto& [previous, outcome] : solved) {
      if (!milp::structurally_equal(previous, model)) continue;
      const double rho_keep = cell.rho;
      const auto lambda_keep = cell.lambda;
      const bool relaxed_keep = cell.relaxed;
      cell = outcome;
      cell.rho = rho_keep;
      cell.lambda = lambda_keep;
      cell.relaxed = relaxed_keep;
      cell.reused = true;
      cell.seconds = seconds_since(t_cell);
      return;
    }
    t0 = Clock::now();
    const auto sol = run_solver(model, config, budget);
    report.times.solving += seconds_since(t0);
    cell.status = sol.status;
    cell.nodes += sol.nodes;
    if (sol.status == milp::SolveStatus::kTimeLimit && !has_incumbent(sol)) timed_out = true;
    if (has_incumbent(sol)) {
      cell.has_point = true;
      cell.milp_x.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(n));
      cell.milp_objective = sol.objective;
      cell.relaxation_total = encoder::relaxation_total(model, sol.x);
      score_milp_point(p, cell);
      t0 = Clock::now();
      try {
        cell.refined = refiner::pgd_improve(sp, cell.milp_x, pgd);
        cell.feasible = cell.refined.max_violation <= config.feasibility_tol;
      } catch (const EvaluationError&) {
        cell.has_point = false;
      }
      report.times.refining += seconds_since(t0);
    }
    cell.seconds += seconds_since(t_cell);
    if (sol.status != milp::SolveStatus::kTimeLimit) solved.emplace_back(model, cell);
  };

  for (double rho : rhos) {
    CellReport base;
    base.rho = rho;
    solve_cell(rho, std::nullopt, base);
    const bool base_infeasible = !base.skipped && !base.has_point && base.status == milp::SolveStatus::kInfeasible;
    for (const auto& lambda : lambdas) {
      CellReport cell = base;
      cell.lambda = lambda;
      if (lambda && base_infeasible) {
        cell.relaxed = true;
        cell.seconds = 0.0;
        solve_cell(rho, lambda, cell);
      } else if (lambda && solves_left > 0) {
        --solves_left;
      }
      report.cells.push_back(std::move(cell));
    }
  }

  // Best feasible cell by merit; ties keep the earlier (rho, lambda).
  const auto key = [](const CellReport& c) {
    return std::make_pair(c.rho, c.lambda.value_or(kInf));
  };
  const CellReport* best = nullptr;
  for (const auto& c : report.cells) {
    if (!c.has_point || !c.feasible) continue;
    if (!best || c.refined.merit < best->refined.merit ||
        (c.refined.merit == best->refined.merit && key(c) < key(*best))) {
      best = &c;
    }
  }
  if (best) {
    fill_best(p, *best, report);
    report.status = RunStatus::kFeasible;
    finish();
    return report;
  }
  for (const auto& c : report.cells) {
    if (!c.has_point) continue;
    if (!best || c.refined.merit < best->refined.merit ||
        (c.refined.merit == best->refined.merit && key(c) < key(*best))) {
      best = &c;
    }
  }
  finish();
  if (best) {
    fill_best(p, *best, report);
    report.status = timed_out ? RunStatus::kTimeLimit : RunStatus::kInfeasible;
    return report;
  }
  if (timed_out) {
    report.status = RunStatus::kTimeLimit;
    return report;
  }
  throw InfeasibleApproximation("every grid cell is infeasible, relaxed or not", report);
}

std::string format_report(const RunReport& r) {
  std::ostringstream out;
  out << "goml-report 1\n";
  out << "problem " << (r.problem.empty() ? "unnamed" : r.problem) << "\n";
  out << "status " << to_string(r.status) << "\n";
  out << "seed " << r.seed << "\n";
  if (r.has_point) {
    out << "objective " << format_double(r.objective) << "\n";
    out << "merit " << format_double(r.merit) << "\n";
    out << "max_violation " << format_double(r.max_violation) << "\n";
    out << "best_cell rho " << format_double(r.rho) << " lambda " << lambda_text(r.lambda) << "\n";
    for (std::size_t j = 0; j < r.x.size(); ++j) {
      out << "x " << (j < r.var_names.size() ? r.var_names[j] : "x" + std::to_string(j)) << " "
          << format_double(r.x[j]) << "\n";
    }
    for (const auto& [name, v] : r.violations) out << "violation " << name << " " << format_double(v) << "\n";
  }
  if (r.known_optimum) out << "known_optimum " << format_double(*r.known_optimum) << "\n";
  out << "time sampling " << format_double(r.times.sampling) << " training " << format_double(r.times.training)
      << " encoding " << format_double(r.times.encoding) << " solving " << format_double(r.times.solving)
      << " refining " << format_double(r.times.refining) << " total " << format_double(r.total_seconds) << "\n";
  out << "training_calls " << r.training_calls << "\n";
  for (const auto& s : r.surrogates) {
    out << "surrogate " << s.name << " task " << to_string(s.task) << " family " << learners::to_string(s.family)
        << " score " << format_double(s.validation_score) << " constant " << (s.constant ? 1 : 0) << " samples "
        << s.samples.boundary << " " << s.samples.latin << " " << s.samples.knn << " " << s.samples.oct
        << " failed " << s.samples.failed << "\n";
  }
  for (const auto& c : r.cells) {
    out << "cell rho " << format_double(c.rho) << " lambda " << lambda_text(c.lambda);
    if (c.skipped) {
      out << " skipped\n";
      continue;
    }
    out << " status " << milp::to_string(c.status) << " reused " << (c.reused ? 1 : 0) << " relaxed " << (c.relaxed ? 1 : 0) << " relaxation "
        << format_double(c.relaxation_total) << " nodes " << c.nodes;
    if (c.has_point) {
      out << " milp_objective " << format_double(c.milp_objective) << " milp_true_objective "
          << format_double(c.milp_true_objective) << " milp_violation " << format_double(c.milp_violation)
          << " refined_objective " << format_double(c.refined.objective) << " refined_violation "
          << format_double(c.refined.max_violation) << " feasible " << (c.feasible ? 1 : 0);
    }
    out << " seconds " << format_double(c.seconds) << "\n";
  }
  out << "end\n";
  return out.str();
}

Problem generate_quadratic_sigmoid(int n, int m, std::uint64_t seed) {
  if (n < 1 || m < 1) throw Error("quadratic-sigmoid instances need n >= 1 and m >= 1");
  Rng rng(seed);
  std::ostringstream text;
  const auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "(%.17g)", v);
    return std::string(buf);
  };
  text << "format goml-problem 1\n";
  text << "name qsigmoid_n" << n << "_m" << m << "_s" << seed << "\n";
  for (int j = 0; j < n; ++j) text << "var x" << j + 1 << " -2 2\n";
  text << "objective min linear";
  for (int j = 0; j < n; ++j) {
    char buf[40];
    std::snprintf(buf, sizeof buf, " %.17g", rng.uniform(-1.0, 1.0));
    text << buf;
  }
  text << "\n";
  for (int i = 0; i < m; ++i) {
    std::vector<std::vector<double>> a(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
    for (int r = 0; r < n; ++r) {
      for (int c = r; c < n; ++c) {
        a[r][c] = a[c][r] = rng.uniform(-1.0, 1.0) / n;
      }
    }
    std::ostringstream q;
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) q << num(a[r][c]) << "*x" << r + 1 << "*x" << c + 1 << " + ";
    }
    for (int r = 0; r < n; ++r) q << num(rng.uniform(-1.0, 1.0)) << "*x" << r + 1 << " + ";
    q << num(rng.uniform(-1.0, 1.0));
    const std::string qs = "(" + q.str() + ")";
    if (i < m / 2) {
      text << "constraint q" << i + 1 << ": 1/(1+exp(-" << qs << ")) - 0.5 <= 0\n";
    } else {
      text << "constraint q" << i + 1 << ": -0.5 - " << qs << "/(1+exp(-" << qs << ")) <= 0\n";
    }
  }
  return expr::load_problem(text.str());
}

}  // namespace goml::driver
