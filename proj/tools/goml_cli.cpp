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


// Command line front end: solve, bench, export-lp and solve-lp.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "goml/driver/driver.hpp"
#include "goml/expr/problem_file.hpp"
#include "goml/milp/lp_format.hpp"

namespace {

using namespace goml;

constexpr int kExitFeasible = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitTimeLimit = 3;
constexpr int kExitUsage = 64;

struct RunOptions {
  std::uint64_t seed = 0;
  double time_limit = 1500.0;
  std::vector<double> rhos;
  std::vector<std::string> lambdas;
  bool no_oct = false;
  bool no_robust = false;
  bool no_relax = false;
  bool no_momentum = false;
  std::string solver = "builtin";
  std::string norm = "1";
  std::string report_path;
  std::string json_path;
  int threads = 0;
};

void add_run_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--time-limit", o.time_limit, "total time limit in seconds")->check(CLI::PositiveNumber);
  cmd->add_option("--rho", o.rhos, "robustness grid values")->check(CLI::NonNegativeNumber);
  cmd->add_option("--lambda", o.lambdas, "relaxation grid values (number or 'disabled')");
  cmd->add_flag("--no-oct-sampling", o.no_oct, "skip OCT adaptive sampling");
  cmd->add_flag("--no-robust", o.no_robust, "use rho = 0 only");
  cmd->add_flag("--no-relax", o.no_relax, "disable relaxation variables");
  cmd->add_flag("--no-momentum", o.no_momentum, "plain projected gradient steps");
  cmd->add_option("--solver", o.solver, "MILP backend")->check(CLI::IsMember({"builtin", "external"}));
  cmd->add_option("--norm", o.norm, "uncertainty norm p")->check(CLI::IsMember({"1", "2", "inf"}));
  cmd->add_option("--report", o.report_path, "write the structured text report to this path");
  cmd->add_option("--json", o.json_path, "write the report as JSON to this path");
  cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)")->check(CLI::NonNegativeNumber);
}

driver::RunConfig make_config(const RunOptions& o) {
  driver::RunConfig c;
  c.seed = o.seed;
  c.time_limit = o.time_limit;
  if (!o.rhos.empty()) c.rhos = o.rhos;
  if (!o.lambdas.empty()) {
    c.lambdas.clear();
    for (const auto& s : o.lambdas) {
      if (s == "disabled" || s == "inf") {
        c.lambdas.push_back(std::nullopt);
      } else {
        try {
          c.lambdas.push_back(std::stod(s));
        } catch (const std::exception&) {
          throw CLI::ValidationError("--lambda", "expected a number or 'disabled', got '" + s + "'");
        }
      }
    }
  }
  c.oct_sampling = !o.no_oct;
  c.robustness = !o.no_robust;
  c.relaxation = !o.no_relax;
  c.momentum = !o.no_momentum;
  c.solver = o.solver == "external" ? driver::SolverKind::kExternal : driver::SolverKind::kBuiltin;
  c.norm = o.norm == "inf" ? encoder::UncertaintyNorm::kInf
           : o.norm == "2" ? encoder::UncertaintyNorm::kTwo
                           : encoder::UncertaintyNorm::kOne;
  c.threads = static_cast<unsigned>(o.threads);
  return c;
}

nlohmann::json report_json(const driver::RunReport& r) {
  using nlohmann::json;
  const auto lambda_json = [](const std::optional<double>& l) { return l ? json(*l) : json("disabled"); };
  json j;
  j["problem"] = r.problem;
  j["status"] = driver::to_string(r.status);
  j["seed"] = r.seed;
  if (r.has_point) {
    j["objective"] = r.objective;
    j["merit"] = r.merit;
    j["max_violation"] = r.max_violation;
    j["rho"] = r.rho;
    j["lambda"] = lambda_json(r.lambda);
    json x = json::object();
    for (std::size_t i = 0; i < r.x.size(); ++i) x[r.var_names.at(i)] = r.x[i];
    j["x"] = x;
    json v = json::object();
    for (const auto& [name, value] : r.violations) v[name] = value;
    j["violations"] = v;
  }
  if (r.known_optimum) j["known_optimum"] = *r.known_optimum;
  j["times"] = {{"sampling", r.times.sampling}, {"training", r.times.training}, {"encoding", r.times.encoding},
                {"solving", r.times.solving},   {"refining", r.times.refining}, {"total", r.total_seconds}};
  j["training_calls"] = r.training_calls;
  for (const auto& s : r.surrogates) {
    j["surrogates"].push_back({{"name", s.name},
                               {"task", to_string(s.task)},
                               {"family", learners::to_string(s.family)},
                               {"validation_score", s.validation_score},
                               {"constant", s.constant}});
  }
  for (const auto& c : r.cells) {
    json cell = {{"rho", c.rho}, {"lambda", lambda_json(c.lambda)}, {"skipped", c.skipped}};
    if (!c.skipped) {
      cell["status"] = milp::to_string(c.status);
      cell["relaxed"] = c.relaxed;
      cell["nodes"] = c.nodes;
      cell["seconds"] = c.seconds;
      if (c.has_point) {
        cell["milp_objective"] = c.milp_objective;
        cell["refined_objective"] = c.refined.objective;
        cell["refined_violation"] = c.refined.max_violation;
        cell["feasible"] = c.feasible;
      }
    }
    j["cells"].push_back(cell);
  }
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw goml::Error("cannot write '" + path + "'");
  out << text;
}

int exit_code(driver::RunStatus status) {
  switch (status) {
    case driver::RunStatus::kFeasible: return kExitFeasible;
    case driver::RunStatus::kInfeasible: return kExitInfeasible;
    case driver::RunStatus::kTimeLimit: return kExitTimeLimit;
  }
  return kExitInternal;
}

int emit(const driver::RunReport& report, const RunOptions& o) {
  const std::string text = driver::format_report(report);
  std::cout << text;
  if (!o.report_path.empty()) write_text(o.report_path, text);
  if (!o.json_path.empty()) write_text(o.json_path, report_json(report).dump(2) + "\n");
  return exit_code(report.status);
}

int run(const Problem& problem, const RunOptions& o) {
  const auto config = make_config(o);
  try {
    return emit(driver::solve_global(problem, config), o);
  } catch (const driver::InfeasibleApproximation& e) {
    std::cerr << "goml: " << e.what() << "\n";
    auto report = e.report();
    report.status = driver::RunStatus::kInfeasible;
    emit(report, o);
    return kExitInfeasible;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Global optimization with machine-learned constraint surrogates", "goml"};
  app.require_subcommand(1);

  RunOptions solve_opts;
  std::string problem_path;
  auto* solve = app.add_subcommand("solve", "solve a problem file");
  solve->add_option("file", problem_path, "problem file")->required();
  add_run_options(solve, solve_opts);

  RunOptions bench_opts;
  std::string bench_name;
  int qs_n = 10;
  int qs_m = 2;
  std::uint64_t instance_seed = 0;
  std::string write_problem_path;
  auto* bench = app.add_subcommand("bench", "run a built-in benchmark");
  bench->add_option("name", bench_name, "benchmark")
      ->required()
      ->check(CLI::IsMember({"speed-reducer", "illustrative", "qsigmoid"}));
  bench->add_option("--n", qs_n, "qsigmoid dimension")->check(CLI::PositiveNumber);
  bench->add_option("--m", qs_m, "qsigmoid constraint count")->check(CLI::PositiveNumber);
  bench->add_option("--instance-seed", instance_seed, "qsigmoid generator seed");
  bench->add_option("--write-problem", write_problem_path, "also write the benchmark problem file");
  add_run_options(bench, bench_opts);

  std::string lp_in;
  std::string lp_out;
  RunOptions export_opts;
  double export_rho = 0.0;
  std::string export_lambda = "disabled";
  auto* export_lp = app.add_subcommand("export-lp", "write the surrogate MILP of a problem in LP format");
  export_lp->add_option("file", lp_in, "problem file")->required();
  export_lp->add_option("out", lp_out, "output LP path")->required();
  export_lp->add_option("--seed", export_opts.seed, "random seed");
  export_lp->add_option("--rho", export_rho, "robustness radius")->check(CLI::NonNegativeNumber);
  export_lp->add_option("--lambda", export_lambda, "relaxation penalty or 'disabled'");

  std::string solve_lp_in;
  std::string solve_lp_out;
  double solve_lp_limit = 600.0;
  auto* solve_lp = app.add_subcommand("solve-lp", "solve an LP-format model with the built-in MILP solver");
  solve_lp->add_option("lp", solve_lp_in, "LP file")->required();
  solve_lp->add_option("solution", solve_lp_out, "solution output path")->required();
  solve_lp->add_option("--time-limit", solve_lp_limit, "time limit in seconds")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  Problem problem;
  try {
    if (*solve) {
      problem = expr::load_problem_file(problem_path);
    } else if (*bench) {
      problem = bench_name == "qsigmoid"
                    ? driver::generate_quadratic_sigmoid(qs_n, qs_m, instance_seed)
                    : expr::load_problem(driver::builtin_problem_text(bench_name));
      if (!write_problem_path.empty()) write_text(write_problem_path, expr::write_problem(problem));
    } else if (*export_lp) {
      problem = expr::load_problem_file(lp_in);
    }
  } catch (const std::exception& e) {
    std::cerr << "goml: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*solve) return run(problem, solve_opts);
    if (*bench) return run(problem, bench_opts);
    if (*export_lp) {
      auto config = make_config(export_opts);
      const auto sp = standardize(problem);
      const auto trained = driver::train_surrogates(sp, config, nullptr);
      encoder::RobustConfig robust;
      robust.rho = export_rho;
      encoder::RelaxConfig relax;
      relax.enabled = export_lambda != "disabled";
      if (relax.enabled) relax.lambda = std::stod(export_lambda);
      const auto model = encoder::assemble(sp, trained.set, export_rho > 0.0 ? &robust : nullptr,
                                           relax.enabled ? &relax : nullptr);
      milp::export_lp_file(model, lp_out);
      return kExitFeasible;
    }
    if (*solve_lp) {
      milp::MilpModel model;
      try {
        model = milp::read_lp_file(solve_lp_in);
      } catch (const std::exception& e) {
        std::cerr << "goml: " << e.what() << "\n";
        return kExitUsage;
      }
      milp::MilpOptions options;
      options.time_limit = solve_lp_limit;
      const auto sol = milp::solve_milp(model, options);
      // The status travels in the solution file.
      write_text(solve_lp_out, milp::write_solution(model, sol));
      return kExitFeasible;
    }
  } catch (const std::exception& e) {
    std::cerr << "goml: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
