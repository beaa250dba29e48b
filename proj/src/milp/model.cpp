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


#include "goml/milp/model.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <queue>

#include "goml/core/error.hpp"

namespace goml::milp {

int MilpModel::add_var(double lower, double upper, VarType type) {
  vars_.push_back({lower, upper, type});
  objective_.push_back(0.0);
  return num_vars() - 1;
}

int MilpModel::add_row(std::vector<Term> terms, Sense sense, double rhs) {
  std::erase_if(terms, [](const Term& t) { return t.coeff == 0.0; });
  rows_.push_back({std::move(terms), sense, rhs});
  return num_rows() - 1;
}

void MilpModel::add_cone(ConeRow cone) { cones_.push_back(std::move(cone)); }

void MilpModel::set_objective(int var, double coeff) { objective_.at(static_cast<std::size_t>(var)) = coeff; }

void MilpModel::add_objective(int var, double coeff) { objective_.at(static_cast<std::size_t>(var)) += coeff; }

int MilpModel::num_integer() const {
  return static_cast<int>(
      std::count_if(vars_.begin(), vars_.end(), [](const MilpVar& v) { return v.type != VarType::kContinuous; }));
}

double MilpModel::objective_value(const std::vector<double>& x) const {
  double v = objective_constant_;
  for (std::size_t j = 0; j < vars_.size(); ++j) v += objective_[j] * x[j];
  return v;
}

double MilpModel::max_violation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    worst = std::max({worst, vars_[j].lower - x[j], x[j] - vars_[j].upper});
  }
  for (const auto& row : rows_) {
    double a = 0.0;
    for (const auto& t : row.terms) a += t.coeff * x[static_cast<std::size_t>(t.var)];
    if (row.sense != Sense::kGe) worst = std::max(worst, a - row.rhs);
    if (row.sense != Sense::kLe) worst = std::max(worst, row.rhs - a);
  }
  for (const auto& cone : cones_) {
    double s = 0.0;
    for (const auto& t : cone.entries) {
      const double v = t.coeff * x[static_cast<std::size_t>(t.var)];
      s += v * v;
    }
    worst = std::max(worst, std::sqrt(s) - x[static_cast<std::size_t>(cone.bound)]);
  }
  return worst;
}

double MilpModel::max_fractionality(const std::vector<double>& x) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    if (vars_[j].type == VarType::kContinuous) continue;
    worst = std::max(worst, std::fabs(x[j] - std::round(x[j])));
  }
  return worst;
}

LpProblem MilpModel::relaxation() const {
  if (!cones_.empty()) throw UnsupportedNorm("second-order cone rows need an external solver");
  LpProblem lp;
  lp.num_vars = num_vars();
  lp.objective = objective_;
  lp.objective_constant = objective_constant_;
  lp.minimize = minimize_;
  for (const auto& v : vars_) {
    lp.lower.push_back(v.lower);
    lp.upper.push_back(v.upper);
  }
  for (const auto& row : rows_) lp.rows.push_back({row.terms, row.sense, row.rhs});
  return lp;
}

void MilpModel::validate() const {
  const auto check_var = [this](int var) {
    if (var < 0 || var >= num_vars()) throw Error("MILP row references an undeclared variable");
  };
  for (const auto& row : rows_) {
    if (!std::isfinite(row.rhs)) throw Error("MILP row has a non-finite right-hand side");
    for (const auto& t : row.terms) {
      check_var(t.var);
      if (!std::isfinite(t.coeff)) throw Error("MILP row has a non-finite coefficient");
    }
  }
  for (const auto& cone : cones_) {
    check_var(cone.bound);
    for (const auto& t : cone.entries) check_var(t.var);
  }
  for (const auto& m : big_m_) {
    if (!std::isfinite(m.value)) throw Error("big-M value is not finite");
  }
  for (double c : objective_) {
    if (!std::isfinite(c)) throw Error("MILP objective coefficient is not finite");
  }
}

bool structurally_equal(const MilpModel& a, const MilpModel& b) {
  if (a.num_vars() != b.num_vars() || a.num_rows() != b.num_rows() || a.cones().size() != b.cones().size()) {
    return false;
  }
  if (a.minimize() != b.minimize() || a.objective() != b.objective() ||
      a.objective_constant() != b.objective_constant()) {
    return false;
  }
  for (int j = 0; j < a.num_vars(); ++j) {
    const auto& u = a.vars()[j];
    const auto& v = b.vars()[j];
    if (u.lower != v.lower || u.upper != v.upper || u.type != v.type) return false;
  }
  const auto same_terms = [](const std::vector<Term>& s, const std::vector<Term>& t) {
    if (s.size() != t.size()) return false;
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (s[k].var != t[k].var || s[k].coeff != t[k].coeff) return false;
    }
    return true;
  };
  for (int r = 0; r < a.num_rows(); ++r) {
    const auto& s = a.rows()[r];
    const auto& t = b.rows()[r];
    if (s.sense != t.sense || s.rhs != t.rhs || !same_terms(s.terms, t.terms)) return false;
  }
  for (std::size_t c = 0; c < a.cones().size(); ++c) {
    if (a.cones()[c].bound != b.cones()[c].bound || !same_terms(a.cones()[c].entries, b.cones()[c].entries)) {
      return false;
    }
  }
  return true;
}

namespace {

struct Node {
  double bound;
  std::int64_t id;
  std::vector<double> lower;  // over integer variables only
  std::vector<double> upper;
  std::shared_ptr<const LpBasis> basis;
};

struct WorseBound {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

double relative_gap(double objective, double bound) {
  if (!std::isfinite(objective) || !std::isfinite(bound)) return kInf;
  return std::fabs(objective - bound) / std::max(1.0, std::fabs(objective));
}

}  // namespace

MilpSolution solve_milp(const MilpModel& model, const MilpOptions& options) {
  model.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  LpProblem lp = model.relaxation();
  // Internally minimize; flip back on return.
  const double sign = model.minimize() ? 1.0 : -1.0;
  if (!model.minimize()) {
    for (auto& c : lp.objective) c = -c;
    lp.objective_constant = -lp.objective_constant;
    lp.minimize = true;
  }

  std::vector<int> integers;
  for (int j = 0; j < model.num_vars(); ++j) {
    if (model.vars()[j].type != VarType::kContinuous) integers.push_back(j);
  }

  MilpSolution result;
  double incumbent = kInf;
  std::vector<double> incumbent_x;

  std::priority_queue<Node, std::vector<Node>, WorseBound> open;
  Node root{-kInf, 0, {}, {}, nullptr};
  for (int j : integers) {
    root.lower.push_back(std::ceil(lp.lower[j] - options.integrality_tol));
    root.upper.push_back(std::floor(lp.upper[j] + options.integrality_tol));
  }
  open.push(std::move(root));
  std::int64_t next_id = 1;
  bool limit_hit = false;
  bool unbounded = false;

  const auto finish = [&](SolveStatus status, double bound) {
    result.status = status;
    result.x = incumbent_x;
    if (std::isfinite(incumbent)) result.objective = sign * incumbent;
    result.bound = std::isfinite(bound) ? sign * bound : (model.minimize() ? bound : -bound);
    result.gap = relative_gap(incumbent, bound);
    return result;
  };

  while (!open.empty()) {
    const double global_bound = open.top().bound;
    if (std::isfinite(incumbent) && (global_bound >= incumbent ||
                                     relative_gap(incumbent, global_bound) <= options.gap_tol)) {
      return finish(SolveStatus::kOptimal, std::min(global_bound, incumbent));
    }
    if (result.nodes >= options.node_limit || elapsed() > options.time_limit) {
      limit_hit = true;
      break;
    }
    Node node = open.top();
    open.pop();
    ++result.nodes;

    bool empty = false;
    for (std::size_t k = 0; k < integers.size(); ++k) {
      lp.lower[integers[k]] = node.lower[k];
      lp.upper[integers[k]] = node.upper[k];
      if (node.lower[k] > node.upper[k]) empty = true;
    }
    if (empty) continue;
    LpOptions lp_options;
    lp_options.warm_start = node.basis.get();
    LpSolution relaxed = solve_lp(lp, lp_options);
    if (relaxed.status == SolveStatus::kInfeasible) continue;
    if (relaxed.status == SolveStatus::kUnbounded) {
      unbounded = true;
      break;
    }
    if (relaxed.objective >= incumbent) continue;

    int branch = -1;
    double best_score = options.integrality_tol;
    for (std::size_t k = 0; k < integers.size(); ++k) {
      const double v = relaxed.x[integers[k]];
      const double frac = std::fabs(v - std::round(v));
      if (frac > best_score) {
        best_score = frac;
        branch = static_cast<int>(k);
      }
    }
    if (branch < 0) {
      incumbent = relaxed.objective;
      incumbent_x = relaxed.x;
      continue;
    }
    const double v = relaxed.x[integers[branch]];
    std::shared_ptr<const LpBasis> basis;
    if (relaxed.basis) basis = std::make_shared<const LpBasis>(std::move(*relaxed.basis));
    Node down{relaxed.objective, next_id++, node.lower, node.upper, basis};
    down.upper[branch] = std::floor(v);
    Node up{relaxed.objective, next_id++, std::move(node.lower), std::move(node.upper), basis};
    up.lower[branch] = std::ceil(v);
    open.push(std::move(down));
    open.push(std::move(up));
  }

  if (unbounded) {
    result.status = SolveStatus::kUnbounded;
    result.objective = -sign * kInf;
    return result;
  }
  if (limit_hit) return finish(SolveStatus::kTimeLimit, open.empty() ? incumbent : open.top().bound);
  if (std::isfinite(incumbent)) return finish(SolveStatus::kOptimal, incumbent);
  return finish(SolveStatus::kInfeasible, kInf);
}

}  // namespace goml::milp
