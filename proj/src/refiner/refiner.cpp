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


#include "goml/refiner/refiner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "goml/core/error.hpp"

namespace goml::refiner {
namespace {

struct Half {
  std::vector<double> a;
  double b = 0.0;
  double norm2 = 0.0;
};

double dot(const std::vector<double>& a, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * x[i];
  return s;
}

}  // namespace

std::vector<double> project(std::span<const double> x, const std::vector<LinearConstraint>& rows, const Box& box,
                            const std::vector<bool>& frozen, const ProjectionOptions& options) {
  const std::size_t n = x.size();
  std::vector<double> y(x.begin(), x.end());
  // Rows become a.x <= b halfspaces over the free coordinates.
  std::vector<Half> halves;
  for (const auto& row : rows) {
    Half h;
    h.a.assign(n, 0.0);
    h.b = row.rhs;
    for (std::size_t j = 0; j < n && j < row.coeffs.size(); ++j) {
      if (frozen[j]) {
        h.b -= row.coeffs[j] * y[j];
      } else {
        h.a[j] = row.coeffs[j];
        h.norm2 += row.coeffs[j] * row.coeffs[j];
      }
    }
    if (row.sense != Sense::kGe) halves.push_back(h);
    if (row.sense != Sense::kLe) {
      for (auto& v : h.a) v = -v;
      h.b = -h.b;
      halves.push_back(std::move(h));
    }
  }
  const auto violation = [&](const std::vector<double>& z) {
    double worst = 0.0;
    for (const auto& h : halves) worst = std::max(worst, dot(h.a, z) - h.b);
    for (std::size_t j = 0; j < n; ++j) {
      if (!frozen[j]) worst = std::max({worst, box.lower[j] - z[j], z[j] - box.upper[j]});
    }
    return worst;
  };
  if (violation(y) <= options.tol) return y;

  std::vector<std::vector<double>> inc(halves.size() + 1, std::vector<double>(n, 0.0));
  std::vector<double> z(n);
  std::vector<double> previous(n);
  std::vector<std::vector<double>> previous_inc;
  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    previous = y;
    previous_inc = inc;
    for (std::size_t k = 0; k < halves.size(); ++k) {
      const auto& h = halves[k];
      for (std::size_t j = 0; j < n; ++j) z[j] = y[j] + inc[k][j];
      const double excess = dot(h.a, z) - h.b;
      if (excess > 0.0 && h.norm2 > 0.0) {
        const double t = excess / h.norm2;
        for (std::size_t j = 0; j < n; ++j) y[j] = z[j] - t * h.a[j];
      } else {
        y = z;
      }
      for (std::size_t j = 0; j < n; ++j) inc[k][j] = z[j] - y[j];
    }
    auto& bi = inc.back();
    for (std::size_t j = 0; j < n; ++j) {
      z[j] = y[j] + bi[j];
      y[j] = frozen[j] ? z[j] : std::clamp(z[j], box.lower[j], box.upper[j]);
      bi[j] = z[j] - y[j];
    }
    double change = 0.0;
    for (std::size_t j = 0; j < n; ++j) change = std::max(change, std::fabs(y[j] - previous[j]));
    for (std::size_t k = 0; k < inc.size(); ++k) {
      for (std::size_t j = 0; j < n; ++j) change = std::max(change, std::fabs(inc[k][j] - previous_inc[k][j]));
    }
    if (violation(y) <= options.tol && change <= 1e-12) return y;
  }
  if (violation(y) > 1e-6) throw ProjectionStall("projection did not reach the feasible set");
  return y;
}

void PgdConfig::validate() const {
  if (!(momentum >= 0.0 && momentum < 1.0)) throw Error("momentum must lie in [0, 1)");
  if (!(penalty > 0.0)) throw Error("penalty must be positive");
  if (iterations < 0 || max_halvings < 0) throw Error("iteration counts must be non-negative");
}

MeritState evaluate_merit(const Problem& p, std::span<const double> x, double penalty) {
  MeritState s;
  s.x.assign(x.begin(), x.end());
  s.objective = p.objective.value(x);
  double total = 0.0;
  for (const auto& con : p.nonlinear) {
    const double v = con.violation(x);
    s.violations.push_back(v);
    total += v;
  }
  for (const auto& row : p.linear) total += row.violation(x);
  s.max_violation = p.max_violation(x);
  s.merit = s.objective + penalty * total;
  if (!std::isfinite(s.merit)) throw EvaluationError("merit is not finite");
  return s;
}

namespace {

/// Violations below this level do not contribute to the merit gradient.
constexpr double kActiveViolation = 1e-9;

std::vector<double> merit_gradient(const Problem& p, const MeritState& s, double penalty) {
  std::vector<double> g = p.objective.gradient(s.x);
  for (std::size_t i = 0; i < p.nonlinear.size(); ++i) {
    if (s.violations[i] <= kActiveViolation) continue;
    const auto& con = p.nonlinear[i];
    const double sign = con.kind() == ConstraintKind::kEquality && con.value(s.x) < 0.0 ? -1.0 : 1.0;
    const auto gc = con.gradient(s.x);
    for (std::size_t j = 0; j < g.size(); ++j) g[j] += penalty * sign * gc[j];
  }
  for (const auto& row : p.linear) {
    if (row.violation(s.x) <= kActiveViolation) continue;
    const double sign = row.activity(s.x) > row.rhs ? 1.0 : -1.0;
    for (std::size_t j = 0; j < g.size(); ++j) g[j] += penalty * sign * row.coeffs[j];
  }
  return g;
}

/// g(x) + grad g(x).(y - x) as a linear row in y.
LinearConstraint linearization(const NonlinearConstraint& con, const std::vector<double>& x) {
  LinearConstraint row;
  row.coeffs = con.gradient(x);
  row.rhs = -con.value(x) + std::inner_product(row.coeffs.begin(), row.coeffs.end(), x.begin(), 0.0);
  row.sense = con.kind() == ConstraintKind::kEquality ? Sense::kEq : Sense::kLe;
  return row;
}

/// First-order models of the nonlinear constraints at x over the free
/// coordinates; with only_violated, just those violated at x.
std::vector<LinearConstraint> models_at(const Problem& p, const std::vector<double>& x,
                                        const std::vector<bool>& frozen, bool only_violated) {
  std::vector<LinearConstraint> models;
  for (const auto& con : p.nonlinear) {
    if (only_violated && con.violation(x) <= 1e-12) continue;
    auto m = linearization(con, x);
    for (std::size_t j = 0; j < frozen.size(); ++j) {
      if (frozen[j]) {
        m.rhs -= m.coeffs[j] * x[j];
        m.coeffs[j] = 0.0;
      }
    }
    models.push_back(std::move(m));
  }
  return models;
}

/// Newton-style restoration: re-linearize violated constraints at y and
/// project again, a few times.
std::vector<double> restore(const Problem& p, std::vector<double> y, const Box& box, const std::vector<bool>& frozen) {
  for (int round = 0; round < 3; ++round) {
    auto rows = models_at(p, y, frozen, true);
    if (rows.empty()) break;
    rows.insert(rows.end(), p.linear.begin(), p.linear.end());
    try {
      y = project(y, rows, box, frozen);
    } catch (const ProjectionStall&) {
      break;
    }
  }
  return y;
}

/// Projects onto the linear rows plus the first-order models that the point
/// would otherwise violate. Falls back to the linear rows alone.
std::vector<double> project_step(const Problem& p, const std::vector<double>& trial,
                                 const std::vector<LinearConstraint>& models, const Box& box,
                                 const std::vector<bool>& frozen) {
  std::vector<double> y = project(trial, p.linear, box, frozen);
  if (models.empty()) return y;
  std::vector<bool> used(models.size(), false);
  std::vector<LinearConstraint> rows = p.linear;
  for (int round = 0; round < 5; ++round) {
    bool added = false;
    for (std::size_t i = 0; i < models.size(); ++i) {
      if (used[i] || models[i].violation(y) <= 1e-12) continue;
      used[i] = true;
      rows.push_back(models[i]);
      added = true;
    }
    if (!added) return y;
    try {
      y = project(trial, rows, box, frozen);
    } catch (const ProjectionStall&) {
      return project(trial, p.linear, box, frozen);
    }
  }
  return y;
}

}  // namespace

MeritState pgd_improve(const StandardProblem& sp, std::span<const double> x0, const PgdConfig& config) {
  config.validate();
  const Problem& p = sp.problem;
  const Box box = p.box();
  const auto frozen = p.integral_mask();
  MeritState best = evaluate_merit(p, x0, config.penalty);
  MeritState current = best;
  std::vector<double> momentum(x0.size(), 0.0);
  bool momentum_on = false;
  try {
    for (int it = 0; it < config.iterations; ++it) {
      auto grad = merit_gradient(p, current, config.penalty);
      for (std::size_t j = 0; j < grad.size(); ++j) {
        if (frozen[j]) grad[j] = 0.0;
        if (momentum_on && config.use_momentum) grad[j] += config.momentum * momentum[j];
      }
      std::vector<LinearConstraint> models;
      if (config.linearize) models = models_at(p, current.x, frozen, false);
      double step = config.initial_step;
      bool accepted = false;
      std::vector<double> trial(x0.size());
      for (int h = 0; h <= config.max_halvings; ++h, step *= 0.5) {
        for (std::size_t j = 0; j < trial.size(); ++j) trial[j] = current.x[j] - step * grad[j];
        std::vector<double> y;
        try {
          y = project_step(p, trial, models, box, frozen);
          if (config.linearize) y = restore(p, std::move(y), box, frozen);
        } catch (const ProjectionStall&) {
          continue;
        }
        double moved = 0.0;
        for (std::size_t j = 0; j < y.size(); ++j) moved = std::max(moved, std::fabs(y[j] - current.x[j]));
        if (moved < config.step_tol) break;
        MeritState next = evaluate_merit(p, y, config.penalty);
        if (next.merit < current.merit) {
          for (std::size_t j = 0; j < grad.size(); ++j) momentum[j] = grad[j];
          current = std::move(next);
          accepted = true;
          break;
        }
      }
      current.iterations = it + 1;
      if (!accepted && momentum_on && config.use_momentum && config.momentum > 0.0) {
        // Retry the iteration along the plain gradient.
        momentum_on = false;
        --it;
        continue;
      }
      momentum_on = accepted;
      if (!accepted) break;
      if (current.merit < best.merit) best = current;
    }
  } catch (const EvaluationError&) {
    best.evaluation_failed = true;
  }
  best.iterations = current.iterations;
  return best;
}

}  // namespace goml::refiner
