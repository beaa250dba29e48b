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

#include "goml/milp/lp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "goml/core/error.hpp"

namespace goml::milp {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kTimeLimit: return "time_limit";
  }
  return "unknown";
}

void LpProblem::validate() const {
  const auto n = static_cast<std::size_t>(num_vars);
  if (objective.size() != n || lower.size() != n || upper.size() != n) {
    throw Error("LP dimension mismatch");
  }
  for (const Row& row : rows) {
    for (const Term& t : row.terms) {
      if (t.var < 0 || t.var >= num_vars) throw Error("LP row references unknown variable");
    }
  }
}

double max_residual(const LpProblem& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (int j = 0; j < lp.num_vars; ++j) {
    worst = std::max(worst, lp.lower[j] - x[j]);
    worst = std::max(worst, x[j] - lp.upper[j]);
  }
  for (const Row& row : lp.rows) {
    double activity = 0.0;
    for (const Term& t : row.terms) activity += t.coeff * x[t.var];
    if (row.sense != Sense::kGe) worst = std::max(worst, activity - row.rhs);
    if (row.sense != Sense::kLe) worst = std::max(worst, row.rhs - activity);
  }
  return worst;
}

namespace {

using Tableau = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kPivotTol = 1e-9;
constexpr int kRefactorInterval = 100;
constexpr int kDegenerateRunBeforeBland = 50;

enum class PhaseResult { kOptimal, kUnbounded };

class Simplex {
 public:
  Simplex(const LpProblem& lp, const LpOptions& options) : lp_(lp), options_(options) {
    n_ = lp.num_vars;
    m_ = static_cast<int>(lp.rows.size());
    build();
  }

  Simplex(const LpProblem& lp, const LpOptions& options, const LpBasis& basis) : lp_(lp), options_(options) {
    n_ = lp.num_vars;
    m_ = static_cast<int>(lp.rows.size());
    build_warm(basis);
  }

  /// Dual simplex from the warm basis, then primal cleanup. Returns nothing
  /// when the warm start is unusable.
  std::optional<LpSolution> solve_warm() {
    if (!warm_ok_) return std::nullopt;
    std::vector<double> cost(static_cast<std::size_t>(total_), 0.0);
    const double sign = lp_.minimize ? 1.0 : -1.0;
    for (int j = 0; j < n_; ++j) cost[j] = sign * lp_.objective[j];
    LpSolution out;
    try {
      if (dual_feasible(cost)) {
        if (!run_dual(cost)) {
          out.status = SolveStatus::kInfeasible;
          out.pivots = pivots_;
          return out;
        }
      } else if (primal_infeasibility() > options_.feasibility_tol) {
        return std::nullopt;
      }
      if (run_phase(cost) == PhaseResult::kUnbounded) return std::nullopt;
      recompute_basic();
    } catch (const NumericalFailure&) {
      return std::nullopt;
    }
    if (primal_infeasibility() > 1e-7 * std::max(1.0, rhs_scale_)) return std::nullopt;
    return finish_optimal(pivots_);
  }

  LpSolution solve() {
    LpSolution out;
    if (num_artificial_ > 0) {
      std::vector<double> phase1(static_cast<std::size_t>(total_), 0.0);
      for (int j = first_artificial_; j < total_; ++j) phase1[j] = 1.0;
      run_phase(phase1);
      refactor();
      double infeasibility = 0.0;
      for (int j = first_artificial_; j < total_; ++j) infeasibility += std::max(0.0, x_[j]);
      if (infeasibility > 1e-7 * std::max(1.0, rhs_scale_)) {
        out.status = SolveStatus::kInfeasible;
        out.pivots = pivots_;
        return out;
      }
      for (int j = first_artificial_; j < total_; ++j) {
        lower_[j] = 0.0;
        upper_[j] = 0.0;
        if (!basic_[j]) x_[j] = 0.0;
      }
      refactor();
    }
    std::vector<double> cost(static_cast<std::size_t>(total_), 0.0);
    const double sign = lp_.minimize ? 1.0 : -1.0;
    for (int j = 0; j < n_; ++j) cost[j] = sign * lp_.objective[j];
    const PhaseResult result = run_phase(cost);
    refactor();
    out.pivots = pivots_;
    if (result == PhaseResult::kUnbounded) {
      out.status = SolveStatus::kUnbounded;
      return out;
    }
    return finish_optimal(out.pivots);
  }

 private:
  LpSolution finish_optimal(std::int64_t pivots) const {
    LpSolution out;
    out.pivots = pivots;
    out.status = SolveStatus::kOptimal;
    out.x.assign(x_.begin(), x_.begin() + n_);
    for (int j = 0; j < n_; ++j) {
      // Snap bound-level noise introduced by refactorization.
      if (out.x[j] < lp_.lower[j]) out.x[j] = lp_.lower[j];
      if (out.x[j] > lp_.upper[j]) out.x[j] = lp_.upper[j];
    }
    out.objective = lp_.objective_constant;
    for (int j = 0; j < n_; ++j) out.objective += lp_.objective[j] * out.x[j];
    const int structural = n_ + m_;
    if (std::all_of(basis_.begin(), basis_.end(), [&](int b) { return b < structural; })) {
      LpBasis basis;
      basis.basic = basis_;
      basis.at_upper.assign(at_upper_.begin(), at_upper_.begin() + structural);
      basis.tableau.resize(static_cast<std::size_t>(m_) * structural);
      for (int r = 0; r < m_; ++r) {
        for (int j = 0; j < structural; ++j) basis.tableau[static_cast<std::size_t>(r) * structural + j] = tableau_(r, j);
      }
      basis.pivots_since_refactor = since_refactor_;
      out.basis = std::move(basis);
    }
    return out;
  }

  double primal_infeasibility() const {
    double worst = 0.0;
    for (int r = 0; r < m_; ++r) {
      const int b = basis_[r];
      worst = std::max({worst, lower_[b] - x_[b], x_[b] - upper_[b]});
    }
    return worst;
  }

  Eigen::VectorXd reduced_costs(const std::vector<double>& cost) const {
    Eigen::VectorXd basic_cost(m_);
    for (int r = 0; r < m_; ++r) basic_cost[r] = cost[basis_[r]];
    Eigen::VectorXd reduced = Eigen::Map<const Eigen::VectorXd>(cost.data(), total_);
    if (m_ > 0) reduced.noalias() -= tableau_.transpose() * basic_cost;
    return reduced;
  }

  double dual_tolerance(const std::vector<double>& cost) const {
    double cost_scale = 1.0;
    for (double c : cost) cost_scale = std::max(cost_scale, std::fabs(c));
    return options_.optimality_tol * cost_scale;
  }

  bool dual_feasible(const std::vector<double>& cost) const {
    const Eigen::VectorXd d = reduced_costs(cost);
    const double tol = 1e3 * dual_tolerance(cost);
    for (int j = 0; j < total_; ++j) {
      if (basic_[j] || lower_[j] == upper_[j]) continue;
      const bool free = !std::isfinite(lower_[j]) && !std::isfinite(upper_[j]);
      if (free && std::fabs(d[j]) > tol) return false;
      if (!free && !at_upper_[j] && d[j] < -tol) return false;
      if (!free && at_upper_[j] && d[j] > tol) return false;
    }
    return true;
  }

  /// Bounded dual simplex; false when the problem is primal infeasible.
  bool run_dual(const std::vector<double>& cost) {
    const double tol = options_.feasibility_tol;
    for (;;) {
      if (pivots_ >= pivot_budget()) throw NumericalFailure("dual simplex pivot budget exhausted");
      if (since_refactor_ >= kRefactorInterval) refactor();
      int leave_row = -1;
      double worst = tol;
      for (int r = 0; r < m_; ++r) {
        const int b = basis_[r];
        const double v = std::max(lower_[b] - x_[b], x_[b] - upper_[b]);
        if (v > worst) {
          worst = v;
          leave_row = r;
        }
      }
      if (leave_row < 0) return true;
      const int leaving = basis_[leave_row];
      const bool increase = x_[leaving] < lower_[leaving];
      const Eigen::VectorXd d = reduced_costs(cost);
      int entering = -1;
      double best_ratio = kInf;
      double best_alpha = 0.0;
      for (int j = 0; j < total_; ++j) {
        if (basic_[j] || lower_[j] == upper_[j]) continue;
        const double alpha = tableau_(leave_row, j);
        if (std::fabs(alpha) <= kPivotTol) continue;
        // Moving x_j by +1 moves the leaving variable by -alpha.
        const double rate = -alpha;
        const bool free = !std::isfinite(lower_[j]) && !std::isfinite(upper_[j]);
        const bool can_up = free || !at_upper_[j];
        const bool can_down = free || at_upper_[j];
        const bool useful = increase ? ((rate > 0.0 && can_up) || (rate < 0.0 && can_down))
                                     : ((rate < 0.0 && can_up) || (rate > 0.0 && can_down));
        if (!useful) continue;
        const double ratio = std::fabs(d[j]) / std::fabs(alpha);
        if (ratio < best_ratio - 1e-12 || (ratio <= best_ratio + 1e-12 && std::fabs(alpha) > best_alpha)) {
          best_ratio = std::min(ratio, best_ratio);
          best_alpha = std::fabs(alpha);
          entering = j;
        }
      }
      if (entering < 0) return false;
      ++pivots_;
      x_[leaving] = increase ? lower_[leaving] : upper_[leaving];
      at_upper_[leaving] = !increase && lower_[leaving] != upper_[leaving];
      pivot(leave_row, entering);
      at_upper_[entering] = false;
      recompute_basic();
    }
  }

  void recompute_basic() {
    Eigen::VectorXd nonbasic_values(total_);
    for (int j = 0; j < total_; ++j) nonbasic_values[j] = basic_[j] ? 0.0 : x_[j];
    const Eigen::VectorXd basic_values = -(tableau_ * nonbasic_values);
    for (int r = 0; r < m_; ++r) x_[basis_[r]] = basic_values[r];
  }

  void build_warm(const LpBasis& warm) {
    warm_ = true;
    total_ = n_ + m_;
    num_artificial_ = 0;
    first_artificial_ = total_;
    if (static_cast<int>(warm.basic.size()) != m_ || static_cast<int>(warm.at_upper.size()) != total_) return;
    lower_.assign(lp_.lower.begin(), lp_.lower.end());
    upper_.assign(lp_.upper.begin(), lp_.upper.end());
    rhs_scale_ = 0.0;
    for (int r = 0; r < m_; ++r) {
      const Row& row = lp_.rows[r];
      rhs_scale_ = std::max(rhs_scale_, std::fabs(row.rhs));
      lower_.push_back(row.sense != Sense::kLe ? row.rhs : -kInf);
      upper_.push_back(row.sense != Sense::kGe ? row.rhs : kInf);
    }
    for (int j = 0; j < n_; ++j) {
      if (lower_[j] > upper_[j]) {
        infeasible_bounds_ = true;
        return;
      }
    }
    matrix_ = Tableau::Zero(m_, total_);
    for (int r = 0; r < m_; ++r) {
      for (const Term& t : lp_.rows[r].terms) matrix_(r, t.var) += t.coeff;
      matrix_(r, n_ + r) = -1.0;
    }
    basis_ = warm.basic;
    basic_.assign(static_cast<std::size_t>(total_), false);
    for (int b : basis_) {
      if (b < 0 || b >= total_ || basic_[b]) return;
      basic_[b] = true;
    }
    at_upper_.assign(static_cast<std::size_t>(total_), false);
    x_.assign(static_cast<std::size_t>(total_), 0.0);
    for (int j = 0; j < total_; ++j) {
      if (basic_[j]) continue;
      const bool lo = std::isfinite(lower_[j]);
      const bool hi = std::isfinite(upper_[j]);
      const bool upper = hi && (warm.at_upper[j] || !lo);
      at_upper_[j] = upper && lower_[j] != upper_[j];
      x_[j] = upper ? upper_[j] : (lo ? lower_[j] : 0.0);
    }
    if (warm.tableau.size() == static_cast<std::size_t>(m_) * total_ &&
        warm.pivots_since_refactor < kRefactorInterval) {
      tableau_ = Eigen::Map<const Tableau>(warm.tableau.data(), m_, total_);
      since_refactor_ = warm.pivots_since_refactor;
      recompute_basic();
    } else {
      try {
        refactor();
      } catch (const NumericalFailure&) {
        return;
      }
    }
    warm_ok_ = true;
  }

 public:

 private:
  void build() {
    // Columns: structural [0, n), slacks [n, n+m), artificials after.
    std::vector<double> activity(static_cast<std::size_t>(m_), 0.0);
    x_.assign(static_cast<std::size_t>(n_ + m_), 0.0);
    lower_.assign(lp_.lower.begin(), lp_.lower.end());
    upper_.assign(lp_.upper.begin(), lp_.upper.end());
    for (int j = 0; j < n_; ++j) {
      if (lower_[j] > upper_[j]) infeasible_bounds_ = true;
      if (std::isfinite(lower_[j])) {
        x_[j] = lower_[j];
      } else if (std::isfinite(upper_[j])) {
        x_[j] = upper_[j];
      } else {
        x_[j] = 0.0;
      }
    }
    rhs_scale_ = 0.0;
    for (int r = 0; r < m_; ++r) {
      const Row& row = lp_.rows[r];
      for (const Term& t : row.terms) activity[r] += t.coeff * x_[t.var];
      rhs_scale_ = std::max(rhs_scale_, std::fabs(row.rhs));
      double lo = -kInf;
      double hi = kInf;
      if (row.sense != Sense::kGe) hi = row.rhs;
      if (row.sense != Sense::kLe) lo = row.rhs;
      lower_.push_back(lo);
      upper_.push_back(hi);
    }
    // Artificial per violated row: a.x - s + sigma * art = 0 with art >= 0.
    std::vector<int> art_row;
    std::vector<double> art_sign;
    for (int r = 0; r < m_; ++r) {
      const double lo = lower_[n_ + r];
      const double hi = upper_[n_ + r];
      const double clipped = std::clamp(activity[r], lo, hi);
      x_[n_ + r] = clipped;
      if (clipped != activity[r]) {
        art_row.push_back(r);
        art_sign.push_back(clipped - activity[r] > 0.0 ? 1.0 : -1.0);
      }
    }
    num_artificial_ = static_cast<int>(art_row.size());
    first_artificial_ = n_ + m_;
    total_ = n_ + m_ + num_artificial_;
    matrix_ = Tableau::Zero(m_, total_);
    for (int r = 0; r < m_; ++r) {
      for (const Term& t : lp_.rows[r].terms) matrix_(r, t.var) += t.coeff;
      matrix_(r, n_ + r) = -1.0;
    }
    basis_.assign(static_cast<std::size_t>(m_), -1);
    basic_.assign(static_cast<std::size_t>(total_), false);
    at_upper_.assign(static_cast<std::size_t>(total_), false);
    for (int r = 0; r < m_; ++r) basis_[r] = n_ + r;
    for (int k = 0; k < num_artificial_; ++k) {
      const int col = first_artificial_ + k;
      const int r = art_row[k];
      matrix_(r, col) = art_sign[k];
      lower_.push_back(0.0);
      upper_.push_back(kInf);
      x_.push_back(std::fabs(x_[n_ + r] - activity[r]));
      basis_[r] = col;
    }
    for (int r = 0; r < m_; ++r) basic_[basis_[r]] = true;
    for (int j = 0; j < total_; ++j) {
      if (!basic_[j] && !std::isfinite(lower_[j]) && std::isfinite(upper_[j])) at_upper_[j] = true;
      if (!basic_[j] && std::isfinite(upper_[j]) && x_[j] == upper_[j] && x_[j] != lower_[j]) at_upper_[j] = true;
    }
    for (int r = 0; r < m_; ++r) {
      const int col = basis_[r];
      if (col >= first_artificial_) continue;
      // Slack rows whose activity lies inside [lo, hi]: slack is basic with
      // that value; nonbasic slacks do not occur initially.
      x_[col] = activity[r];
    }
    if (infeasible_bounds_) return;
    refactor();
  }

  void refactor() {
    if (m_ == 0) return;
    Eigen::MatrixXd basis_matrix(m_, m_);
    for (int r = 0; r < m_; ++r) basis_matrix.col(r) = matrix_.col(basis_[r]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
    if (warm_) {
      if (lu.rcond() < 1e-13) throw NumericalFailure("ill-conditioned basis");
    }
    Eigen::MatrixXd solved = lu.solve(Eigen::MatrixXd(matrix_));
    if (!solved.allFinite()) throw NumericalFailure("singular basis during refactorization");
    tableau_ = solved;
    Eigen::VectorXd nonbasic_values(total_);
    for (int j = 0; j < total_; ++j) nonbasic_values[j] = basic_[j] ? 0.0 : x_[j];
    const Eigen::VectorXd basic_values = -(tableau_ * nonbasic_values);
    for (int r = 0; r < m_; ++r) x_[basis_[r]] = basic_values[r];
    since_refactor_ = 0;
  }

  std::int64_t pivot_budget() const {
    if (options_.max_pivots > 0) return options_.max_pivots;
    return 50LL * (m_ + total_) + 10000;
  }

  PhaseResult run_phase(const std::vector<double>& cost) {
    double cost_scale = 1.0;
    for (double c : cost) cost_scale = std::max(cost_scale, std::fabs(c));
    const double dual_tol = options_.optimality_tol * cost_scale;
    int degenerate_run = 0;
    bool bland = false;
    Eigen::VectorXd basic_cost(m_);
    Eigen::VectorXd reduced(total_);
    for (;;) {
      if (pivots_ >= pivot_budget()) throw NumericalFailure("simplex pivot budget exhausted");
      if (since_refactor_ >= kRefactorInterval) refactor();
      for (int r = 0; r < m_; ++r) basic_cost[r] = cost[basis_[r]];
      reduced = Eigen::Map<const Eigen::VectorXd>(cost.data(), total_);
      if (m_ > 0) reduced.noalias() -= tableau_.transpose() * basic_cost;

      int entering = -1;
      double direction = 0.0;
      double best = 0.0;
      for (int j = 0; j < total_; ++j) {
        if (basic_[j] || lower_[j] == upper_[j]) continue;
        const double d = reduced[j];
        double dir = 0.0;
        const bool free = !std::isfinite(lower_[j]) && !std::isfinite(upper_[j]);
        if (free) {
          if (std::fabs(d) > dual_tol) dir = d < 0.0 ? 1.0 : -1.0;
        } else if (!at_upper_[j] && d < -dual_tol) {
          dir = 1.0;
        } else if (at_upper_[j] && d > dual_tol) {
          dir = -1.0;
        }
        if (dir == 0.0) continue;
        if (bland) {
          entering = j;
          direction = dir;
          break;
        }
        if (std::fabs(d) > best) {
          best = std::fabs(d);
          entering = j;
          direction = dir;
        }
      }
      if (entering < 0) return PhaseResult::kOptimal;

      // Harris ratio test. delta[r] is the rate of change of basic r.
      const double tol = options_.feasibility_tol;
      double theta_max = kInf;
      for (int r = 0; r < m_; ++r) {
        const double alpha = tableau_(r, entering);
        if (std::fabs(alpha) <= kPivotTol) continue;
        const double delta = -direction * alpha;
        const int b = basis_[r];
        double limit = kInf;
        if (delta < 0.0 && std::isfinite(lower_[b])) limit = (x_[b] - lower_[b] + tol) / -delta;
        if (delta > 0.0 && std::isfinite(upper_[b])) limit = (upper_[b] - x_[b] + tol) / delta;
        theta_max = std::min(theta_max, std::max(limit, 0.0));
      }
      const double range = upper_[entering] - lower_[entering];
      int leave_row = -1;
      double theta = kInf;
      if (std::isfinite(theta_max)) {
        double best_alpha = -1.0;
        for (int r = 0; r < m_; ++r) {
          const double alpha = tableau_(r, entering);
          if (std::fabs(alpha) <= kPivotTol) continue;
          const double delta = -direction * alpha;
          const int b = basis_[r];
          double ratio = kInf;
          if (delta < 0.0 && std::isfinite(lower_[b])) ratio = std::max(0.0, x_[b] - lower_[b]) / -delta;
          if (delta > 0.0 && std::isfinite(upper_[b])) ratio = std::max(0.0, upper_[b] - x_[b]) / delta;
          if (ratio > theta_max) continue;
          if (bland) {
            if (leave_row < 0 || ratio < theta || (ratio == theta && b < basis_[leave_row])) {
              leave_row = r;
              theta = ratio;
            }
          } else if (std::fabs(alpha) > best_alpha) {
            best_alpha = std::fabs(alpha);
            leave_row = r;
            theta = ratio;
          }
        }
      }
      const bool flip = std::isfinite(range) && range <= theta;
      if (!flip && leave_row < 0) return PhaseResult::kUnbounded;
      if (flip) theta = range;

      ++pivots_;
      const double previous_objective = objective(cost);
      for (int r = 0; r < m_; ++r) {
        const double alpha = tableau_(r, entering);
        if (alpha != 0.0) x_[basis_[r]] += -direction * alpha * theta;
      }
      if (flip) {
        at_upper_[entering] = !at_upper_[entering];
        x_[entering] = at_upper_[entering] ? upper_[entering] : lower_[entering];
      } else {
        x_[entering] += direction * theta;
        const int leaving = basis_[leave_row];
        const double delta = -direction * tableau_(leave_row, entering);
        if (delta < 0.0) {
          x_[leaving] = lower_[leaving];
          at_upper_[leaving] = false;
        } else {
          x_[leaving] = upper_[leaving];
          at_upper_[leaving] = true;
        }
        if (lower_[leaving] == upper_[leaving]) at_upper_[leaving] = false;
        pivot(leave_row, entering);
      }
      const double improvement = previous_objective - objective(cost);
      if (theta <= 1e-12 || improvement <= 1e-14 * std::max(1.0, std::fabs(previous_objective))) {
        if (++degenerate_run >= kDegenerateRunBeforeBland) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
    }
  }

  double objective(const std::vector<double>& cost) const {
    double v = 0.0;
    for (int j = 0; j < total_; ++j) {
      if (cost[j] != 0.0) v += cost[j] * x_[j];
    }
    return v;
  }

  void pivot(int row, int col) {
    const int leaving = basis_[row];
    const double p = tableau_(row, col);
    tableau_.row(row) /= p;
    for (int r = 0; r < m_; ++r) {
      if (r == row) continue;
      const double f = tableau_(r, col);
      if (f != 0.0) tableau_.row(r) -= f * tableau_.row(row);
    }
    basic_[leaving] = false;
    basic_[col] = true;
    basis_[row] = col;
    ++since_refactor_;
  }

 public:
  bool infeasible_bounds() const { return infeasible_bounds_; }

 private:
  const LpProblem& lp_;
  LpOptions options_;
  int n_ = 0;
  int m_ = 0;
  int total_ = 0;
  int num_artificial_ = 0;
  int first_artificial_ = 0;
  double rhs_scale_ = 0.0;
  bool infeasible_bounds_ = false;
  bool warm_ok_ = false;
  bool warm_ = false;
  Tableau matrix_;
  Tableau tableau_;
  std::vector<double> x_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<int> basis_;
  std::vector<bool> basic_;
  std::vector<bool> at_upper_;
  std::int64_t pivots_ = 0;
  int since_refactor_ = 0;
};

}  // namespace

LpSolution solve_lp(const LpProblem& lp, const LpOptions& options) {
  lp.validate();
  if (options.warm_start) {
    Simplex warm(lp, options, *options.warm_start);
    if (warm.infeasible_bounds()) return LpSolution{SolveStatus::kInfeasible, {}, 0.0, 0, std::nullopt};
    if (auto solved = warm.solve_warm()) return *std::move(solved);
  }
  Simplex simplex(lp, options);
  if (simplex.infeasible_bounds()) return LpSolution{SolveStatus::kInfeasible, {}, 0.0, 0, std::nullopt};
  return simplex.solve();
}

}  // namespace goml::milp
