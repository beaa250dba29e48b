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


// Mixed-integer linear encodings of trained surrogates.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "goml/core/problem.hpp"
#include "goml/learners/models.hpp"
#include "goml/milp/model.hpp"

namespace goml::encoder {

/// Half-width of the band |y| <= eps that stands in for h(x) = 0.
inline constexpr double kEqualityBand = 1e-4;

/// Norm of the uncertainty set; the robust rows use its dual.
enum class UncertaintyNorm { kOne, kTwo, kInf };

const char* to_string(UncertaintyNorm p);

struct RobustConfig {
  double rho = 0.0;
  UncertaintyNorm p = UncertaintyNorm::kOne;
  bool linear = true;
  bool trees = true;
  bool gbm = true;

  /// Throws Error when rho is negative or not finite.
  void validate() const;
};

struct RelaxConfig {
  bool enabled = false;
  double lambda = 1e2;
};

/// sum(terms) + constant over MILP variables.
struct Affine {
  std::vector<milp::Term> terms;
  double constant = 0.0;

  double value(const std::vector<double>& x) const;
};

/// MILP variables holding the surrogate inputs, and the box they live in.
struct InputMap {
  std::vector<int> vars;
  Box box;
};

/// 1.01 * max over the box of |a.x - b|, at least 1.
double big_m_value(std::span<const double> a, double b, const Box& box);

/// beta0 + beta.x
Affine encode_linear_model(const learners::LinearModel& m, const InputMap& in, milp::MilpModel& milp);

/// beta0 + beta.x - rho * t with t >= ||beta (.) x||_q.
Affine robustify_linear(const learners::LinearModel& m, const RobustConfig& cfg, const InputMap& in,
                        milp::MilpModel& milp);

/// sum_i z_i p_i with one binary per leaf, sum z = 1, and big-M split rows.
/// A robust config with rho > 0 tightens every split by rho * ||a (.) x||_q.
Affine encode_tree(const learners::ObliqueTree& t, const InputMap& in, milp::MilpModel& milp,
                   const RobustConfig* robust = nullptr);

/// base + sum_i w_i y_i over the encoded trees.
Affine encode_gbm(const learners::GbmEnsemble& g, const InputMap& in, milp::MilpModel& milp,
                  const RobustConfig* robust = nullptr);

/// ReLU network with big-M activations from interval propagation.
Affine encode_mlp(const learners::Mlp& m, const InputMap& in, milp::MilpModel& milp);

/// Dispatches on the surrogate family. Robustness applies to classifier
/// SVM, tree and GBM surrogates when enabled for that family.
Affine encode_surrogate(const learners::Surrogate& s, const InputMap& in, milp::MilpModel& milp,
                        const RobustConfig* robust = nullptr);

/// New continuous variable y with the row y = expr.
int materialize(const Affine& expr, milp::MilpModel& milp);

/// Surrogates for one standard problem: one per nonlinear constraint, in
/// order, plus one for a nonlinear objective.
struct SurrogateSet {
  std::vector<learners::Surrogate> constraints;
  std::optional<learners::Surrogate> objective;
};

/// The approximation MILP. Variables 0..n-1 are the problem variables.
milp::MilpModel assemble(const StandardProblem& sp, const SurrogateSet& surrogates,
                         const RobustConfig* robust = nullptr, const RelaxConfig* relax = nullptr);

/// Sum of relaxation slacks at x.
double relaxation_total(const milp::MilpModel& model, const std::vector<double>& x);

}  // namespace goml::encoder
