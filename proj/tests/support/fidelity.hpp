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


// Fixed-input MILP solves compared against direct model predictions.

#pragma once

#include <cmath>
#include <variant>

#include "goml/core/random.hpp"
#include "goml/encoder/encoder.hpp"
#include "goml/learners/models.hpp"

namespace goml::testing {

struct FidelityResult {
  int checked = 0;
  int mismatches = 0;
  int skipped = 0;
  double max_error = 0.0;
};

/// Smallest |a.x - b| over the splits of the surrogate's trees.
inline double split_margin(const learners::Surrogate& s, const std::vector<double>& x) {
  double margin = kInf;
  const auto scan = [&](const learners::ObliqueTree& t) {
    for (const auto& n : t.nodes()) {
      if (n.leaf) continue;
      double ax = 0.0;
      for (std::size_t k = 0; k < n.a.size(); ++k) ax += n.a[k] * x[k];
      margin = std::min(margin, std::fabs(ax - n.b));
    }
  };
  if (const auto* t = std::get_if<learners::ObliqueTree>(&s.model)) scan(*t);
  if (const auto* g = std::get_if<learners::GbmEnsemble>(&s.model)) {
    for (const auto& t : g->trees) scan(t);
  }
  return margin;
}

inline FidelityResult check_fidelity(const learners::Surrogate& s, const Box& box, int n, Rng& rng) {
  FidelityResult r;
  for (int trial = 0; trial < n; ++trial) {
    std::vector<double> x(box.dim());
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = rng.uniform(box.lower[k], box.upper[k]);
    if (split_margin(s, x) < 1e-5) {
      ++r.skipped;
      continue;
    }
    milp::MilpModel m;
    encoder::InputMap in;
    in.box = box;
    for (std::size_t k = 0; k < x.size(); ++k) in.vars.push_back(m.add_var(box.lower[k], box.upper[k]));
    const auto expr = encoder::encode_surrogate(s, in, m);
    for (std::size_t k = 0; k < x.size(); ++k) m.add_row({{in.vars[k], 1.0}}, Sense::kEq, x[k]);
    ++r.checked;
    if (s.task == Task::kClassifier) {
      m.add_row(expr.terms, Sense::kGe, s.threshold - expr.constant);
      const auto sol = milp::solve_milp(m);
      const bool feasible = sol.status == milp::SolveStatus::kOptimal;
      if (feasible != learners::predict_feasible(s, x)) ++r.mismatches;
    } else {
      const int y = encoder::materialize(expr, m);
      m.set_objective(y, 1.0);
      const auto sol = milp::solve_milp(m);
      if (sol.status != milp::SolveStatus::kOptimal) {
        ++r.mismatches;
        continue;
      }
      const double err = std::fabs(sol.x[static_cast<std::size_t>(y)] - learners::predict(s, x));
      r.max_error = std::max(r.max_error, err);
      if (err > 1e-6) ++r.mismatches;
    }
  }
  return r;
}

}  // namespace goml::testing
