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


// Random bounded MILPs and an exhaustive-enumeration oracle.

#pragma once

#include <optional>

#include "goml/core/random.hpp"
#include "goml/milp/model.hpp"

namespace goml::testing {

inline milp::MilpModel random_milp(Rng& rng, int binaries, int continuous, int rows) {
  milp::MilpModel m;
  for (int j = 0; j < binaries; ++j) m.add_binary();
  for (int j = 0; j < continuous; ++j) m.add_var(-5.0, 5.0);
  const int n = m.num_vars();
  for (int j = 0; j < n; ++j) m.set_objective(j, std::round(rng.uniform(-10, 10)) / 2.0);
  for (int r = 0; r < rows; ++r) {
    std::vector<milp::Term> terms;
    for (int j = 0; j < n; ++j) {
      if (rng.uniform() < 0.6) terms.push_back({j, std::round(rng.uniform(-6, 6)) / 2.0});
    }
    const double pick = rng.uniform();
    const Sense sense = pick < 0.45 ? Sense::kLe : (pick < 0.9 ? Sense::kGe : Sense::kEq);
    m.add_row(std::move(terms), sense, std::round(rng.uniform(-4, 4)) / 2.0);
  }
  return m;
}

/// Optimal objective by fixing every binary assignment and solving the LP.
inline std::optional<double> enumerate_binaries(const milp::MilpModel& m) {
  std::vector<int> bins;
  for (int j = 0; j < m.num_vars(); ++j) {
    if (m.vars()[j].type == milp::VarType::kBinary) bins.push_back(j);
  }
  auto lp = m.relaxation();
  std::optional<double> best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bins.size()); ++mask) {
    for (std::size_t k = 0; k < bins.size(); ++k) {
      const double v = (mask >> k) & 1U ? 1.0 : 0.0;
      lp.lower[bins[k]] = v;
      lp.upper[bins[k]] = v;
    }
    const auto s = milp::solve_lp(lp);
    if (s.status != milp::SolveStatus::kOptimal) continue;
    const bool better = m.minimize() ? s.objective < best.value_or(kInf) : s.objective > best.value_or(-kInf);
    if (!best || better) best = s.objective;
  }
  return best;
}

}  // namespace goml::testing
