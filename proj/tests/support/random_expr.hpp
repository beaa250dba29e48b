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

// Random expression generation and a finite-difference oracle for tests.

#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "goml/core/error.hpp"
#include "goml/core/random.hpp"
#include "goml/expr/expr.hpp"

namespace goml::testing {

inline expr::Expr random_expr(Rng& rng, int n, int depth) {
  using expr::Expr;
  using expr::Op;
  if (depth == 0 || rng.uniform() < 0.2) {
    if (rng.uniform() < 0.35) return Expr::constant(std::round(rng.uniform(-3.0, 3.0) * 100.0) / 100.0);
    return Expr::variable(static_cast<int>(rng.index(static_cast<std::size_t>(n))));
  }
  const double pick = rng.uniform();
  if (pick < 0.3) {
    static const Op unary[] = {Op::kNeg, Op::kExp, Op::kLn, Op::kSqrt, Op::kSin, Op::kCos, Op::kAbs};
    const Op op = unary[rng.index(7)];
    Expr arg = random_expr(rng, n, depth - 1);
    if (op == Op::kExp) arg = Expr::binary(Op::kMul, Expr::constant(0.3), arg);
    return Expr::unary(op, arg);
  }
  if (pick < 0.4) {
    const double exponent = static_cast<double>(rng.index(4)) + 1.0;
    return Expr::binary(Op::kPow, random_expr(rng, n, depth - 1), Expr::constant(exponent));
  }
  static const Op binary[] = {Op::kAdd, Op::kSub, Op::kMul, Op::kDiv};
  const Op op = binary[rng.index(4)];
  return Expr::binary(op, random_expr(rng, n, depth - 1), random_expr(rng, n, depth - 1));
}

/// Central differences with h = 1e-6 max(1, |x_i|); nullopt when any probe
/// leaves the domain.
inline std::optional<std::vector<double>> central_difference(const expr::Expr& e, std::vector<double> x) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    const double h = 1e-6 * std::max(1.0, std::fabs(xi));
    try {
      x[i] = xi + h;
      const double up = e.eval(x);
      x[i] = xi - h;
      const double down = e.eval(x);
      g[i] = (up - down) / (2.0 * h);
    } catch (const EvaluationError&) {
      return std::nullopt;
    }
    x[i] = xi;
  }
  return g;
}

}  // namespace goml::testing
