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


// Shared hand-built models and datasets.

#pragma once

#include <cmath>
#include <functional>

#include "goml/core/dataset.hpp"
#include "goml/core/random.hpp"
#include "goml/learners/models.hpp"

namespace goml::testing {

/// Oblique tree approximating g2 of the illustrative problem: feasible
/// leaves z1, z2, z3 and infeasible z4. Each split sends its >= side left.
inline learners::ObliqueTree three_split_tree() {
  using learners::TreeNode;
  std::vector<TreeNode> nodes(7);
  nodes[0] = {false, {0.0, -1.0}, -0.9319, 1, 2, 0.0};
  nodes[1] = {true, {}, 0.0, -1, -1, 1.0};                       // z1
  nodes[2] = {false, {-0.1712, 0.06246}, -0.06421, 3, 6, 0.0};
  nodes[3] = {false, {-0.4823, 0.4313}, -0.04902, 4, 5, 0.0};
  nodes[4] = {true, {}, 0.0, -1, -1, 0.0};                       // z4
  nodes[5] = {true, {}, 0.0, -1, -1, 1.0};                       // z3
  nodes[6] = {true, {}, 0.0, -1, -1, 1.0};                       // z2
  return learners::ObliqueTree(nodes);
}

inline Dataset labeled_grid(const Box& box, int per_dim, const std::function<double(const std::vector<double>&)>& f) {
  Dataset data;
  const std::size_t d = box.dim();
  std::vector<int> idx(d, 0);
  while (true) {
    std::vector<double> x(d);
    for (std::size_t k = 0; k < d; ++k) {
      x[k] = box.lower[k] + (box.upper[k] - box.lower[k]) * (idx[k] + 0.5) / per_dim;
    }
    const double v = f(x);
    data.push_back({x, v <= 0.0 ? 1.0 : 0.0, v});
    std::size_t k = 0;
    while (k < d && ++idx[k] == per_dim) idx[k++] = 0;
    if (k == d) break;
  }
  return data;
}

inline Dataset random_labeled(Rng& rng, const Box& box, int n, const std::function<double(const std::vector<double>&)>& f) {
  Dataset data;
  for (int i = 0; i < n; ++i) {
    std::vector<double> x(box.dim());
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = rng.uniform(box.lower[k], box.upper[k]);
    const double v = f(x);
    data.push_back({x, v <= 0.0 ? 1.0 : 0.0, v});
  }
  return data;
}

inline Dataset random_regression(Rng& rng, const Box& box, int n, const std::function<double(const std::vector<double>&)>& f) {
  Dataset data;
  for (int i = 0; i < n; ++i) {
    std::vector<double> x(box.dim());
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = rng.uniform(box.lower[k], box.upper[k]);
    const double v = f(x);
    data.push_back({x, v, v});
  }
  return data;
}

}  // namespace goml::testing
