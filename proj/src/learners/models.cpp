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


#include "goml/learners/models.hpp"

#include <algorithm>
#include <functional>

namespace goml::learners {

namespace {

double dot(const std::vector<double>& a, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * x[i];
  return s;
}

}  // namespace

double LinearModel::predict(std::span<const double> x) const { return beta0 + dot(beta, x); }

ObliqueTree ObliqueTree::constant(double prediction) {
  TreeNode leaf;
  leaf.prediction = prediction;
  return ObliqueTree({leaf});
}

std::vector<int> ObliqueTree::leaves() const {
  std::vector<int> out;
  std::function<void(int)> walk = [&](int k) {
    if (nodes_[k].leaf) {
      out.push_back(k);
      return;
    }
    walk(nodes_[k].left);
    walk(nodes_[k].right);
  };
  walk(0);
  return out;
}

int ObliqueTree::leaf_of(std::span<const double> x) const {
  int k = 0;
  while (!nodes_[k].leaf) {
    const auto& node = nodes_[k];
    k = dot(node.a, x) <= node.b ? node.left : node.right;
  }
  return k;
}

std::vector<PathStep> ObliqueTree::path(int leaf) const {
  std::vector<int> parent(nodes_.size(), -1);
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    if (nodes_[k].leaf) continue;
    parent[nodes_[k].left] = static_cast<int>(k);
    parent[nodes_[k].right] = static_cast<int>(k);
  }
  std::vector<PathStep> steps;
  for (int k = leaf; parent[k] >= 0; k = parent[k]) {
    steps.push_back({parent[k], nodes_[parent[k]].left == k});
  }
  std::reverse(steps.begin(), steps.end());
  return steps;
}

Polyhedron ObliqueTree::leaf_polyhedron(int leaf, const Box& box) const {
  Polyhedron poly;
  poly.box = box;
  for (const auto& step : path(leaf)) {
    const auto& node = nodes_[step.node];
    if (step.went_left) {
      poly.rows.push_back({node.a, node.b, false});
    } else {
      std::vector<double> neg(node.a.size());
      for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -node.a[i];
      poly.rows.push_back({std::move(neg), -node.b, true});
    }
  }
  return poly;
}

int ObliqueTree::depth() const {
  std::function<int(int)> walk = [&](int k) -> int {
    if (nodes_[k].leaf) return 0;
    return 1 + std::max(walk(nodes_[k].left), walk(nodes_[k].right));
  };
  return walk(0);
}

std::size_t ObliqueTree::dim() const {
  for (const auto& node : nodes_) {
    if (!node.leaf) return node.a.size();
  }
  return 0;
}

double GbmEnsemble::predict(std::span<const double> x) const {
  double y = base;
  for (std::size_t i = 0; i < trees.size(); ++i) y += weights[i] * trees[i].predict(x);
  return y;
}

std::vector<std::vector<double>> Mlp::activations(std::span<const double> x) const {
  std::vector<std::vector<double>> out;
  std::vector<double> v(x.begin(), x.end());
  for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
    const auto& layer = layers[l];
    std::vector<double> next(layer.outputs());
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = std::max(0.0, layer.bias[i] + dot(layer.weights[i], v));
    out.push_back(next);
    v = std::move(next);
  }
  return out;
}

double Mlp::predict(std::span<const double> x) const {
  const auto hidden = activations(x);
  const std::vector<double> input(x.begin(), x.end());
  const auto& v = hidden.empty() ? input : hidden.back();
  const auto& out = layers.back();
  return out.bias[0] + dot(out.weights[0], v);
}

const char* to_string(Family family) {
  switch (family) {
    case Family::kSvm: return "svm";
    case Family::kTree: return "tree";
    case Family::kGbm: return "gbm";
    case Family::kMlp: return "mlp";
  }
  return "?";
}

double default_threshold(Family family) {
  return family == Family::kTree || family == Family::kGbm ? 0.5 : 0.0;
}

double predict(const Surrogate& s, std::span<const double> x) {
  return std::visit([&](const auto& m) { return m.predict(x); }, s.model);
}

bool predict_feasible(const Surrogate& s, std::span<const double> x) { return predict(s, x) >= s.threshold; }

}  // namespace goml::learners
