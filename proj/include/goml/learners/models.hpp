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


// Surrogate model families and their prediction rules.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "goml/core/dataset.hpp"
#include "goml/core/polyhedron.hpp"

namespace goml::learners {

/// beta0 + beta . x
struct LinearModel {
  double beta0 = 0.0;
  std::vector<double> beta;

  double predict(std::span<const double> x) const;
};

/// Internal nodes route a.x <= b to `left`, otherwise to `right`.
struct TreeNode {
  bool leaf = true;
  std::vector<double> a;
  double b = 0.0;
  int left = -1;
  int right = -1;
  double prediction = 0.0;
};

struct PathStep {
  int node = 0;
  bool went_left = true;
};

class ObliqueTree {
 public:
  ObliqueTree() = default;
  explicit ObliqueTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  /// Single leaf with a constant prediction.
  static ObliqueTree constant(double prediction);

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::vector<TreeNode>& nodes() { return nodes_; }

  /// Node indices of the leaves, in left-to-right order.
  std::vector<int> leaves() const;
  /// Leaf reached by x.
  int leaf_of(std::span<const double> x) const;
  double predict(std::span<const double> x) const { return nodes_[leaf_of(x)].prediction; }
  /// Splits from the root to `leaf`.
  std::vector<PathStep> path(int leaf) const;
  /// Region routed to `leaf`: left steps a.x <= b, right steps a.x > b.
  Polyhedron leaf_polyhedron(int leaf, const Box& box) const;
  int depth() const;
  /// Number of input features (0 for a single leaf).
  std::size_t dim() const;

 private:
  std::vector<TreeNode> nodes_{TreeNode{}};
};

/// base + sum_i weights_i * trees_i(x)
struct GbmEnsemble {
  std::vector<ObliqueTree> trees;
  std::vector<double> weights;
  double base = 0.0;

  double predict(std::span<const double> x) const;
};

struct DenseLayer {
  std::vector<std::vector<double>> weights;  // [out][in]
  std::vector<double> bias;

  std::size_t inputs() const { return weights.empty() ? 0 : weights.front().size(); }
  std::size_t outputs() const { return bias.size(); }
};

/// ReLU hidden layers followed by one linear output unit.
struct Mlp {
  std::vector<DenseLayer> layers;

  double predict(std::span<const double> x) const;
  /// Hidden activations per hidden layer.
  std::vector<std::vector<double>> activations(std::span<const double> x) const;
};

enum class Family { kSvm, kTree, kGbm, kMlp };

const char* to_string(Family family);

using Model = std::variant<LinearModel, ObliqueTree, GbmEnsemble, Mlp>;

/// A trained model standing in for one constraint or the objective.
struct Surrogate {
  Model model;
  Task task = Task::kClassifier;
  Family family = Family::kSvm;
  /// Feasibility threshold: output >= threshold.
  double threshold = 0.0;
  double validation_score = 0.0;
  std::string constraint_id;
  /// Problem variable index of each model input.
  std::vector<int> inputs;
};

/// Threshold used by each family for classification.
double default_threshold(Family family);

/// Model-native output at x (given in model input coordinates).
double predict(const Surrogate& s, std::span<const double> x);
/// Classification verdict predict(s, x) >= threshold.
bool predict_feasible(const Surrogate& s, std::span<const double> x);

}  // namespace goml::learners
