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


// Training routines for the four surrogate families and model selection.

#pragma once

#include <cstdint>
#include <vector>

#include "goml/learners/models.hpp"

namespace goml::learners {

struct SvcConfig {
  double lambda = 1e-4;
  int epochs = 60;
  std::uint64_t seed = 0;
};

struct SvrConfig {
  /// Width of the insensitive band as a fraction of the label spread.
  double epsilon_fraction = 1e-3;
  double lambda = 1e-6;
  int iterations = 300;
};

struct TreeConfig {
  int max_depth = 4;
  bool oblique = true;
  std::size_t min_samples_split = 4;
  std::uint64_t seed = 0;
};

struct GbmConfig {
  int n_trees = 10;
  double learning_rate = 0.3;
  int depth = 2;
};

struct MlpConfig {
  std::vector<int> hidden{8};
  int epochs = 200;
  double learning_rate = 1e-2;
  std::size_t batch = 32;
  std::uint64_t seed = 0;
};

/// Hinge loss with L2 penalty, Pegasos-style subgradient steps over a
/// seeded permutation; features standardized internally.
/// Throws DegenerateDataset on one label or constant features.
LinearModel train_svc(const Dataset& data, const SvcConfig& config = {});

/// Epsilon-insensitive linear regression warm-started from least squares.
/// Throws DegenerateDataset with fewer than n + 1 samples.
LinearModel train_svr(const Dataset& data, const SvrConfig& config = {});

/// Greedy top-down tree with axis-parallel and local-linear split
/// candidates. Gini gain for classification, SSE reduction for regression.
ObliqueTree train_tree(const Dataset& data, Task task, const TreeConfig& config = {});

/// Least-squares boosting of axis-parallel regression trees on residuals.
GbmEnsemble train_gbm(const Dataset& data, Task task, const GbmConfig& config = {});

/// Adam on MSE (regression) or logistic loss (classification). Inputs and
/// targets are standardized during training and folded back into weights.
Mlp train_mlp(const Dataset& data, Task task, const MlpConfig& config = {});

struct SelectionConfig {
  std::vector<Family> candidates{Family::kSvm, Family::kTree, Family::kGbm, Family::kMlp};
  double train_fraction = 0.7;
  std::uint64_t seed = 0;
  SvcConfig svc;
  SvrConfig svr;
  TreeConfig tree;
  GbmConfig gbm;
  MlpConfig mlp;
};

struct CandidateScore {
  Family family;
  double score;
};

/// Trains each candidate on a stratified split and keeps the one with the
/// best held-out accuracy (classification) or R^2 (regression). Ties go to
/// the earlier family in the order SVM, tree, GBM, MLP.
/// Throws DegenerateDataset.
Surrogate select_surrogate(const Dataset& data, Task task, const SelectionConfig& config = {},
                           std::vector<CandidateScore>* scores = nullptr);

/// Number of select_surrogate calls made by this process.
std::uint64_t selection_calls();

/// Fraction of samples whose verdict (classification) matches the label.
double accuracy(const Surrogate& s, const Dataset& data);
/// Coefficient of determination of predictions.
double r_squared(const Surrogate& s, const Dataset& data);

}  // namespace goml::learners
