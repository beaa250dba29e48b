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


#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "goml/core/dataset.hpp"
#include "goml/core/polyhedron.hpp"
#include "goml/core/problem.hpp"
#include "goml/core/random.hpp"
#include "goml/learners/models.hpp"

namespace goml::sampler {

using Point = std::vector<double>;

struct SamplerConfig {
  std::size_t n_lh = 1000;
  std::size_t knn_k = 10;
  /// Upper bound on the number of box corners; 0 selects 2^min(n, 10).
  std::size_t corner_cap = 0;
  /// Committee size K.
  std::size_t committee = 5;
  /// Committee subset size C; 0 selects min(|D|, max(50, |D|/2)).
  std::size_t subset_size = 0;
  /// Discordance threshold tau in [0, 1].
  double tau = 0.5;
  int rounds = 1;
  std::size_t points_per_polyhedron = 10;
  std::size_t burn_in = 20;
  bool knn_sampling = true;
  bool oct_sampling = true;
  double label_tol = kFeasibilityTol;
  std::uint64_t seed = 0;

  /// Throws Error on out-of-range settings.
  void validate() const;
};

/// Box corners: all of them when 2^n <= cap, otherwise cap distinct corners
/// drawn uniformly plus the box center.
std::vector<Point> boundary_sample(const Box& box, std::size_t cap, std::uint64_t seed);

/// Latin hypercube design with one sample per stratum in every dimension.
std::vector<Point> lh_sample(const Box& box, std::size_t n, std::uint64_t seed);

/// Secant zero-crossings between opposite-side pairs among each point's k
/// nearest neighbors. Sides come from the stored values (value <= tol).
/// Throws DegenerateDataset when only one side is present.
std::vector<Point> knn_boundary_sample(const Dataset& data, const Box& box, std::size_t k,
                                       double tol = kFeasibilityTol);

struct InteriorPoint {
  Point x;
  double radius = 0.0;
};

/// Chebyshev center of the closed polyhedron. Throws EmptyPolyhedron.
InteriorPoint find_interior_point(const Polyhedron& poly);

/// Hit-and-run chain from x0 over the closed polyhedron; the first burn_in
/// steps are discarded. Throws NumericalCollapse.
std::vector<Point> hit_and_run(const Polyhedron& poly, const Point& x0, std::size_t n, std::uint64_t seed,
                               std::size_t burn_in = 0);

using TreeTrainer = std::function<learners::ObliqueTree(const Dataset&, std::uint64_t seed)>;
using Evaluator = std::function<double(std::span<const double>)>;

/// Default committee member: a classification tree with default settings.
learners::ObliqueTree default_tree_trainer(const Dataset& data, std::uint64_t seed);

struct AmbiguousRegion {
  Polyhedron poly;
  /// Leaf index in each committee tree.
  std::vector<int> leaves;
  int positive_votes = 0;
};

struct OctResult {
  Dataset samples;
  /// Region each sample was drawn from.
  std::vector<std::size_t> source;
  std::vector<AmbiguousRegion> regions;
  std::vector<learners::ObliqueTree> committee;
  /// Points whose evaluation failed and were dropped.
  std::size_t failed = 0;
};

/// One round of committee-disagreement resampling over `box`.
OctResult oct_adaptive_sample(const Dataset& data, const Box& box, const Evaluator& g, const SamplerConfig& config,
                              const TreeTrainer& trainer = default_tree_trainer);

struct StageSizes {
  std::size_t boundary = 0;
  std::size_t latin = 0;
  std::size_t knn = 0;
  std::size_t oct = 0;
  std::size_t failed = 0;
};

/// Samples in the support coordinates of one function.
struct SampleSet {
  std::vector<int> support;
  Box box;
  Dataset data;
  Task task = Task::kClassifier;
  StageSizes sizes;
};

/// Full sampling pipeline for one nonlinear constraint over the problem box.
/// Inequalities yield labeled feasibility data, equalities regression data.
SampleSet sample_constraint(const NonlinearConstraint& con, const Box& box, const std::vector<bool>& integral,
                            const SamplerConfig& config);

/// Regression data for a nonlinear objective (boundary and Latin hypercube).
SampleSet sample_objective(const NonlinearConstraint& objective, const Box& box, const std::vector<bool>& integral,
                           const SamplerConfig& config);

}  // namespace goml::sampler
