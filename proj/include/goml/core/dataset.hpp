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

#include <span>
#include <string>
#include <vector>

#include "goml/core/problem.hpp"

namespace goml {

/// One evaluated point. For classification `label` is 0/1 and `value` the
/// raw constraint value; for regression both hold the function value.
struct LabeledSample {
  std::vector<double> point;
  double label = 0.0;
  double value = 0.0;
};

using Dataset = std::vector<LabeledSample>;

enum class Task { kClassifier, kRegressor };

const char* to_string(Task task);

/// Counts of label-0 and label-1 samples.
std::pair<std::size_t, std::size_t> label_counts(const Dataset& data);

/// True when every sample lies in `box` within tol.
bool within_box(const Dataset& data, const Box& box, double tol = 1e-9);

/// Evaluates a constraint on points given in the coordinates of its
/// support; the remaining coordinates are held at `base`.
class SupportEvaluator {
 public:
  SupportEvaluator(const NonlinearConstraint& con, std::vector<double> base);
  const std::vector<int>& support() const { return con_->support(); }
  /// Throws EvaluationError.
  double operator()(std::span<const double> reduced) const;
  std::vector<double> embed(std::span<const double> reduced) const;

 private:
  const NonlinearConstraint* con_;
  std::vector<double> base_;
};

}  // namespace goml
