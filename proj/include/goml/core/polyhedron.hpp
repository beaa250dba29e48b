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
#include <vector>

#include "goml/core/problem.hpp"

namespace goml {

/// a.x <= b, or a.x < b when strict.
struct HalfSpace {
  std::vector<double> a;
  double b = 0.0;
  bool strict = false;

  double slack(std::span<const double> x) const;
};

/// Intersection of half-spaces and a box.
struct Polyhedron {
  std::vector<HalfSpace> rows;
  Box box;

  std::size_t dim() const { return box.dim(); }
  /// Membership with the strict/non-strict convention; tol loosens both.
  bool contains(std::span<const double> x, double tol = 0.0) const;
  /// Smallest slack over rows and box faces (negative when violated).
  double min_slack(std::span<const double> x) const;
  /// Strict rows a.x < b become a.x <= b - margin.
  Polyhedron closed(double margin = 1e-7) const;
};

}  // namespace goml
