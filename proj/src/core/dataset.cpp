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


#include "goml/core/dataset.hpp"

#include "goml/core/polyhedron.hpp"

#include <algorithm>
#include <cmath>

namespace goml {

const char* to_string(Task task) { return task == Task::kClassifier ? "classifier" : "regressor"; }

std::pair<std::size_t, std::size_t> label_counts(const Dataset& data) {
  std::size_t ones = 0;
  for (const auto& s : data) ones += s.label > 0.5 ? 1 : 0;
  return {data.size() - ones, ones};
}

bool within_box(const Dataset& data, const Box& box, double tol) {
  return std::all_of(data.begin(), data.end(), [&](const LabeledSample& s) { return box.contains(s.point, tol); });
}

SupportEvaluator::SupportEvaluator(const NonlinearConstraint& con, std::vector<double> base)
    : con_(&con), base_(std::move(base)) {}

std::vector<double> SupportEvaluator::embed(std::span<const double> reduced) const {
  std::vector<double> x = base_;
  const auto& s = con_->support();
  for (std::size_t k = 0; k < s.size(); ++k) x[static_cast<std::size_t>(s[k])] = reduced[k];
  return x;
}

double SupportEvaluator::operator()(std::span<const double> reduced) const { return con_->value(embed(reduced)); }

double HalfSpace::slack(std::span<const double> x) const {
  double a_x = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) a_x += a[i] * x[i];
  return b - a_x;
}

bool Polyhedron::contains(std::span<const double> x, double tol) const {
  if (!box.contains(x, tol)) return false;
  for (const auto& row : rows) {
    const double s = row.slack(x);
    if (row.strict ? !(s > -tol) : !(s >= -tol)) return false;
  }
  return true;
}

double Polyhedron::min_slack(std::span<const double> x) const {
  double worst = kInf;
  for (std::size_t i = 0; i < box.dim(); ++i) {
    worst = std::min({worst, x[i] - box.lower[i], box.upper[i] - x[i]});
  }
  for (const auto& row : rows) worst = std::min(worst, row.slack(x));
  return worst;
}

Polyhedron Polyhedron::closed(double margin) const {
  Polyhedron out = *this;
  for (auto& row : out.rows) {
    if (row.strict) {
      row.b -= margin;
      row.strict = false;
    }
  }
  return out;
}

}  // namespace goml
