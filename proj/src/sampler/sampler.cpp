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


#include "goml/sampler/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "goml/core/error.hpp"
#include "goml/learners/train.hpp"
#include "goml/milp/lp.hpp"

namespace goml::sampler {
namespace {

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) { return Rng(seed).split(stream).next(); }

double sq_distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

std::vector<Point> dedupe(std::vector<Point> points, double tol) {
  std::set<std::vector<long long>> seen;
  std::vector<Point> out;
  for (auto& p : points) {
    std::vector<long long> key(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) key[i] = std::llround(p[i] / tol);
    if (seen.insert(std::move(key)).second) out.push_back(std::move(p));
  }
  return out;
}

void round_integral(Point& x, const Box& box, const std::vector<bool>& integral) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (integral[i]) x[i] = std::clamp(std::round(x[i]), box.lower[i], box.upper[i]);
  }
}

}  // namespace

void SamplerConfig::validate() const {
  if (knn_k == 0 || committee == 0 || points_per_polyhedron == 0) throw Error("sampler counts must be positive");
  if (!(tau >= 0.0 && tau <= 1.0)) throw Error("tau must lie in [0, 1]");
  if (rounds < 0) throw Error("rounds must be non-negative");
}

std::vector<Point> boundary_sample(const Box& box, std::size_t cap, std::uint64_t seed) {
  if (!box.finite()) throw Error("boundary sampling needs a finite box");
  const std::size_t n = box.dim();
  if (cap == 0) cap = std::size_t{1} << std::min<std::size_t>(n, 10);
  const auto corner = [&](const std::vector<bool>& bits) {
    Point x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = bits[i] ? box.upper[i] : box.lower[i];
    return x;
  };
  std::vector<Point> out;
  if (n < 63 && (std::uint64_t{1} << n) <= cap) {
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < count; ++mask) {
      std::vector<bool> bits(n);
      for (std::size_t i = 0; i < n; ++i) bits[i] = (mask >> i) & 1U;
      out.push_back(corner(bits));
    }
    return out;
  }
  Rng rng(seed);
  std::set<std::vector<bool>> drawn;
  while (drawn.size() < cap) {
    std::vector<bool> bits(n);
    for (std::size_t i = 0; i < n; ++i) bits[i] = rng.next() & 1U;
    if (drawn.insert(bits).second) out.push_back(corner(bits));
  }
  out.push_back(box.center());
  return out;
}

std::vector<Point> lh_sample(const Box& box, std::size_t n, std::uint64_t seed) {
  if (!box.finite()) throw Error("Latin hypercube sampling needs a finite box");
  if (n == 0) throw Error("Latin hypercube sample size must be positive");
  Rng rng(seed);
  std::vector<Point> out(n, Point(box.dim()));
  std::vector<std::size_t> strata(n);
  for (std::size_t k = 0; k < box.dim(); ++k) {
    std::iota(strata.begin(), strata.end(), 0);
    rng.shuffle(strata);
    const double width = box.upper[k] - box.lower[k];
    for (std::size_t i = 0; i < n; ++i) {
      double u = rng.uniform();
      if (u == 0.0) u = 0.5;
      out[i][k] = box.lower[k] + width * (static_cast<double>(strata[i]) + u) / static_cast<double>(n);
    }
  }
  return out;
}

std::vector<Point> knn_boundary_sample(const Dataset& data, const Box& box, std::size_t k, double tol) {
  std::size_t below = 0;
  for (const auto& s : data) below += s.value <= tol ? 1 : 0;
  if (below == 0 || below == data.size()) throw DegenerateDataset("kNN sampling needs points on both sides");
  const std::size_t m = data.size();
  const std::size_t kk = std::min(k, m - 1);
  std::vector<Point> out;
  std::vector<std::pair<double, std::size_t>> dist(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) dist[j] = {j == i ? kInf : sq_distance(data[i].point, data[j].point), j};
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(kk), dist.end());
    const bool side_i = data[i].value <= tol;
    for (std::size_t r = 0; r < kk; ++r) {
      const auto& other = data[dist[r].second];
      if ((other.value <= tol) == side_i) continue;
      const double gi = data[i].value;
      const double gj = other.value;
      if (gi == gj) continue;
      const double t = gi / (gi - gj);
      Point x(data[i].point.size());
      for (std::size_t c = 0; c < x.size(); ++c) {
        x[c] = std::clamp(data[i].point[c] + t * (other.point[c] - data[i].point[c]), box.lower[c], box.upper[c]);
      }
      out.push_back(std::move(x));
    }
  }
  return dedupe(std::move(out), 1e-7);
}

InteriorPoint find_interior_point(const Polyhedron& poly) {
  const Polyhedron closed = poly.closed();
  if (!closed.box.finite()) throw Error("interior point search needs a finite box");
  const int d = static_cast<int>(closed.dim());
  milp::LpProblem lp;
  lp.num_vars = d + 1;
  lp.minimize = false;
  lp.objective.assign(static_cast<std::size_t>(d + 1), 0.0);
  lp.objective[static_cast<std::size_t>(d)] = 1.0;
  lp.lower = closed.box.lower;
  lp.upper = closed.box.upper;
  lp.lower.push_back(0.0);
  lp.upper.push_back(kInf);
  for (const auto& row : closed.rows) {
    double norm = 0.0;
    milp::Row r;
    for (int i = 0; i < d; ++i) {
      norm += row.a[static_cast<std::size_t>(i)] * row.a[static_cast<std::size_t>(i)];
      if (row.a[static_cast<std::size_t>(i)] != 0.0) r.terms.push_back({i, row.a[static_cast<std::size_t>(i)]});
    }
    if (norm == 0.0) {
      if (row.b < 0.0) throw EmptyPolyhedron("polyhedron has an unsatisfiable row");
      continue;
    }
    r.terms.push_back({d, std::sqrt(norm)});
    r.rhs = row.b;
    lp.rows.push_back(std::move(r));
  }
  for (int i = 0; i < d; ++i) {
    lp.rows.push_back({{{i, 1.0}, {d, -1.0}}, Sense::kGe, closed.box.lower[static_cast<std::size_t>(i)]});
    lp.rows.push_back({{{i, 1.0}, {d, 1.0}}, Sense::kLe, closed.box.upper[static_cast<std::size_t>(i)]});
  }
  const auto sol = milp::solve_lp(lp);
  if (sol.status != milp::SolveStatus::kOptimal || !(sol.x[static_cast<std::size_t>(d)] > 1e-12)) {
    throw EmptyPolyhedron("polyhedron has no interior");
  }
  InteriorPoint out;
  out.x.assign(sol.x.begin(), sol.x.begin() + d);
  out.radius = sol.x[static_cast<std::size_t>(d)];
  return out;
}

std::vector<Point> hit_and_run(const Polyhedron& poly, const Point& x0, std::size_t n, std::uint64_t seed,
                               std::size_t burn_in) {
  const Polyhedron closed = poly.closed();
  const std::size_t d = closed.dim();
  if (x0.size() != d) throw Error("starting point has the wrong dimension");
  if (closed.min_slack(x0) < -1e-9) throw Error("starting point lies outside the polyhedron");
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < d; ++i) {
    if (closed.box.upper[i] - closed.box.lower[i] > 1e-12) free.push_back(i);
  }
  if (free.empty()) throw NumericalCollapse("polyhedron is a single point");
  Rng rng(seed);
  Point x = x0;
  Point u(d, 0.0);
  std::vector<Point> out;
  int collapsed = 0;
  std::size_t step = 0;
  while (out.size() < n) {
    double norm = 0.0;
    std::fill(u.begin(), u.end(), 0.0);
    for (std::size_t i : free) {
      u[i] = rng.normal();
      norm += u[i] * u[i];
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    for (std::size_t i : free) u[i] /= norm;
    double lo = -kInf;
    double hi = kInf;
    const auto limit = [&](double au, double slack) {
      slack = std::max(slack, 0.0);
      if (au > 1e-15) {
        hi = std::min(hi, slack / au);
      } else if (au < -1e-15) {
        lo = std::max(lo, slack / au);
      }
    };
    for (std::size_t i : free) {
      limit(u[i], closed.box.upper[i] - x[i]);
      limit(-u[i], x[i] - closed.box.lower[i]);
    }
    for (const auto& row : closed.rows) {
      double au = 0.0;
      for (std::size_t i : free) au += row.a[i] * u[i];
      limit(au, row.slack(x));
    }
    if (!(hi - lo >= 1e-12)) {
      if (++collapsed >= 100) throw NumericalCollapse("hit-and-run chords collapsed");
      continue;
    }
    collapsed = 0;
    const double lambda = rng.uniform(lo, hi);
    for (std::size_t i : free) x[i] = std::clamp(x[i] + lambda * u[i], closed.box.lower[i], closed.box.upper[i]);
    if (++step > burn_in) out.push_back(x);
  }
  return out;
}

learners::ObliqueTree default_tree_trainer(const Dataset& data, std::uint64_t seed) {
  learners::TreeConfig config;
  config.seed = seed;
  return learners::train_tree(data, Task::kClassifier, config);
}

OctResult oct_adaptive_sample(const Dataset& data, const Box& box, const Evaluator& g, const SamplerConfig& config,
                              const TreeTrainer& trainer) {
  config.validate();
  OctResult result;
  if (data.empty()) return result;
  const std::size_t K = config.committee;
  const std::size_t C = config.subset_size != 0
                            ? std::min(config.subset_size, data.size())
                            : std::min(data.size(), std::max<std::size_t>(50, data.size() / 2));
  Rng rng(config.seed);
  std::vector<std::size_t> order(data.size());
  for (std::size_t t = 0; t < K; ++t) {
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    Dataset subset;
    subset.reserve(C);
    for (std::size_t i = 0; i < C; ++i) subset.push_back(data[order[i]]);
    result.committee.push_back(trainer(subset, rng.next()));
  }

  std::map<std::vector<int>, std::size_t> seen;
  for (const auto& s : data) {
    std::vector<int> leaves(K);
    int positive = 0;
    for (std::size_t t = 0; t < K; ++t) {
      leaves[t] = result.committee[t].leaf_of(s.point);
      positive += result.committee[t].nodes()[static_cast<std::size_t>(leaves[t])].prediction >= 0.5 ? 1 : 0;
    }
    const int negative = static_cast<int>(K) - positive;
    if (std::abs(positive - negative) > static_cast<double>(K) * config.tau) continue;
    if (seen.count(leaves)) continue;
    AmbiguousRegion region;
    region.poly.box = box;
    for (std::size_t t = 0; t < K; ++t) {
      auto rows = result.committee[t].leaf_polyhedron(leaves[t], box).rows;
      region.poly.rows.insert(region.poly.rows.end(), rows.begin(), rows.end());
    }
    region.leaves = leaves;
    region.positive_votes = positive;
    seen.emplace(std::move(leaves), result.regions.size());
    result.regions.push_back(std::move(region));
  }

  for (std::size_t r = 0; r < result.regions.size(); ++r) {
    const auto& poly = result.regions[r].poly;
    std::vector<Point> points;
    try {
      const auto start = find_interior_point(poly);
      points = hit_and_run(poly, start.x, config.points_per_polyhedron, rng.next(), config.burn_in);
    } catch (const EmptyPolyhedron&) {
      continue;
    } catch (const NumericalCollapse&) {
      continue;
    }
    for (auto& x : points) {
      double v = 0.0;
      try {
        v = g(x);
      } catch (const EvaluationError&) {
        ++result.failed;
        continue;
      }
      result.samples.push_back({std::move(x), v <= config.label_tol ? 1.0 : 0.0, v});
      result.source.push_back(r);
    }
  }
  return result;
}

namespace {

struct Context {
  SampleSet set;
  std::vector<bool> integral;
  std::vector<double> base;
  const NonlinearConstraint* con = nullptr;
  double tol = kFeasibilityTol;

  double evaluate(std::span<const double> reduced) const {
    std::vector<double> x = base;
    for (std::size_t k = 0; k < set.support.size(); ++k) x[static_cast<std::size_t>(set.support[k])] = reduced[k];
    return con->value(x);
  }

  std::size_t add(std::vector<Point> points) {
    std::size_t added = 0;
    for (auto& p : points) {
      round_integral(p, set.box, integral);
      double v = 0.0;
      try {
        v = evaluate(p);
      } catch (const EvaluationError&) {
        ++set.sizes.failed;
        continue;
      }
      const double label = set.task == Task::kRegressor ? v : (v <= tol ? 1.0 : 0.0);
      set.data.push_back({std::move(p), label, v});
      ++added;
    }
    return added;
  }
};

Context make_context(const NonlinearConstraint& con, const Box& box, const std::vector<bool>& integral,
                     const SamplerConfig& config, Task task) {
  config.validate();
  Context ctx;
  ctx.con = &con;
  ctx.tol = config.label_tol;
  ctx.set.support = con.support();
  if (ctx.set.support.empty()) throw DegenerateDataset("function '" + con.name() + "' involves no variables");
  ctx.set.box = box.subset(ctx.set.support);
  if (!ctx.set.box.finite()) throw Error("function '" + con.name() + "' involves unbounded variables");
  ctx.set.task = task;
  for (int i : ctx.set.support) ctx.integral.push_back(integral.at(static_cast<std::size_t>(i)));
  ctx.base.resize(box.dim());
  for (std::size_t i = 0; i < box.dim(); ++i) ctx.base[i] = std::clamp(0.0, box.lower[i], box.upper[i]);
  return ctx;
}

void initial_design(Context& ctx, const SamplerConfig& config) {
  ctx.set.sizes.boundary = ctx.add(boundary_sample(ctx.set.box, config.corner_cap, stream_seed(config.seed, 1)));
  ctx.set.sizes.latin = ctx.add(lh_sample(ctx.set.box, config.n_lh, stream_seed(config.seed, 2)));
}

}  // namespace

SampleSet sample_constraint(const NonlinearConstraint& con, const Box& box, const std::vector<bool>& integral,
                            const SamplerConfig& config) {
  const Task task = con.kind() == ConstraintKind::kEquality ? Task::kRegressor : Task::kClassifier;
  Context ctx = make_context(con, box, integral, config, task);
  initial_design(ctx, config);
  const auto both_sides = [&] {
    std::size_t below = 0;
    for (const auto& s : ctx.set.data) below += s.value <= ctx.tol ? 1 : 0;
    return below > 0 && below < ctx.set.data.size();
  };
  if (config.knn_sampling && both_sides()) {
    ctx.set.sizes.knn = ctx.add(knn_boundary_sample(ctx.set.data, ctx.set.box, config.knn_k, ctx.tol));
  }
  if (config.oct_sampling && task == Task::kClassifier) {
    for (int round = 0; round < config.rounds && both_sides(); ++round) {
      SamplerConfig c = config;
      c.seed = stream_seed(config.seed, 10 + static_cast<std::uint64_t>(round));
      const auto oct = oct_adaptive_sample(ctx.set.data, ctx.set.box,
                                           [&](std::span<const double> x) { return ctx.evaluate(x); }, c);
      ctx.set.sizes.failed += oct.failed;
      if (std::find(ctx.integral.begin(), ctx.integral.end(), true) == ctx.integral.end()) {
        ctx.set.data.insert(ctx.set.data.end(), oct.samples.begin(), oct.samples.end());
        ctx.set.sizes.oct += oct.samples.size();
      } else {
        std::vector<Point> points;
        for (const auto& s : oct.samples) points.push_back(s.point);
        ctx.set.sizes.oct += ctx.add(std::move(points));
      }
    }
  }
  return std::move(ctx.set);
}

SampleSet sample_objective(const NonlinearConstraint& objective, const Box& box, const std::vector<bool>& integral,
                           const SamplerConfig& config) {
  Context ctx = make_context(objective, box, integral, config, Task::kRegressor);
  initial_design(ctx, config);
  return std::move(ctx.set);
}

}  // namespace goml::sampler
