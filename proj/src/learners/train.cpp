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


#include "goml/learners/train.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>

#include "goml/core/error.hpp"
#include "goml/core/random.hpp"

namespace goml::learners {

namespace {

std::atomic<std::uint64_t> g_selection_calls{0};

struct Scaling {
  std::vector<double> mean;
  std::vector<double> scale;
  bool all_constant = true;
};

Scaling feature_scaling(const Dataset& data, const std::vector<std::size_t>& rows) {
  const std::size_t d = data[rows.front()].point.size();
  Scaling s;
  s.mean.assign(d, 0.0);
  s.scale.assign(d, 1.0);
  for (auto r : rows) {
    for (std::size_t k = 0; k < d; ++k) s.mean[k] += data[r].point[k];
  }
  for (auto& m : s.mean) m /= static_cast<double>(rows.size());
  for (std::size_t k = 0; k < d; ++k) {
    double var = 0.0;
    for (auto r : rows) var += (data[r].point[k] - s.mean[k]) * (data[r].point[k] - s.mean[k]);
    const double sd = std::sqrt(var / static_cast<double>(rows.size()));
    if (sd > 1e-12 * std::max(1.0, std::fabs(s.mean[k]))) {
      s.scale[k] = sd;
      s.all_constant = false;
    }
  }
  return s;
}

std::vector<std::size_t> all_rows(const Dataset& data) {
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), 0);
  return rows;
}

std::vector<double> scaled(const std::vector<double>& x, const Scaling& s) {
  std::vector<double> out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = (x[k] - s.mean[k]) / s.scale[k];
  return out;
}

// Maps a model on standardized inputs back to raw inputs.
LinearModel unscale(const std::vector<double>& w, double b, const Scaling& s) {
  LinearModel m;
  m.beta.resize(w.size());
  m.beta0 = b;
  for (std::size_t k = 0; k < w.size(); ++k) {
    m.beta[k] = w[k] / s.scale[k];
    m.beta0 -= m.beta[k] * s.mean[k];
  }
  return m;
}

LinearModel svc_on_rows(const Dataset& data, const std::vector<std::size_t>& rows, const SvcConfig& config) {
  std::size_t ones = 0;
  for (auto r : rows) ones += data[r].label > 0.5 ? 1 : 0;
  if (ones == 0 || ones == rows.size()) throw DegenerateDataset("SVC needs both labels");
  const Scaling s = feature_scaling(data, rows);
  if (s.all_constant) throw DegenerateDataset("SVC features are constant");
  const std::size_t d = s.mean.size();
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  for (auto r : rows) {
    x.push_back(scaled(data[r].point, s));
    y.push_back(data[r].label > 0.5 ? 1.0 : -1.0);
  }
  const std::size_t m = rows.size();
  // Class weights balance the hinge loss across labels.
  const double w_pos = static_cast<double>(m) / (2.0 * static_cast<double>(ones));
  const double w_neg = static_cast<double>(m) / (2.0 * static_cast<double>(m - ones));

  std::vector<double> w(d, 0.0), w_avg(d, 0.0);
  double b = 0.0, b_avg = 0.0;
  std::size_t averaged = 0;
  Rng rng(config.seed);
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  const double t0 = 1.0 / (config.lambda * 0.5);
  double t = 0.0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    for (auto i : order) {
      t += 1.0;
      const double eta = 1.0 / (config.lambda * (t + t0));
      double margin = b;
      for (std::size_t k = 0; k < d; ++k) margin += w[k] * x[i][k];
      margin *= y[i];
      const double shrink = 1.0 - eta * config.lambda;
      for (auto& wk : w) wk *= shrink;
      if (margin < 1.0) {
        const double c = eta * y[i] * (y[i] > 0 ? w_pos : w_neg);
        for (std::size_t k = 0; k < d; ++k) w[k] += c * x[i][k];
        b += c;
      }
      if (2 * epoch >= config.epochs) {
        ++averaged;
        const double a = 1.0 / static_cast<double>(averaged);
        for (std::size_t k = 0; k < d; ++k) w_avg[k] += a * (w[k] - w_avg[k]);
        b_avg += a * (b - b_avg);
      }
    }
  }
  if (averaged == 0) {
    w_avg = w;
    b_avg = b;
  }
  return unscale(w_avg, b_avg, s);
}

struct Gini {
  static double impurity(double n, double ones) {
    if (n <= 0) return 0.0;
    const double p = ones / n;
    return n * (1.0 - p * p - (1.0 - p) * (1.0 - p));
  }
};

struct Split {
  bool found = false;
  double gain = -1.0;
  std::vector<double> a;
  double b = 0.0;
};

// Best threshold on projections z (paired with targets y) for rows `rows`.
void scan_threshold(const std::vector<double>& z, const std::vector<double>& y, Task task,
                    const std::vector<double>& a, double parent, Split& best, bool prefer_existing) {
  const std::size_t m = z.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return z[i] < z[j]; });
  double total_sum = 0.0, total_sq = 0.0;
  for (double v : y) {
    total_sum += v;
    total_sq += v * v;
  }
  double left_sum = 0.0, left_sq = 0.0;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const double v = y[order[k]];
    left_sum += v;
    left_sq += v * v;
    const double zl = z[order[k]];
    const double zr = z[order[k + 1]];
    if (!(zr > zl)) continue;
    const double nl = static_cast<double>(k + 1);
    const double nr = static_cast<double>(m - k - 1);
    double child;
    if (task == Task::kClassifier) {
      child = Gini::impurity(nl, left_sum) + Gini::impurity(nr, total_sum - left_sum);
    } else {
      const double right_sum = total_sum - left_sum;
      child = (left_sq - left_sum * left_sum / nl) + ((total_sq - left_sq) - right_sum * right_sum / nr);
    }
    const double gain = parent - child;
    const double margin = prefer_existing ? 1e-12 * std::max(1.0, std::fabs(parent)) : 0.0;
    if (gain > best.gain + margin) {
      best.found = true;
      best.gain = gain;
      best.a = a;
      best.b = 0.5 * (zl + zr);
    }
  }
}

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, const std::vector<double>& targets, Task task, const TreeConfig& config)
      : data_(data), y_(targets), task_(task), config_(config) {}

  ObliqueTree build() {
    std::vector<std::size_t> rows(data_.size());
    std::iota(rows.begin(), rows.end(), 0);
    nodes_.clear();
    grow(rows, 0);
    merge_equal_leaves(0);
    return compact();
  }

 private:
  double leaf_value(const std::vector<std::size_t>& rows) const {
    double sum = 0.0;
    for (auto r : rows) sum += y_[r];
    const double mean = sum / static_cast<double>(rows.size());
    if (task_ == Task::kClassifier) return mean >= 0.5 ? 1.0 : 0.0;
    return mean;
  }

  double impurity(const std::vector<std::size_t>& rows) const {
    double sum = 0.0, sq = 0.0;
    for (auto r : rows) {
      sum += y_[r];
      sq += y_[r] * y_[r];
    }
    const double n = static_cast<double>(rows.size());
    if (task_ == Task::kClassifier) return Gini::impurity(n, sum);
    return std::max(0.0, sq - sum * sum / n);
  }

  Split best_split(const std::vector<std::size_t>& rows, double parent) const {
    const std::size_t d = data_.front().point.size();
    Split best;
    std::vector<double> z(rows.size()), y(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) y[i] = y_[rows[i]];
    for (std::size_t k = 0; k < d; ++k) {
      for (std::size_t i = 0; i < rows.size(); ++i) z[i] = data_[rows[i]].point[k];
      std::vector<double> a(d, 0.0);
      a[k] = 1.0;
      scan_threshold(z, y, task_, a, parent, best, false);
    }
    if (config_.oblique && d >= 2) {
      if (auto a = oblique_direction(rows)) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
          double s = 0.0;
          for (std::size_t k = 0; k < d; ++k) s += (*a)[k] * data_[rows[i]].point[k];
          z[i] = s;
        }
        scan_threshold(z, y, task_, *a, parent, best, true);
      }
    }
    return best;
  }

  // Normal of a linear model fit to the node's samples, unit length.
  std::optional<std::vector<double>> oblique_direction(const std::vector<std::size_t>& rows) const {
    std::vector<double> a;
    try {
      if (task_ == Task::kClassifier) {
        Dataset local;
        local.reserve(rows.size());
        for (auto r : rows) local.push_back({data_[r].point, y_[r], y_[r]});
        SvcConfig svc;
        svc.epochs = 20;
        svc.seed = config_.seed + rows.size();
        a = svc_on_rows(local, all_rows(local), svc).beta;
      } else {
        const std::size_t d = data_.front().point.size();
        if (rows.size() < d + 2) return std::nullopt;
        Eigen::MatrixXd X(rows.size(), d + 1);
        Eigen::VectorXd Y(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
          X(i, 0) = 1.0;
          for (std::size_t k = 0; k < d; ++k) X(i, k + 1) = data_[rows[i]].point[k];
          Y(i) = y_[rows[i]];
        }
        const Eigen::VectorXd coef = X.colPivHouseholderQr().solve(Y);
        a.assign(coef.data() + 1, coef.data() + coef.size());
      }
    } catch (const DegenerateDataset&) {
      return std::nullopt;
    }
    double norm = 0.0;
    for (double v : a) norm += v * v;
    norm = std::sqrt(norm);
    if (!(norm > 0.0) || !std::isfinite(norm)) return std::nullopt;
    for (auto& v : a) v /= norm;
    return a;
  }

  int grow(const std::vector<std::size_t>& rows, int depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(TreeNode{});
    nodes_[id].prediction = leaf_value(rows);
    const double parent = impurity(rows);
    const double n = static_cast<double>(rows.size());
    const bool pure = parent <= 1e-12 * std::max(1.0, n);
    if (depth >= config_.max_depth || rows.size() < config_.min_samples_split || pure) return id;
    const Split split = best_split(rows, parent);
    if (!split.found || split.gain < 0.0) return id;
    std::vector<std::size_t> left, right;
    for (auto r : rows) {
      double s = 0.0;
      for (std::size_t k = 0; k < split.a.size(); ++k) s += split.a[k] * data_[r].point[k];
      (s <= split.b ? left : right).push_back(r);
    }
    if (left.empty() || right.empty()) return id;
    nodes_[id].leaf = false;
    nodes_[id].a = split.a;
    nodes_[id].b = split.b;
    const int l = grow(left, depth + 1);
    const int r = grow(right, depth + 1);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  void merge_equal_leaves(int k) {
    if (nodes_[k].leaf) return;
    merge_equal_leaves(nodes_[k].left);
    merge_equal_leaves(nodes_[k].right);
    const auto& l = nodes_[nodes_[k].left];
    const auto& r = nodes_[nodes_[k].right];
    if (task_ == Task::kClassifier && l.leaf && r.leaf && l.prediction == r.prediction) {
      nodes_[k].leaf = true;
      nodes_[k].prediction = l.prediction;
      nodes_[k].a.clear();
      nodes_[k].left = nodes_[k].right = -1;
    }
  }

  ObliqueTree compact() const {
    std::vector<TreeNode> out;
    std::function<int(int)> copy = [&](int k) -> int {
      const int id = static_cast<int>(out.size());
      out.push_back(nodes_[k]);
      if (!nodes_[k].leaf) {
        const int l = copy(nodes_[k].left);
        const int r = copy(nodes_[k].right);
        out[id].left = l;
        out[id].right = r;
      }
      return id;
    };
    copy(0);
    return ObliqueTree(std::move(out));
  }

  const Dataset& data_;
  const std::vector<double>& y_;
  Task task_;
  TreeConfig config_;
  std::vector<TreeNode> nodes_;
};

std::vector<double> labels_of(const Dataset& data) {
  std::vector<double> y;
  y.reserve(data.size());
  for (const auto& s : data) y.push_back(s.label);
  return y;
}

}  // namespace

LinearModel train_svc(const Dataset& data, const SvcConfig& config) {
  if (data.empty()) throw DegenerateDataset("empty dataset");
  return svc_on_rows(data, all_rows(data), config);
}

LinearModel train_svr(const Dataset& data, const SvrConfig& config) {
  if (data.empty()) throw DegenerateDataset("empty dataset");
  const std::size_t d = data.front().point.size();
  const std::size_t m = data.size();
  if (m < d + 1) throw DegenerateDataset("SVR needs at least n + 1 samples");
  const Scaling s = feature_scaling(data, all_rows(data));
  double y_mean = 0.0;
  for (const auto& p : data) y_mean += p.label;
  y_mean /= static_cast<double>(m);
  double y_var = 0.0;
  for (const auto& p : data) y_var += (p.label - y_mean) * (p.label - y_mean);
  const double y_sd = std::sqrt(y_var / static_cast<double>(m));
  if (!(y_sd > 1e-12 * std::max(1.0, std::fabs(y_mean)))) {
    LinearModel flat;
    flat.beta.assign(d, 0.0);
    flat.beta0 = y_mean;
    return flat;
  }

  Eigen::MatrixXd X(m, d + 1);
  Eigen::VectorXd Y(m);
  for (std::size_t i = 0; i < m; ++i) {
    X(i, 0) = 1.0;
    const auto z = scaled(data[i].point, s);
    for (std::size_t k = 0; k < d; ++k) X(i, k + 1) = z[k];
    Y(i) = (data[i].label - y_mean) / y_sd;
  }
  Eigen::VectorXd coef = X.colPivHouseholderQr().solve(Y);
  const double eps = config.epsilon_fraction;
  const auto objective = [&](const Eigen::VectorXd& c) {
    const Eigen::VectorXd r = X * c - Y;
    double loss = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) loss += std::max(0.0, std::fabs(r(i)) - eps);
    return loss / static_cast<double>(m) + 0.5 * config.lambda * c.tail(d).squaredNorm();
  };
  Eigen::VectorXd best = coef;
  double best_obj = objective(coef);
  for (int it = 1; it <= config.iterations; ++it) {
    const Eigen::VectorXd r = X * coef - Y;
    Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d + 1));
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      if (std::fabs(r(i)) > eps) g += (r(i) > 0 ? 1.0 : -1.0) * X.row(i).transpose();
    }
    g /= static_cast<double>(m);
    g.tail(d) += config.lambda * coef.tail(d);
    const double gn = g.norm();
    if (gn < 1e-14) break;
    coef -= (0.1 / std::sqrt(static_cast<double>(it))) * g / gn;
    const double obj = objective(coef);
    if (obj < best_obj) {
      best_obj = obj;
      best = coef;
    }
  }
  std::vector<double> w(d);
  for (std::size_t k = 0; k < d; ++k) w[k] = best(static_cast<Eigen::Index>(k + 1)) * y_sd;
  LinearModel model = unscale(w, best(0) * y_sd + y_mean, s);
  return model;
}

ObliqueTree train_tree(const Dataset& data, Task task, const TreeConfig& config) {
  if (data.empty()) throw DegenerateDataset("empty dataset");
  const auto y = labels_of(data);
  return TreeBuilder(data, y, task, config).build();
}

GbmEnsemble train_gbm(const Dataset& data, Task task, const GbmConfig& config) {
  if (data.empty()) throw DegenerateDataset("empty dataset");
  (void)task;
  GbmEnsemble g;
  const auto y = labels_of(data);
  g.base = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  std::vector<double> fitted(y.size(), g.base);
  std::vector<double> residual(y.size());
  TreeConfig tc;
  tc.max_depth = config.depth;
  tc.oblique = false;
  tc.min_samples_split = 2;
  for (int t = 0; t < config.n_trees; ++t) {
    for (std::size_t i = 0; i < y.size(); ++i) residual[i] = y[i] - fitted[i];
    ObliqueTree tree = TreeBuilder(data, residual, Task::kRegressor, tc).build();
    for (std::size_t i = 0; i < y.size(); ++i) fitted[i] += config.learning_rate * tree.predict(data[i].point);
    g.trees.push_back(std::move(tree));
    g.weights.push_back(config.learning_rate);
  }
  return g;
}

Mlp train_mlp(const Dataset& data, Task task, const MlpConfig& config) {
  if (data.empty()) throw DegenerateDataset("empty dataset");
  const std::size_t d = data.front().point.size();
  const std::size_t m = data.size();
  const Scaling s = feature_scaling(data, all_rows(data));
  double y_mean = 0.0, y_sd = 1.0;
  if (task == Task::kRegressor) {
    for (const auto& p : data) y_mean += p.label;
    y_mean /= static_cast<double>(m);
    double var = 0.0;
    for (const auto& p : data) var += (p.label - y_mean) * (p.label - y_mean);
    const double sd = std::sqrt(var / static_cast<double>(m));
    if (sd > 1e-12 * std::max(1.0, std::fabs(y_mean))) y_sd = sd;
  }
  std::vector<std::vector<double>> x(m);
  std::vector<double> y(m);
  for (std::size_t i = 0; i < m; ++i) {
    x[i] = scaled(data[i].point, s);
    y[i] = task == Task::kRegressor ? (data[i].label - y_mean) / y_sd : (data[i].label > 0.5 ? 1.0 : 0.0);
  }

  std::vector<std::size_t> sizes{d};
  for (int h : config.hidden) sizes.push_back(static_cast<std::size_t>(h));
  sizes.push_back(1);
  const std::size_t L = sizes.size() - 1;
  Rng rng(config.seed);
  Mlp net;
  for (std::size_t l = 0; l < L; ++l) {
    DenseLayer layer;
    const double sd = std::sqrt(2.0 / static_cast<double>(sizes[l]));
    layer.weights.assign(sizes[l + 1], std::vector<double>(sizes[l]));
    for (auto& row : layer.weights) {
      for (auto& w : row) w = sd * rng.normal();
    }
    layer.bias.assign(sizes[l + 1], l + 1 < L ? 0.1 : 0.0);
    net.layers.push_back(std::move(layer));
  }

  // Adam state mirrors the parameter layout.
  auto zeros_like = [&] {
    Mlp z = net;
    for (auto& layer : z.layers) {
      for (auto& row : layer.weights) std::fill(row.begin(), row.end(), 0.0);
      std::fill(layer.bias.begin(), layer.bias.end(), 0.0);
    }
    return z;
  };
  Mlp m1 = zeros_like(), m2 = zeros_like(), grad = zeros_like();
  const double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;
  std::int64_t step = 0;

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::vector<double>> act(L + 1), delta(L + 1);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < m; start += config.batch) {
      const std::size_t end = std::min(m, start + config.batch);
      for (auto& layer : grad.layers) {
        for (auto& row : layer.weights) std::fill(row.begin(), row.end(), 0.0);
        std::fill(layer.bias.begin(), layer.bias.end(), 0.0);
      }
      for (std::size_t bi = start; bi < end; ++bi) {
        const std::size_t i = order[bi];
        act[0] = x[i];
        for (std::size_t l = 0; l < L; ++l) {
          const auto& layer = net.layers[l];
          act[l + 1].assign(sizes[l + 1], 0.0);
          for (std::size_t o = 0; o < sizes[l + 1]; ++o) {
            double z = layer.bias[o];
            for (std::size_t k = 0; k < sizes[l]; ++k) z += layer.weights[o][k] * act[l][k];
            act[l + 1][o] = (l + 1 < L) ? std::max(0.0, z) : z;
          }
        }
        const double out = act[L][0];
        double dout;
        if (task == Task::kRegressor) {
          dout = out - y[i];
        } else {
          const double p = out >= 0 ? 1.0 / (1.0 + std::exp(-out)) : std::exp(out) / (1.0 + std::exp(out));
          dout = p - y[i];
        }
        delta[L] = {dout};
        for (std::size_t l = L; l-- > 0;) {
          auto& g = grad.layers[l];
          const auto& layer = net.layers[l];
          delta[l].assign(sizes[l], 0.0);
          for (std::size_t o = 0; o < sizes[l + 1]; ++o) {
            const double dz = delta[l + 1][o];
            if (dz == 0.0) continue;
            g.bias[o] += dz;
            for (std::size_t k = 0; k < sizes[l]; ++k) {
              g.weights[o][k] += dz * act[l][k];
              delta[l][k] += dz * layer.weights[o][k];
            }
          }
          if (l > 0) {
            for (std::size_t k = 0; k < sizes[l]; ++k) {
              if (act[l][k] <= 0.0) delta[l][k] = 0.0;
            }
          }
        }
      }
      ++step;
      const double inv = 1.0 / static_cast<double>(end - start);
      const double c1 = 1.0 - std::pow(beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(beta2, static_cast<double>(step));
      const auto update = [&](double& p, double& mo, double& ve, double g) {
        g *= inv;
        mo = beta1 * mo + (1 - beta1) * g;
        ve = beta2 * ve + (1 - beta2) * g * g;
        p -= config.learning_rate * (mo / c1) / (std::sqrt(ve / c2) + adam_eps);
      };
      for (std::size_t l = 0; l < L; ++l) {
        auto& layer = net.layers[l];
        for (std::size_t o = 0; o < sizes[l + 1]; ++o) {
          for (std::size_t k = 0; k < sizes[l]; ++k) {
            update(layer.weights[o][k], m1.layers[l].weights[o][k], m2.layers[l].weights[o][k],
                   grad.layers[l].weights[o][k]);
          }
          update(layer.bias[o], m1.layers[l].bias[o], m2.layers[l].bias[o], grad.layers[l].bias[o]);
        }
      }
    }
  }

  // Fold the input standardization into the first layer and the target
  // standardization into the output layer.
  auto& first = net.layers.front();
  for (std::size_t o = 0; o < first.outputs(); ++o) {
    for (std::size_t k = 0; k < d; ++k) {
      first.weights[o][k] /= s.scale[k];
      first.bias[o] -= first.weights[o][k] * s.mean[k];
    }
  }
  auto& last = net.layers.back();
  for (auto& w : last.weights[0]) w *= y_sd;
  last.bias[0] = last.bias[0] * y_sd + y_mean;
  return net;
}

double accuracy(const Surrogate& s, const Dataset& data) {
  if (data.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& p : data) hits += predict_feasible(s, p.point) == (p.label > 0.5) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

double r_squared(const Surrogate& s, const Dataset& data) {
  if (data.empty()) return 0.0;
  double mean = 0.0;
  for (const auto& p : data) mean += p.label;
  mean /= static_cast<double>(data.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (const auto& p : data) {
    const double r = p.label - predict(s, p.point);
    ss_res += r * r;
    ss_tot += (p.label - mean) * (p.label - mean);
  }
  if (ss_tot <= 0.0) return ss_res <= 1e-24 ? 1.0 : 0.0;
  return 1.0 - ss_res / ss_tot;
}

std::uint64_t selection_calls() { return g_selection_calls.load(); }

Surrogate select_surrogate(const Dataset& data, Task task, const SelectionConfig& config,
                           std::vector<CandidateScore>* scores) {
  ++g_selection_calls;
  if (data.size() < 10) throw DegenerateDataset("model selection needs at least 10 samples");
  Rng rng(config.seed);
  Dataset train, valid;
  const auto split = [&](std::vector<std::size_t> idx) {
    rng.shuffle(idx);
    std::size_t n_train = static_cast<std::size_t>(std::llround(config.train_fraction * static_cast<double>(idx.size())));
    if (idx.size() >= 2) n_train = std::clamp<std::size_t>(n_train, 1, idx.size() - 1);
    for (std::size_t k = 0; k < idx.size(); ++k) (k < n_train ? train : valid).push_back(data[idx[k]]);
  };
  if (task == Task::kClassifier) {
    std::vector<std::size_t> zeros, ones;
    for (std::size_t i = 0; i < data.size(); ++i) (data[i].label > 0.5 ? ones : zeros).push_back(i);
    if (zeros.empty() || ones.empty()) throw DegenerateDataset("classification data has a single label");
    split(zeros);
    split(ones);
  } else {
    std::vector<std::size_t> idx(data.size());
    std::iota(idx.begin(), idx.end(), 0);
    split(idx);
  }

  std::vector<Family> order = config.candidates;
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());
  std::optional<Surrogate> best;
  for (Family family : order) {
    Surrogate s;
    s.task = task;
    s.family = family;
    s.threshold = task == Task::kClassifier ? default_threshold(family) : 0.0;
    try {
      switch (family) {
        case Family::kSvm:
          if (task == Task::kClassifier) {
            SvcConfig c = config.svc;
            c.seed ^= config.seed;
            s.model = train_svc(train, c);
          } else {
            s.model = train_svr(train, config.svr);
          }
          break;
        case Family::kTree: {
          TreeConfig c = config.tree;
          c.seed ^= config.seed;
          s.model = train_tree(train, task, c);
          break;
        }
        case Family::kGbm: s.model = train_gbm(train, task, config.gbm); break;
        case Family::kMlp: {
          MlpConfig c = config.mlp;
          c.seed ^= config.seed;
          s.model = train_mlp(train, task, c);
          break;
        }
      }
    } catch (const DegenerateDataset&) {
      continue;
    }
    s.validation_score = task == Task::kClassifier ? accuracy(s, valid) : r_squared(s, valid);
    if (scores) scores->push_back({family, s.validation_score});
    if (!best || s.validation_score > best->validation_score) best = std::move(s);
  }
  if (!best) throw DegenerateDataset("no candidate family could be trained");
  return *best;
}

}  // namespace goml::learners
